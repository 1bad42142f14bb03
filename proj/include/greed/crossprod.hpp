#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "greed/matrix.hpp"
#include "greed/rng.hpp"

namespace greed {

// Norm guard shared by the cross-product head and the direction model: below
// this the cross product carries no usable orientation and the prediction is
// pinned to the neutral 0.5 with zero gradient.
inline constexpr double kDegenerateNorm = 1e-12;

inline double dot(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// Right-handed 3-D cross product.
inline Vec cross3(const Vec& a, const Vec& b) {
  if (a.size() != 3 || b.size() != 3)
    throw std::invalid_argument("cross3: operands must have dimension 3");
  return {a[1] * b[2] - a[2] * b[1],
          a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

namespace detail {

// Determinant by cofactor expansion along the first row. 2x2 base case is the
// plain ad-cb form; with the component sign handling in cross_expansion this
// makes the dim-3 path reduce to cross3 exactly, bit for bit.
inline double det_first_row(const std::vector<Vec>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  double acc = 0.0;
  std::vector<Vec> minor(n - 1, Vec(n - 1));
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0.0) continue;
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor[r - 1][cc++] = m[r][c];
      }
    }
    const double term = m[0][j] * det_first_row(minor);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

// Component i of the (dim-1)-ary cross product: the signed first-row cofactor
// of the formal determinant whose first row is the basis row and whose
// remaining rows are the operands.
inline Vec cross_expansion(const std::vector<Vec>& ops) {
  const std::size_t dim = ops[0].size();
  Vec out(dim, 0.0);
  std::vector<Vec> minor(dim - 1, Vec(dim - 1));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t r = 0; r < dim - 1; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < dim; ++c) {
        if (c == i) continue;
        minor[r][cc++] = ops[r][c];
      }
    }
    const double d = det_first_row(minor);
    out[i] = (i % 2 == 0) ? d : -d;
  }
  return out;
}

inline void check_cross_operands(const std::vector<Vec>& ops) {
  if (ops.empty()) throw std::invalid_argument("cross product: no operands");
  const std::size_t dim = ops[0].size();
  if (dim < 3) throw std::invalid_argument("cross product: dimension must be >= 3");
  if (ops.size() != dim - 1)
    throw std::invalid_argument("cross product: need dim-1 operands, got " +
                                std::to_string(ops.size()) + " for dim " +
                                std::to_string(dim));
  for (const Vec& v : ops)
    if (v.size() != dim)
      throw std::invalid_argument("cross product: operand dimension mismatch");
}

}  // namespace detail

// Generalized (dim-1)-ary cross product in dim >= 3. Output is orthogonal to
// every operand and swapping two operands negates it. The result is the mean
// of the expansion and its negated first-two-swapped form, so swapping the
// first two operands negates the output exactly in floating point; the plain
// expansion would only be antisymmetric up to rounding. At dim 3 this is a
// no-op and the function equals cross3 componentwise.
inline Vec cross_product(const std::vector<Vec>& operands) {
  detail::check_cross_operands(operands);
  const Vec straight = detail::cross_expansion(operands);
  if (operands.size() == 2 && operands[0].size() == 3) {
    // expansion(b, a) is the exact negation of expansion(a, b) at dim 3
    return straight;
  }
  std::vector<Vec> swapped(operands);
  std::swap(swapped[0], swapped[1]);
  const Vec reversed = detail::cross_expansion(swapped);
  Vec out(straight.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (straight[i] - reversed[i]) / 2.0;
  return out;
}

// d(cross_product)/d(operands[index]) as a dim x dim matrix: by
// multilinearity, column j is the cross product with that operand replaced by
// basis vector e_j.
inline Matrix cross_product_jacobian(const std::vector<Vec>& operands,
                                     std::size_t operand_index) {
  detail::check_cross_operands(operands);
  if (operand_index >= operands.size())
    throw std::invalid_argument("cross_product_jacobian: operand index out of range");
  const std::size_t dim = operands[0].size();
  Matrix jac(static_cast<int>(dim), static_cast<int>(dim));
  std::vector<Vec> probe(operands);
  for (std::size_t j = 0; j < dim; ++j) {
    probe[operand_index].assign(dim, 0.0);
    probe[operand_index][j] = 1.0;
    const Vec col = cross_product(probe);
    for (std::size_t i = 0; i < dim; ++i) jac.at(static_cast<int>(i), static_cast<int>(j)) = col[i];
  }
  return jac;
}

// (1 + cos(reference, value)) / 2, the [0,1]-scaled alignment score. Returns
// the neutral 0.5 when ||value|| dips under eps.
inline double scaled_cosine(const Vec& value, const Vec& reference,
                            double eps = kDegenerateNorm) {
  if (value.size() != reference.size())
    throw std::invalid_argument("scaled_cosine: dimension mismatch");
  const double ref_norm = norm(reference);
  if (!(ref_norm > eps)) throw std::invalid_argument("scaled_cosine: zero-norm reference");
  const double val_norm = norm(value);
  if (val_norm < eps) return 0.5;
  double c = dot(reference, value) / (ref_norm * val_norm);
  c = std::clamp(c, -1.0, 1.0);
  return 0.5 + 0.5 * c;
}

// Gradient of scaled_cosine w.r.t. value; zero vector inside the norm guard.
inline Vec scaled_cosine_grad(const Vec& value, const Vec& reference,
                              double eps = kDegenerateNorm) {
  if (value.size() != reference.size())
    throw std::invalid_argument("scaled_cosine_grad: dimension mismatch");
  const double ref_norm = norm(reference);
  if (!(ref_norm > eps)) throw std::invalid_argument("scaled_cosine_grad: zero-norm reference");
  const std::size_t n = value.size();
  Vec g(n, 0.0);
  const double val_norm = norm(value);
  if (val_norm < eps) return g;
  const double c = dot(reference, value) / (ref_norm * val_norm);
  const double inv = 1.0 / (ref_norm * val_norm);
  const double self = c / (val_norm * val_norm);
  for (std::size_t i = 0; i < n; ++i) g[i] = 0.5 * (reference[i] * inv - value[i] * self);
  return g;
}

// Symmetric pair score used for proximity embeddings; 0.5 if either input is
// numerically zero.
inline double scaled_cosine_similarity(const Vec& a, const Vec& b,
                                       double eps = kDegenerateNorm) {
  if (a.size() != b.size())
    throw std::invalid_argument("scaled_cosine_similarity: dimension mismatch");
  const double na = norm(a);
  const double nb = norm(b);
  if (na < eps || nb < eps) return 0.5;
  double c = dot(a, b) / (na * nb);
  c = std::clamp(c, -1.0, 1.0);
  return 0.5 + 0.5 * c;
}

// The N-3 fixed extra operands that lift the binary cross product to
// dimension N. Sampled from a seeded standard normal and re-drawn until
// mutually linearly independent.
struct ConstantFrame {
  std::vector<Vec> vectors;
  std::uint64_t rng_seed = 0;

  std::size_t size() const { return vectors.size(); }
  bool empty() const { return vectors.empty(); }
};

namespace detail {

inline std::size_t row_rank(std::vector<Vec> m) {
  std::size_t rank = 0;
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    for (std::size_t r = rank + 1; r < m.size(); ++r)
      if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
    if (std::abs(m[pivot][c]) < 1e-10) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      const double f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

inline ConstantFrame make_constant_frame(int dim, std::uint64_t seed) {
  if (dim < 3) throw std::invalid_argument("make_constant_frame: dim must be >= 3");
  ConstantFrame frame;
  frame.rng_seed = seed;
  if (dim == 3) return frame;
  const std::size_t count = static_cast<std::size_t>(dim) - 3;
  Rng rng(derive_seed(seed, "constant-frame"));
  for (int attempt = 0; attempt < 100; ++attempt) {
    frame.vectors.assign(count, Vec(static_cast<std::size_t>(dim)));
    for (Vec& v : frame.vectors)
      for (double& x : v) x = rng.next_normal();
    if (detail::row_rank(frame.vectors) == count) return frame;
  }
  throw std::runtime_error("make_constant_frame: could not draw independent vectors");
}

}  // namespace greed
