#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "greed/crossprod.hpp"
#include "greed/rng.hpp"

using namespace greed;

namespace {

Vec random_vec(Rng& rng, std::size_t dim, double scale = 1.0) {
  Vec v(dim);
  for (double& x : v) x = rng.next_normal() * scale;
  return v;
}

std::vector<Vec> random_operands(Rng& rng, std::size_t dim) {
  std::vector<Vec> ops(dim - 1);
  for (Vec& v : ops) v = random_vec(rng, dim);
  return ops;
}

}  // namespace

TEST_CASE("cross3 matches the hand-computed oracle") {
  const Vec c = cross3({1, 2, 3}, {4, 5, 6});
  REQUIRE(c == Vec{-3, 6, -3});

  // basis identities
  REQUIRE(cross3({1, 0, 0}, {0, 1, 0}) == Vec{0, 0, 1});
  REQUIRE(cross3({0, 1, 0}, {0, 0, 1}) == Vec{1, 0, 0});
  REQUIRE(cross3({0, 0, 1}, {1, 0, 0}) == Vec{0, 1, 0});
}

TEST_CASE("cross_product at dim 3 is bitwise identical to cross3") {
  Rng rng(derive_seed(7, "dim3-bitwise"));
  for (int trial = 0; trial < 200; ++trial) {
    const Vec a = random_vec(rng, 3, 3.0);
    const Vec b = random_vec(rng, 3, 3.0);
    const Vec via_general = cross_product({a, b});
    const Vec via_cross3 = cross3(a, b);
    for (int i = 0; i < 3; ++i) REQUIRE(via_general[i] == via_cross3[i]);
  }
}

TEST_CASE("four-dimensional basis oracle") {
  const Vec e1{1, 0, 0, 0}, e2{0, 1, 0, 0}, e3{0, 0, 1, 0};
  REQUIRE(cross_product({e1, e2, e3}) == Vec{0, 0, 0, -1});
}

TEST_CASE("cross product is orthogonal to every operand, dims 3 through 8") {
  Rng rng(derive_seed(7, "orthogonality"));
  for (std::size_t dim = 3; dim <= 8; ++dim) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto ops = random_operands(rng, dim);
      const Vec c = cross_product(ops);
      const double scale = std::max(norm(c), 1.0);
      for (const Vec& op : ops)
        REQUIRE(std::abs(dot(c, op)) <= 1e-9 * scale * std::max(norm(op), 1.0));
    }
  }
}

TEST_CASE("swapping the first two operands negates the product bitwise") {
  Rng rng(derive_seed(7, "antisymmetry"));
  for (std::size_t dim = 3; dim <= 8; ++dim) {
    for (int trial = 0; trial < 50; ++trial) {
      auto ops = random_operands(rng, dim);
      const Vec c = cross_product(ops);
      std::swap(ops[0], ops[1]);
      const Vec flipped = cross_product(ops);
      for (std::size_t i = 0; i < dim; ++i) REQUIRE(flipped[i] == -c[i]);
    }
  }
}

TEST_CASE("cross product is linear in each operand") {
  Rng rng(derive_seed(7, "multilinearity"));
  for (std::size_t dim = 3; dim <= 6; ++dim) {
    auto ops = random_operands(rng, dim);
    for (std::size_t slot = 0; slot < ops.size(); ++slot) {
      const Vec a = random_vec(rng, dim);
      const Vec b = random_vec(rng, dim);
      const double lambda = 0.37;

      auto with = [&](const Vec& v) {
        auto probe = ops;
        probe[slot] = v;
        return cross_product(probe);
      };
      Vec combo(dim);
      for (std::size_t i = 0; i < dim; ++i) combo[i] = a[i] + lambda * b[i];
      const Vec lhs = with(combo);
      const Vec ca = with(a);
      const Vec cb = with(b);
      for (std::size_t i = 0; i < dim; ++i)
        REQUIRE(lhs[i] == Catch::Approx(ca[i] + lambda * cb[i]).margin(1e-9));
    }
  }
}

TEST_CASE("repeated operands collapse the product to zero") {
  Rng rng(derive_seed(7, "degenerate"));
  for (std::size_t dim = 3; dim <= 6; ++dim) {
    auto ops = random_operands(rng, dim);
    ops[1] = ops[0];
    const Vec c = cross_product(ops);
    REQUIRE(norm(c) <= 1e-10);
  }
}

TEST_CASE("operand validation") {
  REQUIRE_THROWS_AS(cross_product({}), std::invalid_argument);
  REQUIRE_THROWS_AS(cross_product({Vec{1, 2}}), std::invalid_argument);
  REQUIRE_THROWS_AS(cross_product({Vec{1, 2, 3}}), std::invalid_argument);
  REQUIRE_THROWS_AS(cross_product({Vec{1, 2, 3}, Vec{1, 2, 3}, Vec{1, 2, 3}}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(cross_product({Vec{1, 2, 3}, Vec{1, 2, 3, 4}}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(cross3({1, 2}, {3, 4}), std::invalid_argument);
}

TEST_CASE("jacobian columns match finite differences") {
  Rng rng(derive_seed(7, "jacobian"));
  const double h = 1e-6;
  for (std::size_t dim = 3; dim <= 6; ++dim) {
    auto ops = random_operands(rng, dim);
    for (std::size_t slot = 0; slot < ops.size(); ++slot) {
      const Matrix jac = cross_product_jacobian(ops, slot);
      for (std::size_t j = 0; j < dim; ++j) {
        auto up = ops, down = ops;
        up[slot][j] += h;
        down[slot][j] -= h;
        const Vec cu = cross_product(up);
        const Vec cd = cross_product(down);
        for (std::size_t i = 0; i < dim; ++i) {
          const double fd = (cu[i] - cd[i]) / (2 * h);
          REQUIRE(jac.at(static_cast<int>(i), static_cast<int>(j)) ==
                  Catch::Approx(fd).margin(1e-7));
        }
      }
    }
  }
}

TEST_CASE("scaled cosine endpoints and guard") {
  const Vec r{1.0, 2.0, -1.0};
  Vec aligned = r;
  for (double& x : aligned) x *= 2.5;
  REQUIRE(scaled_cosine(aligned, r) == Catch::Approx(1.0).margin(1e-14));

  Vec opposed = r;
  for (double& x : opposed) x *= -0.3;
  REQUIRE(scaled_cosine(opposed, r) == Catch::Approx(0.0).margin(1e-14));

  const Vec ortho{2.0, -1.0, 0.0};  // orthogonal to (1,2,-1)
  REQUIRE(dot(ortho, r) == 0.0);
  REQUIRE(scaled_cosine(ortho, r) == Catch::Approx(0.5).margin(1e-15));

  REQUIRE(scaled_cosine(Vec{0, 0, 0}, r) == 0.5);
  REQUIRE(scaled_cosine(Vec{1e-13, 0, 0}, r) == 0.5);
  REQUIRE_THROWS_AS(scaled_cosine(r, Vec{0, 0, 0}), std::invalid_argument);
  REQUIRE_THROWS_AS(scaled_cosine(Vec{1, 2}, r), std::invalid_argument);
}

TEST_CASE("scaled cosine of opposite values sums to one") {
  Rng rng(derive_seed(7, "score-antisymmetry"));
  for (int trial = 0; trial < 500; ++trial) {
    const Vec r = random_vec(rng, 3);
    const Vec v = random_vec(rng, 3);
    if (norm(v) < 1e-6 || norm(r) < 1e-6) continue;
    Vec nv = v;
    for (double& x : nv) x = -x;
    REQUIRE(scaled_cosine(v, r) + scaled_cosine(nv, r) ==
            Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("scaled cosine gradient matches finite differences") {
  Rng rng(derive_seed(7, "cosine-grad"));
  const double h = 1e-7;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec r = random_vec(rng, 4);
    const Vec v = random_vec(rng, 4);
    if (norm(v) < 0.1 || norm(r) < 0.1) continue;
    const Vec g = scaled_cosine_grad(v, r);
    for (std::size_t i = 0; i < v.size(); ++i) {
      Vec up = v, down = v;
      up[i] += h;
      down[i] -= h;
      const double fd = (scaled_cosine(up, r) - scaled_cosine(down, r)) / (2 * h);
      REQUIRE(g[i] == Catch::Approx(fd).margin(1e-6));
    }
  }
}

TEST_CASE("scaled cosine gradient is zero inside the guard") {
  const Vec g = scaled_cosine_grad(Vec{0, 0, 0}, Vec{1, 2, 3});
  REQUIRE(g == Vec{0, 0, 0});
}

TEST_CASE("symmetric similarity") {
  Rng rng(derive_seed(7, "similarity"));
  for (int trial = 0; trial < 100; ++trial) {
    const Vec a = random_vec(rng, 5);
    const Vec b = random_vec(rng, 5);
    const double s = scaled_cosine_similarity(a, b);
    REQUIRE(s >= 0.0);
    REQUIRE(s <= 1.0);
    REQUIRE(s == scaled_cosine_similarity(b, a));
  }
  REQUIRE(scaled_cosine_similarity(Vec{0, 0}, Vec{1, 1}) == 0.5);
  REQUIRE(scaled_cosine_similarity(Vec{1, 1}, Vec{0, 0}) == 0.5);
}

TEST_CASE("constant frame") {
  REQUIRE(make_constant_frame(3, 99).vectors.empty());

  const ConstantFrame f6 = make_constant_frame(6, 99);
  REQUIRE(f6.vectors.size() == 3);
  for (const Vec& v : f6.vectors) REQUIRE(v.size() == 6);

  // deterministic for a fixed seed
  const ConstantFrame again = make_constant_frame(6, 99);
  REQUIRE(f6.vectors == again.vectors);
  const ConstantFrame other = make_constant_frame(6, 100);
  REQUIRE(f6.vectors != other.vectors);

  REQUIRE_THROWS_AS(make_constant_frame(2, 1), std::invalid_argument);
}
