// Command-line pipeline around the greed library: split a directed edge
// list, train proximity and direction embeddings, and evaluate link
// prediction / node recommendation. Logs go to stderr, data to files or
// stdout. Every stage writes a replayable "key = value" config next to its
// output, so rerunning with --config <that file> reproduces it byte for
// byte.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "greed/greed.hpp"

namespace {

using namespace greed;

void log_line(const std::string& msg) { std::cerr << msg << "\n"; }

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Expands `--config <file>` before CLI11 sees the arguments: every
// `key = value` line becomes a --key=value token unless that option was
// already given explicitly, so command-line flags override the file.  (CLI11
// only applies config files registered on the root command; replay configs
// here are per-subcommand, hence the manual pass.)
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size())
        throw std::runtime_error("--config requires a file path");
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(std::string("--config=").size());
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;

  std::set<std::string> given;
  for (const std::string& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));

  auto in = open_input(path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim_copy(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    const std::string key = eq == std::string::npos ? std::string()
                                                    : trim_copy(stripped.substr(0, eq));
    if (key.empty())
      throw std::runtime_error(path + " line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    if (given.count("--" + key)) continue;
    args.push_back("--" + key + "=" + trim_copy(stripped.substr(eq + 1)));
  }
  return args;
}

// Registered on every subcommand for --help only; the actual expansion
// happens in expand_config_args before parsing.
void add_config_option(CLI::App* sub) {
  sub->add_option("--config",
                  "replay config of 'key = value' lines; explicit flags win");
}

// Replayable provenance: the emitted file is a valid --config input for the
// subcommand that produced it.
void write_run_config(const std::string& path, const std::string& subcommand,
                      const std::vector<std::pair<std::string, std::string>>& fields) {
  auto out = open_output(path);
  out << "# replay with: greed " << subcommand << " --config " << path << "\n";
  for (const auto& [k, v] : fields) out << k << " = " << v << "\n";
}

void write_threshold_file(const std::string& path, const ThresholdPick& pick) {
  auto out = open_output(path);
  out << "proximity-threshold v1\n";
  out << "threshold " << fmt_g17(pick.threshold) << "\n";
  out << "youden_j " << fmt_g17(pick.youden_j) << "\n";
}

double read_threshold_file(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || line != "proximity-threshold v1")
    throw std::runtime_error("unknown threshold file format: " + path);
  std::string key;
  double value;
  if (!(in >> key >> value) || key != "threshold")
    throw std::runtime_error("bad threshold file: " + path);
  return value;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

// ---------------------------------------------------------------- split ----

struct SplitOpts {
  std::string edges;
  std::string out_dir;
  double test_frac = 0.20;
  std::uint64_t seed = 1;
};

void run_split(const SplitOpts& o) {
  std::filesystem::create_directories(o.out_dir);
  log_line("loading edge list from " + o.edges);
  const LoadedGraph loaded = load_edge_list(o.edges);
  log_line("graph: " + std::to_string(loaded.graph.node_count()) + " nodes, " +
           std::to_string(loaded.graph.edge_count()) + " edges (" +
           std::to_string(loaded.stats.self_loops_dropped) + " self loops, " +
           std::to_string(loaded.stats.duplicate_edges_dropped) +
           " duplicates dropped)");

  const SplitResult split = split_edges(loaded.graph, SplitSpec{o.test_frac, o.seed});
  log_line("split: " + std::to_string(split.train.edge_count()) + " train edges, " +
           std::to_string(split.test_pos.size()) + " test positives");

  const auto dir = std::filesystem::path(o.out_dir);
  write_edge_list((dir / "train.edges").string(), split.train);
  write_id_map((dir / "id_map.txt").string(), loaded.ids);
  write_pairs((dir / "test_pos.pairs").string(), loaded.graph.node_count(),
              split.test_pos);
  for (DatasetType type : {DatasetType::type1, DatasetType::type2, DatasetType::type3}) {
    const auto set = build_test_set(loaded.graph, split.test_pos, type, o.seed);
    const std::string name = std::string("test_") + dataset_type_name(type) + ".pairs";
    write_pairs((dir / name).string(), loaded.graph.node_count(), set);
    log_line(name + ": " + std::to_string(set.size()) + " pairs");
  }
  write_run_config((dir / "split.config").string(), "split",
                   {{"edges", o.edges},
                    {"out", o.out_dir},
                    {"test-frac", fmt_g17(o.test_frac)},
                    {"seed", std::to_string(o.seed)}});
}

// ------------------------------------------------------ train-proximity ----

struct TrainProximityOpts {
  std::string train_path;
  std::string output;
  std::string threshold_out;  // defaults to output + ".threshold"
  int dim = 128;
  int walks = 40;
  int walk_len = 40;
  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  double validation_fraction = 0.10;
  int threads = 1;
  std::uint64_t seed = 1;
};

void run_train_proximity(const TrainProximityOpts& o) {
  if (o.threads > 1)
    log_line("note: deterministic single-worker training; --threads has no effect");
  const DirectedGraph train = read_internal_edge_list(o.train_path);
  log_line("training graph: " + std::to_string(train.node_count()) + " nodes, " +
           std::to_string(train.edge_count()) + " edges");

  WalkConfig wcfg;
  wcfg.num_walks_per_node = o.walks;
  wcfg.walk_length = o.walk_len;
  wcfg.rng_seed = o.seed;

  SkipGramConfig scfg;
  scfg.dim = o.dim;
  scfg.window = o.window;
  scfg.negatives = o.negatives;
  scfg.epochs = o.epochs;
  scfg.learning_rate = o.learning_rate;
  scfg.rng_seed = o.seed;

  SkipGramStats stats;
  const EmbeddingTable table = train_skipgram(
      train.node_count(), make_walk_source(train, wcfg, /*undirected=*/true), scfg,
      &stats);
  log_line("corpus: " + std::to_string(stats.corpus_tokens) + " tokens per epoch, " +
           std::to_string(stats.zero_frequency_nodes) + " nodes never visited");
  save_embeddings(o.output, table);
  log_line("wrote " + std::to_string(table.count) + " x " + std::to_string(table.dim) +
           " proximity embeddings to " + o.output);

  // pick the gate on held-back training edges plus sampled non-edges
  const auto val = build_validation_pairs(train, o.validation_fraction, o.seed);
  const ThresholdPick pick = pick_proximity_threshold(table, val);
  if (pick.youden_j <= 0.0)
    log_line("warning: validation scores barely separate (J " +
             fmt_g17(pick.youden_j) + ")");
  const std::string threshold_path =
      o.threshold_out.empty() ? o.output + ".threshold" : o.threshold_out;
  write_threshold_file(threshold_path, pick);
  log_line("proximity gate: threshold " + fmt_g17(pick.threshold) + " (J " +
           fmt_g17(pick.youden_j) + ") on " + std::to_string(val.size()) +
           " validation pairs");

  write_run_config(o.output + ".config", "train-proximity",
                   {{"train", o.train_path},
                    {"output", o.output},
                    {"threshold-out", threshold_path},
                    {"dim", std::to_string(o.dim)},
                    {"walks", std::to_string(o.walks)},
                    {"walk-len", std::to_string(o.walk_len)},
                    {"window", std::to_string(o.window)},
                    {"negatives", std::to_string(o.negatives)},
                    {"epochs", std::to_string(o.epochs)},
                    {"lr", fmt_g17(o.learning_rate)},
                    {"validation-fraction", fmt_g17(o.validation_fraction)},
                    {"seed", std::to_string(o.seed)}});
}

// ------------------------------------------------------ train-direction ----

struct TrainDirectionOpts {
  std::string train_path;
  std::string output;
  std::string resume;
  int input_dim = 64;
  std::vector<int> hidden = {256, 256};
  int output_dim = 3;
  double margin = 0.25;
  double tau = 0.5;
  double learning_rate = 0.025;
  int batch_size = 512;
  int epochs = 5;
  int max_hop = 3;
  bool gradcheck = false;
  int threads = 1;
  std::uint64_t seed = 1;
};

void run_train_direction(const TrainDirectionOpts& o) {
  if (o.threads > 1)
    log_line("note: deterministic single-worker training; --threads has no effect");
  if (o.gradcheck) {
    ModelConfig tiny;
    tiny.input_dim = 5;
    tiny.hidden = {7};
    tiny.output_dim = o.output_dim;
    tiny.rng_seed = o.seed;
    DirectionModel probe(tiny, 4);
    const std::vector<LabeledPair> probe_pairs = {{0, 1, 1}, {1, 0, 0}, {2, 3, 1},
                                                  {3, 2, 0}};
    const GradCheckReport rep = check_gradients(probe, probe_pairs);
    log_line("gradcheck: " + std::to_string(rep.checked) + " parameters, max rel err " +
             fmt_g17(rep.max_rel_error));
    if (!rep.passed())
      throw std::runtime_error("gradient check failed; aborting before training");
  }

  const DirectedGraph train = read_internal_edge_list(o.train_path);
  log_line("training graph: " + std::to_string(train.node_count()) + " nodes, " +
           std::to_string(train.edge_count()) + " edges");

  WalkConfig wcfg;
  wcfg.max_hop_for_direction = o.max_hop;
  wcfg.rng_seed = o.seed;
  const auto pairs = build_direction_pairs(train, wcfg);
  log_line("direction pairs: " + std::to_string(pairs.size()));

  DirectionModel model;
  if (o.resume.empty()) {
    ModelConfig mcfg;
    mcfg.input_dim = o.input_dim;
    mcfg.hidden = o.hidden;
    mcfg.output_dim = o.output_dim;
    mcfg.margin = o.margin;
    mcfg.tau = o.tau;
    mcfg.learning_rate = o.learning_rate;
    mcfg.batch_size = o.batch_size;
    mcfg.epochs = o.epochs;
    mcfg.rng_seed = o.seed;
    model = DirectionModel(mcfg, train.node_count());
  } else {
    model = load_model(o.resume);
    if (model.node_count() != train.node_count())
      throw std::runtime_error("resume checkpoint node count (" +
                               std::to_string(model.node_count()) +
                               ") does not match training graph (" +
                               std::to_string(train.node_count()) + ")");
    model.cfg.learning_rate = o.learning_rate;
    model.cfg.batch_size = o.batch_size;
    model.cfg.epochs = o.epochs;
    model.cfg.rng_seed = o.seed;
    log_line("resumed from " + o.resume + "; loss before further training: " +
             fmt_g17(model.mean_loss(pairs)));
  }

  const TrainReport report = model.train(pairs);
  for (std::size_t e = 0; e < report.epoch_losses.size(); ++e)
    log_line("epoch " + std::to_string(e) + ": mean loss " +
             fmt_g17(report.epoch_losses[e]));
  save_model(o.output, model);
  log_line("wrote model checkpoint to " + o.output);

  std::vector<std::pair<std::string, std::string>> fields = {
      {"train", o.train_path},
      {"output", o.output},
      {"input-dim", std::to_string(o.input_dim)},
      {"hidden", join_ints(o.hidden)},
      {"output-dim", std::to_string(o.output_dim)},
      {"margin", fmt_g17(o.margin)},
      {"tau", fmt_g17(o.tau)},
      {"lr", fmt_g17(o.learning_rate)},
      {"batch", std::to_string(o.batch_size)},
      {"epochs", std::to_string(o.epochs)},
      {"max-hop", std::to_string(o.max_hop)},
      {"seed", std::to_string(o.seed)}};
  if (!o.resume.empty()) fields.push_back({"resume", o.resume});
  write_run_config(o.output + ".config", "train-direction", fields);
}

// ---------------------------------------------------------- evaluate-lp ----

struct EvaluateLpOpts {
  std::vector<std::string> pair_specs;  // "type2=/path/to/pairs"
  std::string proximity;
  std::string model_path;
  std::string threshold_file;
  double threshold = -1.0;  // overrides the file when >= 0
  std::string mode = "two-step";
  std::string output;  // CSV; stdout when empty
};

std::pair<std::string, std::string> parse_pair_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
    throw std::runtime_error("bad --pairs value (want <dataset_type>=<path>): " + spec);
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

void emit_report(const MetricsReport& report, const std::string& output) {
  if (output.empty()) {
    std::cout << report.to_csv();
  } else {
    auto out = open_output(output);
    out << report.to_csv();
    log_line("wrote metrics to " + output);
  }
  std::cerr << report.to_table();
}

void run_evaluate_lp(const EvaluateLpOpts& o) {
  const EmbeddingTable prox = load_embeddings(o.proximity);
  DirectionModel model;
  const ScoreMode mode =
      o.mode == "two-step" ? ScoreMode::two_step : ScoreMode::proximity_only;
  if (mode == ScoreMode::two_step) model = load_model(o.model_path);

  TwoStepScorer scorer;
  scorer.proximity = &prox;
  scorer.model = &model;
  scorer.threshold =
      o.threshold >= 0.0 ? o.threshold : read_threshold_file(o.threshold_file);
  log_line("proximity gate threshold: " + fmt_g17(scorer.threshold));

  std::vector<std::pair<std::string, std::vector<LabeledPair>>> test_sets;
  for (const std::string& spec : o.pair_specs) {
    const auto [dtype, path] = parse_pair_spec(spec);
    PairFile pf = read_pairs(path);
    for (const LabeledPair& p : pf.pairs)
      if (p.source >= prox.count || p.target >= prox.count)
        throw std::runtime_error("pair node out of embedding range in " + path);
    log_line(dtype + ": " + std::to_string(pf.pairs.size()) + " pairs from " + path);
    test_sets.emplace_back(dtype, std::move(pf.pairs));
  }
  emit_report(evaluate_link_prediction(test_sets, scorer, mode), o.output);
}

// ---------------------------------------------------------- evaluate-nr ----

struct EvaluateNrOpts {
  std::string test_pos;
  std::string train_path;
  std::string proximity;
  std::string model_path;
  std::vector<int> ks = {10};
  double sample = 0.10;
  std::uint64_t seed = 1;
  std::string output;
};

void run_evaluate_nr(const EvaluateNrOpts& o) {
  const EmbeddingTable prox = load_embeddings(o.proximity);
  const DirectionModel model = load_model(o.model_path);
  const DirectedGraph train = read_internal_edge_list(o.train_path);
  const PairFile test = read_pairs(o.test_pos);
  if (train.node_count() != prox.count || model.node_count() != prox.count)
    throw std::runtime_error("node counts disagree between train graph (" +
                             std::to_string(train.node_count()) + "), embeddings (" +
                             std::to_string(prox.count) + ") and model (" +
                             std::to_string(model.node_count()) + ")");

  const auto truth = truth_by_source(test.pairs);
  const RecommendFn recommend = [&](NodeId s, int k) {
    return recommend_topk(prox, model, s, k, train.out_adj[s]);
  };
  const std::size_t sampled =
      sample_truth_sources(truth, o.sample, o.seed).size();
  log_line("evaluating " + std::to_string(sampled) + " of " +
           std::to_string(truth.size()) + " sources with held-out edges");
  emit_report(precision_recall_report(truth, recommend, o.ks, o.sample, o.seed),
              o.output);
}

// ------------------------------------------------------------- gradcheck ----

struct GradCheckOpts {
  int input_dim = 5;
  std::vector<int> hidden = {7};
  int output_dim = 3;
  double step = 1e-6;
  double tolerance = 1e-5;
  std::uint64_t seed = 1;
};

void run_gradcheck(const GradCheckOpts& o) {
  ModelConfig cfg;
  cfg.input_dim = o.input_dim;
  cfg.hidden = o.hidden;
  cfg.output_dim = o.output_dim;
  cfg.rng_seed = o.seed;
  DirectionModel model(cfg, 6);
  const std::vector<LabeledPair> pairs = {{0, 1, 1}, {1, 0, 0}, {2, 3, 1},
                                          {3, 2, 0}, {4, 5, 1}, {5, 4, 0}};
  const GradCheckReport report = check_gradients(model, pairs, o.step, o.tolerance);
  std::cout << "checked " << report.checked << " parameters, " << report.failures
            << " failures\n";
  std::cout << "max relative error " << fmt_g17(report.max_rel_error) << " at "
            << report.worst_param << " (tolerance " << fmt_g17(report.tolerance)
            << ")\n";
  if (!report.passed()) throw std::runtime_error("gradient check failed");
}

// ----------------------------------------------------- export-embeddings ----

struct ExportOpts {
  std::string model_path;
  std::string output;
};

void run_export(const ExportOpts& o) {
  const DirectionModel model = load_model(o.model_path);
  save_embeddings(o.output, model.export_outputs());
  log_line("wrote " + std::to_string(model.node_count()) +
           " direction embeddings (dim " + std::to_string(model.cfg.output_dim) +
           ") to " + o.output);
}

// ------------------------------------------------------------------ wiring --

void setup_split(CLI::App& app) {
  auto o = std::make_shared<SplitOpts>();
  auto* sub = app.add_subcommand("split", "split an edge list into train/test sets");
  add_config_option(sub);
  sub->add_option("--edges", o->edges, "input edge list (src dst per line)")
      ->required();
  sub->add_option("--out", o->out_dir, "output directory")->required();
  sub->add_option("--test-frac", o->test_frac, "held-out edge fraction")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "root RNG seed")->capture_default_str();
  sub->callback([o] { run_split(*o); });
}

void setup_train_proximity(CLI::App& app) {
  auto o = std::make_shared<TrainProximityOpts>();
  auto* sub = app.add_subcommand("train-proximity",
                                 "train proximity embeddings over random walks");
  add_config_option(sub);
  sub->add_option("--train", o->train_path, "training edge list")->required();
  sub->add_option("--output", o->output, "embedding output file")->required();
  sub->add_option("--threshold-out", o->threshold_out,
                  "gate threshold output (default <output>.threshold)");
  sub->add_option("--dim", o->dim, "embedding dimension")->capture_default_str();
  sub->add_option("--walks", o->walks, "walks per node")->capture_default_str();
  sub->add_option("--walk-len", o->walk_len, "steps per walk")->capture_default_str();
  sub->add_option("--window", o->window, "skip-gram window")->capture_default_str();
  sub->add_option("--negatives", o->negatives, "negative samples per pair")
      ->capture_default_str();
  sub->add_option("--epochs", o->epochs, "training epochs")->capture_default_str();
  sub->add_option("--lr", o->learning_rate, "initial learning rate")
      ->capture_default_str();
  sub->add_option("--validation-fraction", o->validation_fraction,
                  "train-edge share used to pick the gate")
      ->capture_default_str();
  sub->add_option("--threads", o->threads, "worker count (training is single-worker)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "root RNG seed")->capture_default_str();
  sub->callback([o] { run_train_proximity(*o); });
}

void setup_train_direction(CLI::App& app) {
  auto o = std::make_shared<TrainDirectionOpts>();
  auto* sub = app.add_subcommand("train-direction", "train the direction model");
  add_config_option(sub);
  sub->add_option("--train", o->train_path, "training edge list")->required();
  sub->add_option("--output", o->output, "model checkpoint output")->required();
  sub->add_option("--resume", o->resume, "continue training from this checkpoint");
  sub->add_option("--input-dim", o->input_dim, "node vector size")
      ->capture_default_str();
  sub->add_option("--hidden", o->hidden, "hidden layer sizes")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--output-dim", o->output_dim, "cross-product dimension")
      ->capture_default_str();
  sub->add_option("--margin", o->margin, "negative-pair margin")
      ->capture_default_str();
  sub->add_option("--tau", o->tau, "binary direction decision cut")
      ->capture_default_str();
  sub->add_option("--lr", o->learning_rate, "learning rate")->capture_default_str();
  sub->add_option("--batch", o->batch_size, "batch size")->capture_default_str();
  sub->add_option("--epochs", o->epochs, "training epochs")->capture_default_str();
  sub->add_option("--max-hop", o->max_hop, "reachability bound for pair mining")
      ->capture_default_str();
  sub->add_flag("--gradcheck", o->gradcheck,
                "run a finite-difference gradient check first; abort on failure");
  sub->add_option("--threads", o->threads, "worker count (training is single-worker)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "root RNG seed")->capture_default_str();
  sub->callback([o] { run_train_direction(*o); });
}

void setup_evaluate_lp(CLI::App& app) {
  auto o = std::make_shared<EvaluateLpOpts>();
  auto* sub = app.add_subcommand("evaluate-lp", "link-prediction AUC on test pairs");
  add_config_option(sub);
  sub->add_option("--pairs", o->pair_specs,
                  "labeled pair files as <dataset_type>=<path>")
      ->required();
  sub->add_option("--proximity", o->proximity, "proximity embedding file")->required();
  sub->add_option("--model", o->model_path, "direction model checkpoint");
  sub->add_option("--threshold-file", o->threshold_file, "gate threshold file");
  sub->add_option("--threshold", o->threshold, "gate threshold override");
  sub->add_option("--mode", o->mode, "scoring mode")
      ->check(CLI::IsMember({"two-step", "proximity-only"}))
      ->capture_default_str();
  sub->add_option("--output", o->output, "CSV output file (default stdout)");
  sub->callback([o] {
    if (o->mode == "two-step" && o->model_path.empty())
      throw CLI::ValidationError("--model is required in two-step mode");
    if (o->threshold < 0.0 && o->threshold_file.empty())
      throw CLI::ValidationError("provide --threshold or --threshold-file");
    run_evaluate_lp(*o);
  });
}

void setup_evaluate_nr(CLI::App& app) {
  auto o = std::make_shared<EvaluateNrOpts>();
  auto* sub =
      app.add_subcommand("evaluate-nr", "node-recommendation precision/recall@k");
  add_config_option(sub);
  sub->add_option("--test-pos", o->test_pos, "held-out positive pairs")->required();
  sub->add_option("--train", o->train_path, "training edge list (for exclusions)")
      ->required();
  sub->add_option("--proximity", o->proximity, "proximity embedding file")->required();
  sub->add_option("--model", o->model_path, "direction model checkpoint")->required();
  sub->add_option("--k", o->ks, "cutoffs")->delimiter(',')->capture_default_str();
  sub->add_option("--sample", o->sample, "fraction of eligible sources to evaluate")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "source-sampling seed")->capture_default_str();
  sub->add_option("--output", o->output, "CSV output file (default stdout)");
  sub->callback([o] { run_evaluate_nr(*o); });
}

void setup_gradcheck(CLI::App& app) {
  auto o = std::make_shared<GradCheckOpts>();
  auto* sub = app.add_subcommand(
      "gradcheck", "finite-difference check of the direction model gradients");
  add_config_option(sub);
  sub->add_option("--input-dim", o->input_dim, "node vector size")
      ->capture_default_str();
  sub->add_option("--hidden", o->hidden, "hidden layer sizes")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--output-dim", o->output_dim, "cross-product dimension")
      ->capture_default_str();
  sub->add_option("--step", o->step, "finite-difference step")->capture_default_str();
  sub->add_option("--tolerance", o->tolerance, "relative error tolerance")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "model init seed")->capture_default_str();
  sub->callback([o] { run_gradcheck(*o); });
}

void setup_export(CLI::App& app) {
  auto o = std::make_shared<ExportOpts>();
  auto* sub = app.add_subcommand("export-embeddings",
                                 "write per-node direction embeddings from a model");
  add_config_option(sub);
  sub->add_option("--model", o->model_path, "direction model checkpoint")->required();
  sub->add_option("--output", o->output, "embedding output file")->required();
  sub->callback([o] { run_export(*o); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"directed-graph node embeddings: proximity plus edge direction"};
  app.name("greed");
  app.require_subcommand(1);
  setup_split(app);
  setup_train_proximity(app);
  setup_train_direction(app);
  setup_evaluate_lp(app);
  setup_evaluate_nr(app);
  setup_gradcheck(app);
  setup_export(app);
  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
