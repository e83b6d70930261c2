// cascade-dtw: ingest interaction logs, generate synthetic cascades, and
// classify or evaluate propagation networks with DTW-based k-NN.
//
// Exit codes: 0 success, 1 usage error, 2 data/parse error,
// 3 internal invariant violation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cascade_dtw/cascade_dtw.hpp"
#include "json.hpp"

namespace cd = cascade_dtw;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Options shared by classify, evaluate and sweep-k.
struct ClassifierArgs {
  std::string classifier = "prob";
  double alpha0 = 0.95;
  int beta = 1;
  std::string gamma = "auto";
  std::string rule = "dempster";
  std::string distance = "euclidean";
  bool symmetrize = false;
  bool discretize = false;
  std::size_t max_dipaths = cd::kDefaultMaxDipaths;

  void attach(CLI::App& cmd) {
    cmd.add_option("--classifier", classifier, "prob | evid")->check(CLI::IsMember({"prob", "evid"}));
    cmd.add_option("--alpha0", alpha0, "Evidential alpha0 in (0,1)")->capture_default_str();
    cmd.add_option("--beta", beta, "Evidential distance exponent (positive integer)")->capture_default_str();
    cmd.add_option("--gamma", gamma, "auto | <value> | class=value,...")->capture_default_str();
    cmd.add_option("--rule", rule, "dempster | conjunctive | disjunctive")
        ->check(CLI::IsMember({"dempster", "conjunctive", "disjunctive"}));
    cmd.add_option("--distance", distance, "Arc weight distance: euclidean | manhattan")
        ->check(CLI::IsMember({"euclidean", "manhattan"}));
    cmd.add_flag("--symmetrize", symmetrize, "Average both argument orders of the network distance");
    cmd.add_flag("--discretize", discretize, "Binarize arc weights before computing distances");
    cmd.add_option("--max-dipaths", max_dipaths, "Refuse networks with more dipaths than this")
        ->capture_default_str();
  }

  cd::GammaSetting gamma_setting() const {
    if (gamma == "auto") return cd::GammaAuto{};
    if (gamma.find('=') == std::string::npos) {
      try {
        std::size_t used = 0;
        const double g = std::stod(gamma, &used);
        if (used != gamma.size()) throw std::invalid_argument(gamma);
        return g;
      } catch (const std::exception&) {
        throw UsageError("--gamma expects auto, a number, or class=value pairs");
      }
    }
    std::map<std::string, double> per_class;
    for (const auto& pair : split_list(gamma)) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos) throw UsageError("--gamma: expected class=value, got '" + pair + "'");
      try {
        per_class[pair.substr(0, eq)] = std::stod(pair.substr(eq + 1));
      } catch (const std::exception&) {
        throw UsageError("--gamma: bad value in '" + pair + "'");
      }
    }
    return per_class;
  }

  cd::ClassifierSpec spec() const {
    cd::ClassifierSpec s;
    s.kind = classifier == "evid" ? cd::ClassifierKind::evidential : cd::ClassifierKind::probabilistic;
    s.dtw.element_distance = distance == "manhattan" ? cd::ElementDistance::manhattan : cd::ElementDistance::euclidean;
    s.dtw.symmetrize = symmetrize;
    s.dtw.max_dipaths = max_dipaths;
    s.evidential.alpha0 = alpha0;
    s.evidential.beta = beta;
    s.evidential.gamma = gamma_setting();
    s.rule = cd::parse_combination_rule(rule);
    s.discretize = discretize;
    return s;
  }
};

cd::LabeledCorpus load_corpus(const std::string& path, bool discretize) {
  auto nets = cd::read_networks(std::filesystem::path(path));
  if (discretize)
    for (auto& n : nets) n = cd::discretize(n);
  return cd::LabeledCorpus::from_networks(std::move(nets));
}

nlohmann::ordered_json distance_json(double d) {
  return std::isfinite(d) ? nlohmann::ordered_json(d) : nlohmann::ordered_json(nullptr);
}

int run_ingest(const std::string& log_path, const std::string& labels, const std::string& out_path,
               const std::string& wf_mode, bool tree_mode) {
  const auto log = cd::parse_log(std::filesystem::path(log_path));
  cd::TraceOptions options;
  options.follow_mode = wf_mode == "literal" ? cd::FollowWeightMode::literal : cd::FollowWeightMode::reciprocal;
  options.tree_mode = tree_mode;
  std::vector<cd::PropagationNetwork> all;
  for (const auto& label : split_list(labels)) {
    auto nets = cd::build_traces(log, label, options);
    all.insert(all.end(), std::make_move_iterator(nets.begin()), std::make_move_iterator(nets.end()));
  }
  cd::write_networks(std::filesystem::path(out_path), all);
  std::cout << cd::format_stats_table(cd::dataset_stats(all));
  return 0;
}

int run_generate(const std::string& profiles_path, std::size_t n, std::uint64_t seed, double merge,
                 const std::string& out_path) {
  const auto profiles = cd::read_profiles(profiles_path);
  cd::GeneratorOptions options;
  options.merge_probability = merge;
  const auto corpus = cd::generate(profiles, n, seed, options);
  std::vector<cd::PropagationNetwork> nets;
  for (const auto& e : corpus) nets.push_back(e.network);
  cd::write_networks(std::filesystem::path(out_path), nets);
  std::cout << cd::format_stats_table(cd::dataset_stats(nets));
  return 0;
}

int run_classify(const ClassifierArgs& args, const std::string& train_path, const std::string& query_path,
                 std::size_t k, bool explain, const std::string& format) {
  const auto spec = args.spec();
  const auto train = load_corpus(train_path, spec.discretize);
  auto queries = cd::read_networks(std::filesystem::path(query_path));
  if (spec.discretize)
    for (auto& q : queries) q = cd::discretize(q);

  const auto classes = train.labels();
  const auto train_labels = train.entry_labels();
  std::map<std::string, double> gamma;
  if (spec.kind == cd::ClassifierKind::evidential) {
    spec.evidential.check();
    if (classes.size() > 1) {
      if (std::holds_alternative<cd::GammaAuto>(spec.evidential.gamma)) {
        const auto est = cd::estimate_gamma(train, spec.dtw, spec.evidential.beta);
        for (const auto& c : est.fallback_classes) {
          std::cerr << "warning: class '" << c << "' has zero mean intra-class distance; using gamma = 1\n";
        }
        gamma = est.gamma;
      } else {
        gamma = cd::resolve_gamma(spec.evidential.gamma, train, spec.dtw, spec.evidential.beta);
      }
    }
  }

  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const auto& query = queries[qi];
    if (k > train.size()) {
      throw cd::DomainError("k = " + std::to_string(k) + " exceeds training set size " + std::to_string(train.size()));
    }
    const auto distances = cd::query_distances(query, train, spec.dtw);
    auto neighbors = cd::select_neighbors(distances, train_labels, k);
    const auto result = spec.kind == cd::ClassifierKind::evidential
                            ? cd::evidential_decision(std::move(neighbors), classes, spec.evidential.alpha0,
                                                      spec.evidential.beta, gamma, spec.rule)
                            : cd::vote(std::move(neighbors), classes);

    if (format == "json") {
      nlohmann::ordered_json j;
      j["query"] = qi;
      j["source"] = query.source();
      j["label"] = query.label() ? nlohmann::ordered_json(*query.label()) : nlohmann::ordered_json(nullptr);
      j["predicted"] = result.predicted;
      j["tie_broken"] = result.tie_broken;
      j["scores"] = result.scores;
      if (explain) {
        auto arr = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < result.neighbors.size(); ++r) {
          const auto& n = result.neighbors[r];
          arr.push_back({{"rank", r + 1}, {"train_index", n.train_index}, {"label", n.label},
                         {"distance", distance_json(n.distance)}});
        }
        j["neighbors"] = arr;
        if (result.combined) {
          auto masses = nlohmann::ordered_json::array();
          for (const auto& [set, m] : result.combined->focal()) {
            masses.push_back({{"focal", result.combined->frame().members(set)}, {"mass", m}});
          }
          j["mass"] = masses;
        }
      }
      std::cout << j.dump() << '\n';
      continue;
    }

    std::cout << "query " << qi << " (source " << query.source() << "): " << result.predicted
              << (result.tie_broken ? " [tie broken]" : "") << '\n';
    std::cout << "  scores:";
    for (const auto& [label, s] : result.scores) std::cout << ' ' << label << '=' << s;
    std::cout << '\n';
    if (explain) {
      std::cout << "  rank  train_index  label  distance\n";
      for (std::size_t r = 0; r < result.neighbors.size(); ++r) {
        const auto& n = result.neighbors[r];
        std::cout << "  " << r + 1 << "  " << n.train_index << "  " << n.label << "  " << n.distance << '\n';
      }
      if (result.combined) {
        std::cout << "  mass:";
        for (const auto& [set, m] : result.combined->focal()) {
          std::cout << " {";
          const auto members = result.combined->frame().members(set);
          for (std::size_t i = 0; i < members.size(); ++i) std::cout << (i ? "," : "") << members[i];
          std::cout << "}=" << m;
        }
        std::cout << '\n';
      }
    }
  }
  return 0;
}

int run_evaluate(const ClassifierArgs& args, const std::string& data_path, std::vector<std::size_t> k_values,
                 const cd::EvalOptions& options, const std::string& report_path, const std::string& format,
                 bool single) {
  const auto spec = args.spec();
  const auto corpus = load_corpus(data_path, false);
  const auto reports = cd::sweep_k(corpus, spec, k_values, options);

  const std::string json = single ? cd::report_to_json(reports.front()) : cd::reports_to_json(reports);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw cd::ParseError(0, "cannot write " + report_path);
    out << json << '\n';
  }
  if (format == "table") {
    std::cout << cd::format_report_table(reports);
  } else {
    std::cout << json << '\n';
  }
  return 0;
}

void attach_eval_options(CLI::App& cmd, std::string& data, cd::EvalOptions& options, std::string& report,
                         std::string& format) {
  cmd.add_option("--data", data, "Labelled network file (JSON Lines)")->required();
  cmd.add_option("--split", options.train_fraction, "Training fraction")->capture_default_str();
  cmd.add_option("--repeats", options.repeats, "Number of random splits")->capture_default_str();
  cmd.add_option("--seed", options.seed, "Random seed")->capture_default_str();
  cmd.add_flag("--stratified", options.stratified, "Split each class separately");
  cmd.add_flag("--strict", options.strict, "Abort on classification errors");
  cmd.add_option("--threads", options.threads, "Worker threads for the distance table (0 = all cores)");
  cmd.add_option("--report", report, "Write the JSON report here");
  cmd.add_option("--format", format, "json | table")->check(CLI::IsMember({"json", "table"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify message propagation networks with DTW-based k-NN"};
  app.require_subcommand(1);

  std::string log_path, labels, out_path, wf_mode = "reciprocal";
  bool tree_mode = false;
  auto* ingest = app.add_subcommand("ingest", "Build labelled propagation networks from an event log");
  ingest->add_option("--log", log_path, "Event log (JSON Lines)")->required();
  ingest->add_option("--labels", labels, "Comma-separated message classes")->required();
  ingest->add_option("--out", out_path, "Output network file")->required();
  ingest->add_option("--wf-mode", wf_mode, "Follow weight: reciprocal | literal")
      ->check(CLI::IsMember({"reciprocal", "literal"}));
  ingest->add_flag("--tree-mode", tree_mode, "Keep only the nearest earlier propagator as parent");

  std::string profiles_path;
  std::size_t n_per_class = 0;
  std::uint64_t gen_seed = 0;
  double merge = 0.0;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic labelled corpus");
  generate->add_option("--profiles", profiles_path, "Class profile file (JSON array)")->required();
  generate->add_option("--n", n_per_class, "Networks per class")->required();
  generate->add_option("--seed", gen_seed, "Random seed")->required();
  generate->add_option("--out", out_path, "Output network file")->required();
  generate->add_option("--merge-prob", merge, "Probability of an extra DAG arc per node")->capture_default_str();

  ClassifierArgs classify_args;
  std::string train_path, query_path, classify_format = "text";
  std::size_t classify_k = 0;
  bool explain = false;
  auto* classify = app.add_subcommand("classify", "Classify query networks against a training set");
  classify->add_option("--train", train_path, "Labelled training networks")->required();
  classify->add_option("--query", query_path, "Networks to classify")->required();
  classify->add_option("--k", classify_k, "Number of neighbors")->required();
  classify->add_flag("--explain", explain, "Print neighbor distances and combined masses");
  classify->add_option("--format", classify_format, "text | json")->check(CLI::IsMember({"text", "json"}));
  classify_args.attach(*classify);

  ClassifierArgs eval_args;
  std::string eval_data, eval_report, eval_format = "json";
  std::size_t eval_k = 0;
  cd::EvalOptions eval_options;
  auto* evaluate = app.add_subcommand("evaluate", "Repeated holdout accuracy with a 95% CI");
  evaluate->add_option("--k", eval_k, "Number of neighbors")->required();
  attach_eval_options(*evaluate, eval_data, eval_options, eval_report, eval_format);
  eval_args.attach(*evaluate);

  ClassifierArgs sweep_args;
  std::string sweep_data, sweep_report, sweep_format = "json", k_list = "1,3,5,7,9,11";
  cd::EvalOptions sweep_options;
  auto* sweep = app.add_subcommand("sweep-k", "Evaluate several k on shared splits");
  sweep->add_option("--k-values", k_list, "Comma-separated k values")->capture_default_str();
  attach_eval_options(*sweep, sweep_data, sweep_options, sweep_report, sweep_format);
  sweep_args.attach(*sweep);

  std::string stats_data;
  auto* stats = app.add_subcommand("stats", "Per-class user, link and network counts");
  stats->add_option("--data", stats_data, "Network file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest) return run_ingest(log_path, labels, out_path, wf_mode, tree_mode);
    if (*generate) return run_generate(profiles_path, n_per_class, gen_seed, merge, out_path);
    if (*classify) return run_classify(classify_args, train_path, query_path, classify_k, explain, classify_format);
    if (*evaluate) return run_evaluate(eval_args, eval_data, {eval_k}, eval_options, eval_report, eval_format, true);
    if (*sweep) {
      std::vector<std::size_t> ks;
      for (const auto& item : split_list(k_list)) {
        try {
          ks.push_back(static_cast<std::size_t>(std::stoul(item)));
        } catch (const std::exception&) {
          throw UsageError("--k-values: bad entry '" + item + "'");
        }
      }
      return run_evaluate(sweep_args, sweep_data, ks, sweep_options, sweep_report, sweep_format, false);
    }
    if (*stats) {
      std::cout << cd::format_stats_table(cd::dataset_stats(cd::read_networks(std::filesystem::path(stats_data))));
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cd::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitData;
  } catch (const cd::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const cd::StructuralError& e) {
    std::cerr << "invalid network: " << e.what() << '\n';
    return kExitData;
  } catch (const cd::ConflictError& e) {
    std::cerr << "conflict: " << e.what() << '\n';
    return kExitData;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitInternal;
}
