#include "cascade_dtw/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "cascade_dtw/errors.hpp"
#include "json.hpp"

namespace cascade_dtw {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat) noexcept {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(repeat)));
}

std::size_t train_count(std::size_t n, double fraction) {
  // Guard against n * f landing a hair above an integer.
  return static_cast<std::size_t>(std::ceil(static_cast<double>(n) * fraction - 1e-9));
}

LabeledCorpus discretized(const LabeledCorpus& corpus) {
  std::vector<LabeledNetwork> entries;
  entries.reserve(corpus.size());
  for (const auto& e : corpus) entries.push_back({discretize(e.network), e.label});
  return LabeledCorpus(std::move(entries));
}

void check_k_values(std::span<const std::size_t> k_values) {
  if (k_values.empty()) throw DomainError("no k values given");
  std::set<std::size_t> seen;
  for (auto k : k_values) {
    if (k == 0) throw DomainError("k must be positive");
    if (!seen.insert(k).second) throw DomainError("duplicate k value " + std::to_string(k));
  }
}

}  // namespace

std::string classifier_id(const ClassifierSpec& spec) {
  return spec.kind == ClassifierKind::evidential ? "prnet-dtw-evidential-knn" : "prnet-dtw-knn";
}

SplitIndices split_indices(const LabeledCorpus& corpus, double train_fraction, std::uint64_t seed,
                           bool stratified) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw DomainError("train fraction must lie in (0,1)");
  std::mt19937_64 rng(seed);
  SplitIndices out;

  auto take = [&](std::vector<std::size_t> pool) {
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto n_train = train_count(pool.size(), train_fraction);
    out.train.insert(out.train.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.insert(out.test.end(), pool.begin() + static_cast<std::ptrdiff_t>(n_train), pool.end());
  };

  if (stratified) {
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < corpus.size(); ++i) by_class[corpus[i].label].push_back(i);
    for (auto& [label, pool] : by_class) take(std::move(pool));
  } else {
    std::vector<std::size_t> pool(corpus.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    take(std::move(pool));
  }
  if (out.train.empty() || out.test.empty()) {
    throw DomainError("corpus of " + std::to_string(corpus.size()) +
                      " networks is too small for a non-empty train/test split");
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus, double train_fraction,
                                              std::uint64_t seed, bool stratified) {
  const auto s = split_indices(corpus, train_fraction, seed, stratified);
  return {corpus.subset(s.train), corpus.subset(s.test)};
}

DistanceTable::DistanceTable(const LabeledCorpus& corpus, const DtwConfig& cfg, unsigned threads)
    : n_(corpus.size()), d_(n_ * n_, 0.0), failures_(n_) {
  cfg.check();
  std::vector<std::vector<Dipath>> paths(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    try {
      paths[i] = extract_dipaths(corpus[i].network, cfg.max_dipaths);
    } catch (const StructuralError& e) {
      failures_[i] = e.what();
      if (failures_[i].empty()) failures_[i] = "structural error";
    }
  }

  auto fill_row = [&](std::size_t q) {
    for (std::size_t t = 0; t < n_; ++t) {
      double& cell = d_[q * n_ + t];
      if (!failures_[q].empty() || !failures_[t].empty()) {
        cell = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      cell = dipath_set_distance(paths[q], paths[t], cfg);
      if (cfg.symmetrize) cell = 0.5 * (cell + dipath_set_distance(paths[t], paths[q], cfg));
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n_, 1)));
  if (threads <= 1) {
    for (std::size_t q = 0; q < n_; ++q) fill_row(q);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t q = next++; q < n_; q = next++) fill_row(q);
    });
  }
  for (auto& w : workers) w.join();
}

double wald_halfwidth(double p, std::size_t n) noexcept {
  if (n == 0) return 0.0;
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double confusion_accuracy(const std::vector<std::vector<std::size_t>>& confusion) noexcept {
  std::size_t trace = 0;
  std::size_t total = 0;
  for (std::size_t r = 0; r < confusion.size(); ++r) {
    for (std::size_t c = 0; c < confusion[r].size(); ++c) {
      total += confusion[r][c];
      if (r == c) trace += confusion[r][c];
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(trace) / static_cast<double>(total);
}

EvalReport evaluate(const LabeledCorpus& corpus, const ClassifierSpec& spec, std::size_t k,
                    const EvalOptions& options) {
  const std::size_t ks[] = {k};
  return sweep_k(corpus, spec, ks, options).front();
}

std::vector<EvalReport> sweep_k(const LabeledCorpus& corpus, const ClassifierSpec& spec,
                                std::span<const std::size_t> k_values, const EvalOptions& options) {
  check_k_values(k_values);
  const auto start = std::chrono::steady_clock::now();
  const LabeledCorpus data = spec.discretize ? discretized(corpus) : corpus;
  const DistanceTable table(data, spec.dtw, options.threads);
  auto reports = sweep_k(data, table, spec, k_values, options);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : reports) r.runtime_seconds = elapsed;
  return reports;
}

std::vector<EvalReport> sweep_k(const LabeledCorpus& corpus, const DistanceTable& table,
                                const ClassifierSpec& spec, std::span<const std::size_t> k_values,
                                const EvalOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  check_k_values(k_values);
  if (options.repeats == 0) throw DomainError("repeats must be >= 1");
  if (table.size() != corpus.size()) throw DomainError("distance table does not match the corpus");
  const bool evidential = spec.kind == ClassifierKind::evidential;
  if (evidential) spec.evidential.check();

  const auto labels = corpus.labels();
  const auto entry_labels = corpus.entry_labels();
  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < labels.size(); ++i) row_of[labels[i]] = i;
  const std::size_t unclassified_col = labels.size();

  std::vector<EvalReport> reports(k_values.size());
  for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
    auto& r = reports[ki];
    r.classifier = classifier_id(spec);
    r.k = k_values[ki];
    r.labels = labels;
    r.confusion.assign(labels.size(), std::vector<std::size_t>(labels.size() + 1, 0));
  }

  for (std::size_t rep = 0; rep < options.repeats; ++rep) {
    const auto s = split_indices(corpus, options.train_fraction, repeat_seed(options.seed, rep), options.stratified);
    for (auto k : k_values) {
      if (k > s.train.size()) {
        throw DomainError("k = " + std::to_string(k) + " exceeds training set size " + std::to_string(s.train.size()));
      }
    }
    std::vector<std::string> train_labels;
    train_labels.reserve(s.train.size());
    for (auto i : s.train) train_labels.push_back(entry_labels[i]);
    std::vector<std::string> train_classes = train_labels;
    std::sort(train_classes.begin(), train_classes.end());
    train_classes.erase(std::unique(train_classes.begin(), train_classes.end()), train_classes.end());

    // Gamma depends only on the training split.
    std::map<std::string, double> gamma;
    std::string gamma_error;
    if (evidential && train_classes.size() > 1) {
      try {
        if (std::holds_alternative<GammaAuto>(spec.evidential.gamma)) {
          gamma = estimate_gamma_from_distances(
                      train_labels,
                      [&](std::size_t a, std::size_t b) {
                        const double d = table(s.train[a], s.train[b]);
                        if (std::isnan(d)) {
                          throw StructuralError(table.failure(s.train[a]).empty() ? table.failure(s.train[b])
                                                                                  : table.failure(s.train[a]));
                        }
                        return d;
                      },
                      spec.evidential.beta)
                      .gamma;
        } else if (const auto* g = std::get_if<double>(&spec.evidential.gamma)) {
          for (const auto& c : train_classes) gamma[c] = *g;
        } else {
          gamma = std::get<std::map<std::string, double>>(spec.evidential.gamma);
        }
      } catch (const std::exception& e) {
        if (options.strict) throw;
        gamma_error = e.what();
      }
    }

    std::vector<std::size_t> correct(k_values.size(), 0);
    std::vector<double> distances(s.train.size());
    for (auto q : s.test) {
      const auto row = row_of.at(entry_labels[q]);
      bool usable = table.failure(q).empty() && gamma_error.empty();
      if (options.strict && !table.failure(q).empty()) throw StructuralError(table.failure(q));
      if (options.strict && !gamma_error.empty()) throw DomainError(gamma_error);
      for (std::size_t t = 0; t < s.train.size(); ++t) {
        distances[t] = table(q, s.train[t]);
        if (std::isnan(distances[t])) {
          if (options.strict) throw StructuralError(table.failure(s.train[t]));
          usable = false;
        }
      }
      for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
        std::size_t col = unclassified_col;
        if (usable) {
          try {
            auto neighbors = select_neighbors(distances, train_labels, k_values[ki]);
            const auto result = evidential
                                    ? evidential_decision(std::move(neighbors), train_classes, spec.evidential.alpha0,
                                                          spec.evidential.beta, gamma, spec.rule)
                                    : vote(std::move(neighbors), train_classes);
            col = row_of.at(result.predicted);
          } catch (const std::exception&) {
            if (options.strict) throw;
          }
        }
        ++reports[ki].confusion[row][col];
        if (col == unclassified_col) ++reports[ki].unclassified;
        if (col == row) ++correct[ki];
      }
    }
    for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
      reports[ki].split_accuracies.push_back(static_cast<double>(correct[ki]) / static_cast<double>(s.test.size()));
    }
  }

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : reports) {
    std::size_t total = 0;
    for (const auto& row : r.confusion)
      for (auto c : row) total += c;
    r.decisions = total;
    r.accuracy = confusion_accuracy(r.confusion);
    r.ci_halfwidth = wald_halfwidth(r.accuracy, total);
    r.runtime_seconds = elapsed;
  }
  return reports;
}

namespace {

nlohmann::ordered_json report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["classifier"] = r.classifier;
  j["k"] = r.k;
  j["accuracy"] = r.accuracy;
  j["ci_halfwidth"] = r.ci_halfwidth;
  j["decisions"] = r.decisions;
  j["unclassified"] = r.unclassified;
  j["labels"] = r.labels;
  auto columns = r.labels;
  columns.emplace_back(kUnclassifiedColumn);
  j["confusion_columns"] = columns;
  j["confusion"] = r.confusion;
  j["split_accuracies"] = r.split_accuracies;
  j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

}  // namespace

std::string report_to_json(const EvalReport& report) { return report_json(report).dump(2); }

std::string reports_to_json(std::span<const EvalReport> reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  return arr.dump(2);
}

std::string format_report_table(std::span<const EvalReport> reports) {
  std::ostringstream os;
  os << std::left << std::setw(28) << "classifier" << std::right << std::setw(5) << "k" << std::setw(20)
     << "accuracy (95% CI)" << std::setw(11) << "decisions" << '\n';
  for (const auto& r : reports) {
    std::ostringstream acc;
    acc << std::fixed << std::setprecision(2) << 100.0 * r.accuracy << "% ±" << 100.0 * r.ci_halfwidth;
    os << std::left << std::setw(28) << r.classifier << std::right << std::setw(5) << r.k << std::setw(21)
       << acc.str() << std::setw(11) << r.decisions << '\n';
  }
  return os.str();
}

}  // namespace cascade_dtw
