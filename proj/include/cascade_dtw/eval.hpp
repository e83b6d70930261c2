#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cascade_dtw/belief.hpp"
#include "cascade_dtw/corpus.hpp"
#include "cascade_dtw/dtw.hpp"
#include "cascade_dtw/knn.hpp"

namespace cascade_dtw {

enum class ClassifierKind { probabilistic, evidential };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::probabilistic;
  DtwConfig dtw;
  EvidentialParams evidential;
  CombinationRule rule = CombinationRule::dempster;
  /// Replace every arc weight component by 1 if positive, else 0.
  bool discretize = false;
};

/// "prnet-dtw-knn" or "prnet-dtw-evidential-knn".
std::string classifier_id(const ClassifierSpec& spec);

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Uniform random partition: ceil(n * train_fraction) training indices, the
/// rest for testing. With `stratified`, each class is split separately.
/// Throws DomainError unless both parts are non-empty.
SplitIndices split_indices(const LabeledCorpus& corpus, double train_fraction, std::uint64_t seed,
                           bool stratified = false);

std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus, double train_fraction,
                                              std::uint64_t seed, bool stratified = false);

/// prnet_dtw(corpus[q], corpus[t]) for every ordered pair. A network that
/// fails to decompose poisons its row and column with NaN.
class DistanceTable {
 public:
  /// `threads` = 0 uses the hardware concurrency.
  DistanceTable(const LabeledCorpus& corpus, const DtwConfig& cfg, unsigned threads = 0);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t query, std::size_t train) const noexcept { return d_[query * n_ + train]; }
  /// Why network i could not be decomposed; empty if it could.
  const std::string& failure(std::size_t i) const { return failures_[i]; }

 private:
  std::size_t n_;
  std::vector<double> d_;
  std::vector<std::string> failures_;
};

struct EvalOptions {
  double train_fraction = 0.9;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  bool stratified = false;
  /// Abort on the first classification error instead of counting it as
  /// unclassified.
  bool strict = false;
  unsigned threads = 0;
};

inline constexpr const char* kUnclassifiedColumn = "<unclassified>";

struct EvalReport {
  std::string classifier;
  std::size_t k = 0;
  double accuracy = 0.0;
  /// 95% Wald half-width over all aggregated test decisions.
  double ci_halfwidth = 0.0;
  std::size_t decisions = 0;
  std::size_t unclassified = 0;
  /// Row labels (true class). Columns are the same labels followed by
  /// kUnclassifiedColumn.
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<double> split_accuracies;
  double runtime_seconds = 0.0;
};

/// 1.96 * sqrt(p (1 - p) / n); 0 when n = 0.
double wald_halfwidth(double p, std::size_t n) noexcept;

/// trace(confusion) / sum(confusion).
double confusion_accuracy(const std::vector<std::vector<std::size_t>>& confusion) noexcept;

EvalReport evaluate(const LabeledCorpus& corpus, const ClassifierSpec& spec, std::size_t k,
                    const EvalOptions& options = {});

/// One report per k, all evaluated on the same splits. Duplicate k values
/// are rejected.
std::vector<EvalReport> sweep_k(const LabeledCorpus& corpus, const ClassifierSpec& spec,
                                std::span<const std::size_t> k_values, const EvalOptions& options = {});

/// Same as sweep_k but reuses a precomputed table (built from `corpus` with
/// spec.dtw, after any discretization).
std::vector<EvalReport> sweep_k(const LabeledCorpus& corpus, const DistanceTable& table,
                                const ClassifierSpec& spec, std::span<const std::size_t> k_values,
                                const EvalOptions& options = {});

std::string report_to_json(const EvalReport& report);
std::string reports_to_json(std::span<const EvalReport> reports);
/// Accuracy rows in the "88.69% ±3.39" style.
std::string format_report_table(std::span<const EvalReport> reports);

}  // namespace cascade_dtw
