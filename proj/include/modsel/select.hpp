#pragma once

// Greedy maximization of I(S; Y) under |S| <= q, and the checks that compare
// a greedy run against its approximation guarantee.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modsel/dataset.hpp"
#include "modsel/oracle.hpp"
#include "modsel/vendor_json.hpp"

namespace modsel {

enum class GreedyMode { full_scan, lazy };

struct CandidateScore {
  Modality modality = 0;
  double gain = 0.0;
};

struct IterationRecord {
  Modality chosen = 0;
  double marginal_gain = 0.0;       // I(chosen; Y | S_i)
  double cumulative_utility = 0.0;  // I(S_{i+1}; Y), recomputed from counts
  std::vector<CandidateScore> candidate_scores;  // ascending modality
};

struct SelectionTrace {
  std::size_t q = 0;
  std::size_t p = 0;
  std::string method = "greedy";  // greedy, random, mci, shapley
  std::vector<IterationRecord> iterations;

  // S_i: the first i chosen modalities.
  ModalitySubset prefix(std::size_t i) const;
  ModalitySubset selected() const { return prefix(iterations.size()); }
};

struct GreedyOptions {
  GreedyMode mode = GreedyMode::full_scan;
  // Lazy mode treats a stale gain plus this slack as an upper bound on the
  // fresh gain. With slack >= the submodularity violation of the data the
  // lazy trace equals the full-scan trace.
  double lazy_slack = 0.0;
  unsigned threads = 1;
};

SelectionTrace greedy_select(const DiscreteDataset& data, std::size_t q, std::size_t p,
                             const GreedyOptions& options = {});

// Trace built by adding modalities in a fixed order; gains and utilities are
// measured as for greedy.
SelectionTrace path_trace(const DiscreteDataset& data, std::span<const Modality> order,
                          std::size_t q, std::string method);

struct LossPoint {
  std::size_t size = 0;
  double utility = 0.0;
  double cross_entropy = 0.0;
  double zero_one = 0.0;
};

// Bayes-predictor losses on S_0 = {} through S_p.
std::vector<LossPoint> loss_report(const SelectionTrace& trace, const DiscreteDataset& data);

struct OptSource {
  std::optional<double> provided;  // empty: brute-force oracle
  static OptSource oracle() { return {}; }
  static OptSource value(double v) { return {v}; }
};

struct GuaranteeCheck {
  double greedy_value = 0.0;
  double opt_value = 0.0;
  std::optional<ModalitySubset> opt_subset;
  double factor = 0.0;       // 1 - exp(-p/q)
  double bound_value = 0.0;  // factor * opt - q * eps
  double slack = 0.0;        // greedy - bound
  double epsilon_used = 0.0;
  double label_entropy = 0.0;
  double greedy_cross_entropy = 0.0;
  double greedy_zero_one = 0.0;
  double opt_cross_entropy = 0.0;  // H(Y) - opt
  double loss_bound = 0.0;         // H(Y) - factor * opt + q * eps
  double loss_diff_bound = 0.0;    // exp(-p/q) * opt + q * eps
  std::uint64_t submodularity_triples = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

inline constexpr double kGuaranteeTolerance = 1e-9;

// Recomputes the trace from the data, evaluates the greedy bound and both loss
// bounds, and checks diminishing returns (up to epsilon) for every triple
// S_i subset of S_j, e outside S_j along the trace.
GuaranteeCheck check_guarantee(const SelectionTrace& trace, const DiscreteDataset& data,
                               double epsilon, const OptSource& opt_source,
                               const OracleBudget& budget = {});

ordered_json trace_to_json(const SelectionTrace& trace);
SelectionTrace trace_from_json(const ordered_json& j);
ordered_json losses_to_json(const std::vector<LossPoint>& losses);
ordered_json guarantee_to_json(const GuaranteeCheck& check);

}  // namespace modsel
