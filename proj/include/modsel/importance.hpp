#pragma once

// Modality importance from self-information. Under approximate conditional
// independence the MCI of X_i lies in [I(X_i;Y), I(X_i;Y) + eps_cond]; adding
// approximate marginal independence puts the Shapley value within
// I(X_i;Y) +/- max(eps_cond, eps_marg).

#include <optional>
#include <string>
#include <vector>

#include "modsel/audit.hpp"
#include "modsel/dataset.hpp"
#include "modsel/oracle.hpp"
#include "modsel/vendor_json.hpp"

namespace modsel {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double x, double tol = 1e-9) const { return x >= lo - tol && x <= hi + tol; }
};

struct ImportanceEpsilons {
  double conditional = 0.0;
  double marginal = 0.0;
  std::string scope = "provided";
  bool lower_bound = true;
  double joint() const { return std::max(conditional, marginal); }

  static ImportanceEpsilons from_estimate(const EpsilonEstimate& est);
};

Interval fast_mci(const DiscreteDataset& data, Modality i, double eps_conditional);
// Raw interval; lo may be negative (display code clamps it).
Interval fast_shapley(const DiscreteDataset& data, Modality i, double eps_conditional,
                      double eps_marginal);

struct ModalityImportance {
  Modality modality = 0;
  double self_mi = 0.0;  // I(X_i; Y): point score for both rankings
  Interval shapley;
  Interval mci;
  std::optional<double> exact_shapley;
  std::optional<double> exact_mci;
  // Set when the exact value exists; false means the epsilon scope was too narrow.
  std::optional<bool> shapley_contained;
  std::optional<bool> mci_contained;
};

struct ImportanceReport {
  std::vector<ModalityImportance> modalities;
  ImportanceEpsilons epsilons;
};

struct ImportanceOptions {
  bool with_exact = false;  // attach enumeration-oracle values
  OracleBudget budget;
};

ImportanceReport importance_report(const DiscreteDataset& data, const ImportanceEpsilons& eps,
                                   const ImportanceOptions& options = {});

enum class RankScore { mci_point, shapley_point };

RankScore parse_rank_score(const std::string& text);

// All modalities by decreasing point score, ties to the lower index.
std::vector<Modality> ranking(const ImportanceReport& report, RankScore score);

// The q modalities with the largest point scores.
ModalitySubset rank_top_q(const ImportanceReport& report, std::size_t q, RankScore score);

ordered_json importance_to_json(const ImportanceReport& report);

}  // namespace modsel
