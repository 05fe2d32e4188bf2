#pragma once

// Plug-in information measures over discrete data, in nats. The utility of a
// modality subset S is I(S; Y) = H(Y) - H(Y | S).

#include <cstdint>
#include <vector>

#include "modsel/dataset.hpp"

namespace modsel {

// Non-negative quantity in nats. Construction clamps rounding residue.
struct InfoValue {
  double nats = 0.0;

  // Values above -1e-9 are clamped to 0; anything more negative is a bug in
  // the caller and throws.
  static InfoValue clamped(double raw);
  bool operator==(const InfoValue&) const = default;
};

// Magnitudes below this are reported as exactly zero.
inline constexpr double kZeroTolerance = 1e-12;

struct JointCell {
  std::vector<std::uint32_t> values;  // one per variable, label last when present
  double mass = 0.0;
};

// Sparse empirical distribution over a subset (and optionally the label).
struct JointTable {
  ModalitySubset variables;
  bool includes_label = false;
  std::vector<JointCell> cells;  // lexicographic by value tuple
  double total_mass = 0.0;
};

JointTable fit_joint(const DiscreteDataset& data, const ModalitySubset& subset, bool with_label);

InfoValue entropy(const JointTable& table);

InfoValue label_entropy(const DiscreteDataset& data);
InfoValue conditional_entropy(const DiscreteDataset& data, const ModalitySubset& subset);
InfoValue mutual_information(const DiscreteDataset& data, const ModalitySubset& subset);

// I(S; S' | Y). Throws InvalidArgument when the subsets overlap.
InfoValue conditional_mutual_information(const DiscreteDataset& data, const ModalitySubset& s,
                                         const ModalitySubset& s_prime);
// I(S; S').
InfoValue marginal_mutual_information(const DiscreteDataset& data, const ModalitySubset& s,
                                      const ModalitySubset& s_prime);

// Expected losses of the Bayes predictor Pr(Y | S).
struct BayesLosses {
  double cross_entropy = 0.0;
  double zero_one = 0.0;
};

BayesLosses bayes_expected_losses(const DiscreteDataset& data, const ModalitySubset& subset);

// Argmax label per cell of fit_joint(data, subset, false), ties to the lower label.
std::vector<std::uint32_t> bayes_decisions(const DiscreteDataset& data, const ModalitySubset& subset);

}  // namespace modsel
