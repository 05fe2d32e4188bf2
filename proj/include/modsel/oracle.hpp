#pragma once

// Brute-force ground truth for small instances. Every routine refuses to run
// past its budget rather than returning a partial answer.

#include <cstdint>
#include <vector>

#include "modsel/dataset.hpp"

namespace modsel {

struct OracleBudget {
  std::uint64_t max_subsets = std::uint64_t{1} << 20;
  unsigned threads = 1;
};

struct OptimalSubset {
  ModalitySubset subset;
  double value = 0.0;
};

// Number of size-q subsets of k items, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t k, std::uint64_t q);

// max over |S| = q of I(S; Y); ties go to the lexicographically smallest subset.
OptimalSubset brute_force_optimal(const DiscreteDataset& data, std::size_t q,
                                  const OracleBudget& budget = {});

// Mean of I(S; Y) over all subsets of size q.
double average_utility(const DiscreteDataset& data, std::size_t q, const OracleBudget& budget = {});

// Shapley value of modality i in the game v(S) = I(S; Y).
double exact_shapley(const DiscreteDataset& data, Modality i, const OracleBudget& budget = {});
std::vector<double> exact_shapley_all(const DiscreteDataset& data, const OracleBudget& budget = {});

struct MciResult {
  double value = 0.0;
  ModalitySubset argmax;  // coalition S attaining the maximum contribution
};

// max over S subset of V \ {i} of I(S u {i}; Y) - I(S; Y). Contributions within
// 1e-12 of the running best count as ties and keep the earlier coalition.
MciResult exact_mci(const DiscreteDataset& data, Modality i, const OracleBudget& budget = {});
std::vector<MciResult> exact_mci_all(const DiscreteDataset& data, const OracleBudget& budget = {});

// Shapley coalition weight |S|! (k - |S| - 1)! / k!.
double shapley_weight(std::size_t k, std::size_t coalition_size);

}  // namespace modsel
