#pragma once

#include <cstdint>
#include <vector>

#include "modsel/dataset.hpp"
#include "modsel/partition.hpp"

namespace modsel {

// H(S) and H(S, Y) for every subset S of the modalities, indexed by bitmask.
// Built depth-first so each child partition refines its parent's.
class SubsetTable {
 public:
  // Throws BudgetExceeded when 2^k exceeds max_subsets.
  static SubsetTable build(const DiscreteDataset& data, std::uint64_t max_subsets,
                           unsigned threads = 1);

  std::size_t n_modalities() const { return k_; }
  std::uint64_t full_mask() const { return (std::uint64_t{1} << k_) - 1; }
  double label_entropy() const { return label_entropy_; }
  const JointEntropies& at(std::uint64_t mask) const { return entries_[mask]; }

  // I(S; Y); exactly 0 for the empty set.
  double utility(std::uint64_t mask) const;
  // I(A; B | Y) and I(A; B) for disjoint masks.
  double conditional_mi(std::uint64_t a, std::uint64_t b) const;
  double marginal_mi(std::uint64_t a, std::uint64_t b) const;

 private:
  std::size_t k_ = 0;
  double label_entropy_ = 0.0;
  std::vector<JointEntropies> entries_;
};

}  // namespace modsel
