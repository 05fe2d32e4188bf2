#include "modsel/subset_table.hpp"

#include "modsel/errors.hpp"
#include "modsel/parallel.hpp"

namespace modsel {
namespace {

void descend(const DiscreteDataset& data, const Partition& parent, std::uint64_t mask,
             std::size_t start, std::vector<JointEntropies>& entries, EntropyWorkspace& ws) {
  const std::size_t k = data.n_modalities();
  for (std::size_t j = start; j < k; ++j) {
    const std::uint64_t child_mask = mask | (std::uint64_t{1} << j);
    const auto m = static_cast<Modality>(j);
    if (j + 1 == k) {
      entries[child_mask] = extended_entropies(data, parent, m, ws);
      continue;
    }
    const Partition child = refine(parent, data.column(m), data.alphabet(m), ws);
    entries[child_mask] = partition_entropies(data, child, ws);
    descend(data, child, child_mask, j + 1, entries, ws);
  }
}

}  // namespace

SubsetTable SubsetTable::build(const DiscreteDataset& data, std::uint64_t max_subsets,
                               unsigned threads) {
  const std::size_t k = data.n_modalities();
  if (k >= 63 || (std::uint64_t{1} << k) > max_subsets)
    throw BudgetExceeded("subset table needs 2^" + std::to_string(k) +
                         " entries, over the budget of " + std::to_string(max_subsets));
  SubsetTable table;
  table.k_ = k;
  table.entries_.assign(std::size_t{1} << k, JointEntropies{});
  {
    EntropyWorkspace ws;
    table.label_entropy_ = modsel::label_entropy(data, ws);
    table.entries_[0].subset_label = table.label_entropy_;
  }
  const Partition root = unit_partition(data.n_samples());
  // Branches rooted at different first elements touch disjoint entries.
  parallel_for(k, threads, [&](std::size_t first) {
    EntropyWorkspace ws;
    const auto m = static_cast<Modality>(first);
    const std::uint64_t mask = std::uint64_t{1} << first;
    const Partition child = refine(root, data.column(m), data.alphabet(m), ws);
    table.entries_[mask] = partition_entropies(data, child, ws);
    descend(data, child, mask, first + 1, table.entries_, ws);
  });
  return table;
}

double SubsetTable::utility(std::uint64_t mask) const {
  if (mask == 0) return 0.0;
  return label_entropy_ - entries_[mask].conditional_label();
}

double SubsetTable::conditional_mi(std::uint64_t a, std::uint64_t b) const {
  return entries_[a].subset_label + entries_[b].subset_label - entries_[a | b].subset_label -
         label_entropy_;
}

double SubsetTable::marginal_mi(std::uint64_t a, std::uint64_t b) const {
  return entries_[a].subset + entries_[b].subset - entries_[a | b].subset;
}

}  // namespace modsel
