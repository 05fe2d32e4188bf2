#include "modsel/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>

#include "modsel/errors.hpp"
#include "modsel/info.hpp"
#include "modsel/parallel.hpp"
#include "modsel/partition.hpp"
#include "modsel/subset_table.hpp"

namespace modsel {
namespace {

void require_budget(std::uint64_t needed, const OracleBudget& budget, const char* what) {
  if (needed > budget.max_subsets)
    throw BudgetExceeded(std::string(what) + " needs " + std::to_string(needed) +
                         " subsets, over the budget of " + std::to_string(budget.max_subsets));
}

void check_size(const DiscreteDataset& data, std::size_t q) {
  if (q < 1 || q > data.n_modalities())
    throw InvalidArgument("subset size " + std::to_string(q) + " out of range [1, " +
                          std::to_string(data.n_modalities()) + "]");
}

// Visits every size-q combination in lexicographic order. Prefix partitions
// are shared by all combinations extending them.
template <typename Visit>
void for_each_combination(const DiscreteDataset& data, const Partition& parent,
                          std::vector<Modality>& prefix, std::size_t start, std::size_t q,
                          EntropyWorkspace& ws, Visit& visit) {
  const std::size_t k = data.n_modalities();
  const std::size_t remaining = q - prefix.size();
  for (std::size_t j = start; j + remaining <= k; ++j) {
    const auto m = static_cast<Modality>(j);
    prefix.push_back(m);
    if (remaining == 1) {
      visit(prefix, extended_entropies(data, parent, m, ws));
    } else {
      const Partition child = refine(parent, data.column(m), data.alphabet(m), ws);
      for_each_combination(data, child, prefix, j + 1, q, ws, visit);
    }
    prefix.pop_back();
  }
}

struct BranchBest {
  std::optional<OptimalSubset> best;
  double sum = 0.0;
  std::uint64_t count = 0;
};

// Enumerates all size-q subsets, one worker branch per leading element.
std::vector<BranchBest> scan_combinations(const DiscreteDataset& data, std::size_t q,
                                          const OracleBudget& budget) {
  const std::size_t k = data.n_modalities();
  const std::size_t branches = k - q + 1;
  std::vector<BranchBest> results(branches);
  EntropyWorkspace root_ws;
  const double hy = label_entropy(data, root_ws);
  const Partition root = unit_partition(data.n_samples());
  parallel_for(branches, budget.threads, [&](std::size_t first) {
    EntropyWorkspace ws;
    BranchBest& out = results[first];
    auto visit = [&](const std::vector<Modality>& members, const JointEntropies& h) {
      const double value = hy - h.conditional_label();
      out.sum += value;
      ++out.count;
      if (!out.best || value > out.best->value)
        out.best = OptimalSubset{ModalitySubset(members), value};
    };
    std::vector<Modality> prefix{static_cast<Modality>(first)};
    const auto m = static_cast<Modality>(first);
    if (q == 1) {
      visit(prefix, extended_entropies(data, root, m, ws));
      return;
    }
    const Partition child = refine(root, data.column(m), data.alphabet(m), ws);
    for_each_combination(data, child, prefix, first + 1, q, ws, visit);
  });
  return results;
}

std::uint64_t coalition_count(const DiscreteDataset& data) {
  const std::size_t k = data.n_modalities();
  if (k == 0) return 0;
  if (k - 1 >= 63) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << (k - 1);
}

SubsetTable table_for(const DiscreteDataset& data, const OracleBudget& budget, const char* what) {
  require_budget(coalition_count(data), budget, what);
  return SubsetTable::build(data, std::numeric_limits<std::uint64_t>::max(), budget.threads);
}

double shapley_from_table(const SubsetTable& table, Modality i) {
  const std::size_t k = table.n_modalities();
  const std::uint64_t bit = std::uint64_t{1} << i;
  std::vector<double> weight(k);
  double total_weight = 0.0;
  for (std::size_t s = 0; s < k; ++s) {
    weight[s] = shapley_weight(k, s);
    total_weight += weight[s] * std::round(std::exp(std::lgamma(double(k)) - std::lgamma(s + 1.0) -
                                                    std::lgamma(double(k - s))));
  }
  if (std::abs(total_weight - 1.0) > 1e-12)
    throw std::logic_error("Shapley coalition weights do not sum to 1");
  double phi = 0.0;
  for (std::uint64_t s = 0; s <= table.full_mask(); ++s) {
    if (s & bit) continue;
    const double gain = table.utility(s | bit) - table.utility(s);
    phi += weight[static_cast<std::size_t>(std::popcount(s))] * gain;
  }
  return phi;
}

MciResult mci_from_table(const SubsetTable& table, Modality i) {
  const std::uint64_t bit = std::uint64_t{1} << i;
  MciResult out;
  out.value = table.utility(bit);
  std::uint64_t best_mask = 0;
  for (std::uint64_t s = 1; s <= table.full_mask(); ++s) {
    if (s & bit) continue;
    const double gain = table.utility(s | bit) - table.utility(s);
    if (gain > out.value + kZeroTolerance) {
      out.value = gain;
      best_mask = s;
    }
  }
  out.argmax = ModalitySubset::from_mask(best_mask);
  return out;
}

void check_modality(const DiscreteDataset& data, Modality i) {
  if (i >= data.n_modalities()) throw InvalidArgument("modality index out of range");
}

}  // namespace

std::uint64_t binomial(std::uint64_t k, std::uint64_t q) {
  if (q > k) return 0;
  q = std::min(q, k - q);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= q; ++i) {
    const std::uint64_t num = k - q + i;
    // result * num / i stays integral at every step
    if (result > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    result = result * num / i;
  }
  return result;
}

double shapley_weight(std::size_t k, std::size_t coalition_size) {
  // 1 / (k * C(k-1, s)), evaluated in log space to stay finite for large k.
  const double log_c = std::lgamma(static_cast<double>(k)) -
                       std::lgamma(static_cast<double>(coalition_size) + 1.0) -
                       std::lgamma(static_cast<double>(k - coalition_size));
  return std::exp(-log_c) / static_cast<double>(k);
}

OptimalSubset brute_force_optimal(const DiscreteDataset& data, std::size_t q,
                                  const OracleBudget& budget) {
  check_size(data, q);
  require_budget(binomial(data.n_modalities(), q), budget, "optimal-subset search");
  std::optional<OptimalSubset> best;
  for (auto& branch : scan_combinations(data, q, budget))
    if (branch.best && (!best || branch.best->value > best->value)) best = std::move(branch.best);
  return *best;
}

double average_utility(const DiscreteDataset& data, std::size_t q, const OracleBudget& budget) {
  check_size(data, q);
  require_budget(binomial(data.n_modalities(), q), budget, "average-utility scan");
  double sum = 0.0;
  std::uint64_t count = 0;
  for (const auto& branch : scan_combinations(data, q, budget)) {
    sum += branch.sum;
    count += branch.count;
  }
  return sum / static_cast<double>(count);
}

double exact_shapley(const DiscreteDataset& data, Modality i, const OracleBudget& budget) {
  check_modality(data, i);
  const SubsetTable table = table_for(data, budget, "exact Shapley");
  return shapley_from_table(table, i);
}

std::vector<double> exact_shapley_all(const DiscreteDataset& data, const OracleBudget& budget) {
  const SubsetTable table = table_for(data, budget, "exact Shapley");
  std::vector<double> out(data.n_modalities());
  for (Modality i = 0; i < out.size(); ++i) out[i] = shapley_from_table(table, i);
  return out;
}

MciResult exact_mci(const DiscreteDataset& data, Modality i, const OracleBudget& budget) {
  check_modality(data, i);
  const SubsetTable table = table_for(data, budget, "exact MCI");
  return mci_from_table(table, i);
}

std::vector<MciResult> exact_mci_all(const DiscreteDataset& data, const OracleBudget& budget) {
  const SubsetTable table = table_for(data, budget, "exact MCI");
  std::vector<MciResult> out;
  out.reserve(data.n_modalities());
  for (Modality i = 0; i < data.n_modalities(); ++i) out.push_back(mci_from_table(table, i));
  return out;
}

}  // namespace modsel
