#include "modsel/partition.hpp"

#include <algorithm>
#include <limits>

#include "modsel/errors.hpp"
#include "modsel/simd/kernels.hpp"

namespace modsel {
namespace {

constexpr std::uint64_t kNarrowLimit = std::numeric_limits<std::uint32_t>::max();

std::uint64_t dense_limit(std::size_t n) { return std::max<std::uint64_t>(8 * n, 1u << 16); }

std::uint64_t checked_product(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
    throw DataError("joint key space exceeds 64 bits");
  return a * b;
}

// Encoded keys in either 32- or 64-bit form.
struct KeyView {
  std::span<const std::uint32_t> narrow;
  std::span<const std::uint64_t> wide;
  std::uint64_t space = 1;
  bool is_wide() const { return !wide.empty() || narrow.empty(); }
};

KeyView combine(const KeyView& in, std::span<const std::uint32_t> digits, std::uint32_t radix,
                std::vector<std::uint32_t>& narrow_out, std::vector<std::uint64_t>& wide_out) {
  const std::size_t n = digits.size();
  const std::uint64_t space = checked_product(in.space, radix);
  KeyView out;
  out.space = space;
  if (!in.narrow.empty() && space <= kNarrowLimit) {
    narrow_out.resize(n);
    simd::mix_radix(in.narrow, digits, radix, narrow_out);
    out.narrow = narrow_out;
    return out;
  }
  wide_out.resize(n);
  if (!in.narrow.empty()) {
    for (std::size_t i = 0; i < n; ++i)
      wide_out[i] = std::uint64_t{in.narrow[i]} * radix + digits[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) wide_out[i] = in.wide[i] * radix + digits[i];
  }
  out.wide = wide_out;
  return out;
}

template <typename Key>
double entropy_of_keys(std::span<const Key> keys, std::uint64_t space,
                       std::span<const double> weights, double total, EntropyWorkspace& ws) {
  const std::size_t n = keys.size();
  if (space <= dense_limit(n)) {
    ws.histogram.assign(space, 0.0);
    for (std::size_t i = 0; i < n; ++i) ws.histogram[keys[i]] += weights[i];
    return simd::neg_plogp_sum(ws.histogram, total);
  }
  ws.sparse.resize(n);
  for (std::size_t i = 0; i < n; ++i) ws.sparse[i] = {keys[i], weights[i]};
  std::sort(ws.sparse.begin(), ws.sparse.end());
  ws.masses.clear();
  for (std::size_t i = 0; i < n;) {
    double mass = 0.0;
    std::size_t j = i;
    for (; j < n && ws.sparse[j].first == ws.sparse[i].first; ++j) mass += ws.sparse[j].second;
    ws.masses.push_back(mass);
    i = j;
  }
  return simd::neg_plogp_sum(ws.masses, total);
}

double entropy_of(const KeyView& keys, const DiscreteDataset& data, EntropyWorkspace& ws) {
  if (keys.is_wide())
    return entropy_of_keys<std::uint64_t>(keys.wide, keys.space, data.weights(),
                                          data.total_weight(), ws);
  return entropy_of_keys<std::uint32_t>(keys.narrow, keys.space, data.weights(),
                                        data.total_weight(), ws);
}

template <typename Key>
Partition compact(std::span<const Key> keys, std::uint64_t space, EntropyWorkspace& ws) {
  const std::size_t n = keys.size();
  Partition out;
  out.ids.resize(n);
  constexpr std::uint32_t kUnused = std::numeric_limits<std::uint32_t>::max();
  if (space <= dense_limit(n)) {
    ws.remap.assign(space, kUnused);
    for (std::size_t i = 0; i < n; ++i) ws.remap[keys[i]] = 0;
    std::uint32_t next = 0;
    for (auto& slot : ws.remap)
      if (slot != kUnused) slot = next++;
    out.cells = next;
    out.representative.assign(next, kUnused);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t id = ws.remap[keys[i]];
      out.ids[i] = id;
      if (out.representative[id] == kUnused) out.representative[id] = static_cast<std::uint32_t>(i);
    }
    return out;
  }
  std::vector<Key> unique(keys.begin(), keys.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  out.cells = unique.size();
  out.representative.assign(unique.size(), kUnused);
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<std::uint32_t>(
        std::lower_bound(unique.begin(), unique.end(), keys[i]) - unique.begin());
    out.ids[i] = id;
    if (out.representative[id] == kUnused) out.representative[id] = static_cast<std::uint32_t>(i);
  }
  return out;
}

KeyView view_of(const Partition& p) {
  KeyView v;
  v.narrow = p.ids;
  v.space = p.cells;
  return v;
}

}  // namespace

Partition unit_partition(std::size_t n_samples) {
  Partition p;
  p.ids.assign(n_samples, 0);
  p.cells = 1;
  p.representative.assign(1, 0);
  return p;
}

Partition refine(const Partition& parent, std::span<const std::uint32_t> column,
                 std::uint32_t radix, EntropyWorkspace& ws) {
  const KeyView keys = combine(view_of(parent), column, radix, ws.keys, ws.wide);
  if (keys.is_wide()) return compact<std::uint64_t>(keys.wide, keys.space, ws);
  return compact<std::uint32_t>(keys.narrow, keys.space, ws);
}

Partition partition_of(const DiscreteDataset& data, const ModalitySubset& subset,
                       EntropyWorkspace& ws) {
  subset.validate(data.n_modalities());
  Partition p = unit_partition(data.n_samples());
  for (const Modality m : subset) p = refine(p, data.column(m), data.alphabet(m), ws);
  return p;
}

JointEntropies partition_entropies(const DiscreteDataset& data, const Partition& partition,
                                   EntropyWorkspace& ws) {
  JointEntropies out;
  const KeyView cells = view_of(partition);
  out.subset = entropy_of(cells, data, ws);
  const KeyView with_label =
      combine(cells, data.labels(), data.label_alphabet(), ws.keys_label, ws.wide_label);
  out.subset_label = entropy_of(with_label, data, ws);
  return out;
}

JointEntropies extended_entropies(const DiscreteDataset& data, const Partition& parent,
                                  Modality extra, EntropyWorkspace& ws) {
  JointEntropies out;
  const KeyView cells =
      combine(view_of(parent), data.column(extra), data.alphabet(extra), ws.keys, ws.wide);
  out.subset = entropy_of(cells, data, ws);
  const KeyView with_label =
      combine(cells, data.labels(), data.label_alphabet(), ws.keys_label, ws.wide_label);
  out.subset_label = entropy_of(with_label, data, ws);
  return out;
}

JointEntropies subset_entropies(const DiscreteDataset& data, const ModalitySubset& subset,
                                EntropyWorkspace& ws) {
  if (subset.empty()) {
    JointEntropies out;
    out.subset_label = label_entropy(data, ws);
    return out;
  }
  const Partition prefix = partition_of(data, subset.without(subset.members().back()), ws);
  return extended_entropies(data, prefix, subset.members().back(), ws);
}

double label_entropy(const DiscreteDataset& data, EntropyWorkspace& ws) {
  KeyView labels;
  labels.narrow = data.labels();
  labels.space = data.label_alphabet();
  return entropy_of(labels, data, ws);
}

}  // namespace modsel
