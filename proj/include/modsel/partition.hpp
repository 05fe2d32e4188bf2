#pragma once

// Sample partitions induced by modality subsets, and the plug-in entropies of
// those partitions. This is the counting substrate under every information
// measure: a subset's joint values are mixed-radix encoded one column at a
// time and compacted to dense cell ids, so no product of alphabets is ever
// materialized.

#include <cstdint>
#include <span>
#include <vector>

#include "modsel/dataset.hpp"

namespace modsel {

// Dense cell id per sample for the joint value of a subset. Ids follow the
// lexicographic order of the value tuples they stand for.
struct Partition {
  std::vector<std::uint32_t> ids;
  std::uint64_t cells = 1;
  // First sample that landed in each cell.
  std::vector<std::uint32_t> representative;
};

// Scratch buffers reused across calls; one per worker thread.
struct EntropyWorkspace {
  std::vector<std::uint32_t> keys;
  std::vector<std::uint32_t> keys_label;
  std::vector<std::uint64_t> wide;
  std::vector<std::uint64_t> wide_label;
  std::vector<double> histogram;
  std::vector<std::uint32_t> remap;
  std::vector<std::pair<std::uint64_t, double>> sparse;
  std::vector<double> masses;
};

// Entropies (nats) of a subset S and of (S, Y).
struct JointEntropies {
  double subset = 0.0;
  double subset_label = 0.0;
  double conditional_label() const { return subset_label - subset; }  // H(Y | S)
};

Partition unit_partition(std::size_t n_samples);

// Splits each cell of `parent` by the value of `column`.
Partition refine(const Partition& parent, std::span<const std::uint32_t> column,
                 std::uint32_t radix, EntropyWorkspace& ws);

Partition partition_of(const DiscreteDataset& data, const ModalitySubset& subset,
                       EntropyWorkspace& ws);

JointEntropies partition_entropies(const DiscreteDataset& data, const Partition& partition,
                                   EntropyWorkspace& ws);

// Entropies of the parent partition refined by `extra`, without building the
// refined partition.
JointEntropies extended_entropies(const DiscreteDataset& data, const Partition& parent,
                                  Modality extra, EntropyWorkspace& ws);

JointEntropies subset_entropies(const DiscreteDataset& data, const ModalitySubset& subset,
                                EntropyWorkspace& ws);

double label_entropy(const DiscreteDataset& data, EntropyWorkspace& ws);

}  // namespace modsel
