#pragma once

// Synthetic discrete data with a controllable amount of dependence between
// modalities. Every generator is a small network of symmetric channels: a
// channel with noise eta keeps its source value with probability 1 - eta and
// otherwise moves to one of the other a - 1 values uniformly.
//
//   naive_bayes  X_i = channel(Y, eta_i); modalities independent given Y.
//   correlated   naive_bayes, then the last round(knob * (k - 1)) modalities
//                are rewired to copy modality 0 through a channel with
//                noise copy_noise.
//   patch_grid   k cells on a square grid. Cells near the center read a
//                shared latent Z = channel(Y, copy_noise), outer cells read Y
//                directly; noise grows with distance from the center.
//
// n_samples == 0 produces the exact population as a weighted dataset.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modsel/dataset.hpp"
#include "modsel/vendor_json.hpp"

namespace modsel {

enum class GeneratorKind { naive_bayes, correlated, patch_grid };

std::string kind_name(GeneratorKind kind);
GeneratorKind parse_kind(const std::string& text);

// Largest joint support (prod alphabets * label_alphabet) for population mode.
inline constexpr std::uint64_t kPopulationBudget = std::uint64_t{1} << 20;

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::naive_bayes;
  std::size_t k = 4;
  std::vector<std::uint32_t> alphabets;  // empty: every modality uses label_alphabet
  std::uint32_t label_alphabet = 2;
  // Empty: naive_bayes/correlated draw eta_i uniformly from [0.05, 0.45] with
  // the seed; patch_grid uses 0.5 r^2 at normalized radius r (corner cells r = 1).
  std::vector<double> noise;
  double correlation_knob = 0.0;
  std::optional<double> copy_noise;  // default 0 (correlated), 0.05 (patch_grid)
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;

  // Throws InvalidArgument on out-of-range fields.
  void validate() const;
  static GeneratorSpec from_json(const ordered_json& j);
  ordered_json to_json() const;

  std::vector<std::uint32_t> resolved_alphabets() const;
};

// One node of the channel network. Sources: -1 is Y, -2 is the latent Z,
// otherwise an earlier modality index.
struct ChannelNode {
  int source = -1;
  double noise = 0.0;
};

struct ChannelNetwork {
  std::uint32_t label_alphabet = 2;
  std::optional<ChannelNode> latent;  // alphabet = label_alphabet
  std::vector<std::uint32_t> alphabets;
  std::vector<ChannelNode> modalities;
};

ChannelNetwork build_network(const GeneratorSpec& spec);

// Probability that a symmetric channel maps source value s to v.
double channel_probability(std::uint32_t source_value, std::uint32_t value,
                           std::uint32_t alphabet, double noise);

DiscreteDataset generate(const GeneratorSpec& spec);

// Exact joint distribution of a network as a weighted dataset (zero cells dropped).
DiscreteDataset population_of(const ChannelNetwork& net);

}  // namespace modsel
