#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace modsel {

using Modality = std::uint32_t;

// Sorted, duplicate-free set of modality indices.
class ModalitySubset {
 public:
  ModalitySubset() = default;
  // Sorts the input; throws InvalidArgument on duplicates.
  explicit ModalitySubset(std::vector<Modality> members);
  ModalitySubset(std::initializer_list<Modality> members);

  static ModalitySubset range(std::size_t k);  // {0, ..., k-1}
  static ModalitySubset from_mask(std::uint64_t mask);

  std::span<const Modality> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Modality m) const;
  bool intersects(const ModalitySubset& other) const;
  bool is_subset_of(const ModalitySubset& other) const;

  ModalitySubset with(Modality m) const;
  ModalitySubset without(Modality m) const;
  ModalitySubset united(const ModalitySubset& other) const;

  // Throws InvalidArgument when any member is >= k.
  void validate(std::size_t k) const;

  // Requires every member < 64.
  std::uint64_t mask() const;

  std::string to_string() const;

  auto operator<=>(const ModalitySubset&) const = default;
  bool operator==(const ModalitySubset&) const = default;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  std::vector<Modality> members_;
};

// Categorical modalities plus a categorical label per sample. Rows may carry
// non-negative weights; a population (exact distribution) is stored as one row
// per support point weighted by its probability.
//
// Values are accepted row-major and stored column-major so the counting
// kernels stream contiguous columns.
class DiscreteDataset {
 public:
  DiscreteDataset(std::vector<std::uint32_t> modality_alphabets, std::uint32_t label_alphabet,
                  std::span<const std::uint32_t> row_major_values, std::vector<std::uint32_t> labels,
                  std::vector<double> weights = {});

  std::size_t n_samples() const { return labels_.size(); }
  std::size_t n_modalities() const { return alphabets_.size(); }
  std::span<const std::uint32_t> alphabets() const { return alphabets_; }
  std::uint32_t alphabet(Modality m) const { return alphabets_.at(m); }
  std::uint32_t label_alphabet() const { return label_alphabet_; }

  std::span<const std::uint32_t> column(Modality m) const { return columns_.at(m); }
  std::span<const std::uint32_t> labels() const { return labels_; }
  std::uint32_t value(std::size_t row, Modality m) const { return columns_[m][row]; }

  bool weighted() const { return weighted_; }
  // Always populated; all ones for unweighted data.
  std::span<const double> weights() const { return weights_; }
  double total_weight() const { return total_weight_; }

  ModalitySubset all_modalities() const { return ModalitySubset::range(n_modalities()); }

  // Marks the dataset as an exact population rather than a sample.
  bool population() const { return population_; }
  void set_population(bool population) { population_ = population; }

 private:
  std::vector<std::uint32_t> alphabets_;
  std::uint32_t label_alphabet_;
  std::vector<std::vector<std::uint32_t>> columns_;
  std::vector<std::uint32_t> labels_;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
  bool weighted_ = false;
  bool population_ = false;
};

}  // namespace modsel
