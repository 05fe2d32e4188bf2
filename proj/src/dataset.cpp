#include "modsel/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "modsel/errors.hpp"

namespace modsel {

ModalitySubset::ModalitySubset(std::vector<Modality> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw InvalidArgument("modality subset contains duplicate index");
}

ModalitySubset::ModalitySubset(std::initializer_list<Modality> members)
    : ModalitySubset(std::vector<Modality>(members)) {}

ModalitySubset ModalitySubset::range(std::size_t k) {
  std::vector<Modality> all(k);
  std::iota(all.begin(), all.end(), Modality{0});
  ModalitySubset s;
  s.members_ = std::move(all);
  return s;
}

ModalitySubset ModalitySubset::from_mask(std::uint64_t mask) {
  ModalitySubset s;
  for (Modality i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) s.members_.push_back(i);
  return s;
}

bool ModalitySubset::contains(Modality m) const {
  return std::binary_search(members_.begin(), members_.end(), m);
}

bool ModalitySubset::intersects(const ModalitySubset& other) const {
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a == *b) return true;
    if (*a < *b)
      ++a;
    else
      ++b;
  }
  return false;
}

bool ModalitySubset::is_subset_of(const ModalitySubset& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

ModalitySubset ModalitySubset::with(Modality m) const {
  ModalitySubset s = *this;
  auto it = std::lower_bound(s.members_.begin(), s.members_.end(), m);
  if (it == s.members_.end() || *it != m) s.members_.insert(it, m);
  return s;
}

ModalitySubset ModalitySubset::without(Modality m) const {
  ModalitySubset s = *this;
  auto it = std::lower_bound(s.members_.begin(), s.members_.end(), m);
  if (it != s.members_.end() && *it == m) s.members_.erase(it);
  return s;
}

ModalitySubset ModalitySubset::united(const ModalitySubset& other) const {
  ModalitySubset s;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(s.members_));
  return s;
}

void ModalitySubset::validate(std::size_t k) const {
  if (!members_.empty() && members_.back() >= k)
    throw InvalidArgument("modality index " + std::to_string(members_.back()) +
                          " out of range for " + std::to_string(k) + " modalities");
}

std::uint64_t ModalitySubset::mask() const {
  std::uint64_t m = 0;
  for (const Modality i : members_) {
    if (i >= 64) throw InvalidArgument("subset mask requires indices below 64");
    m |= std::uint64_t{1} << i;
  }
  return m;
}

std::string ModalitySubset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members_.size(); ++i) os << (i ? "," : "") << members_[i];
  os << '}';
  return os.str();
}

DiscreteDataset::DiscreteDataset(std::vector<std::uint32_t> modality_alphabets,
                                 std::uint32_t label_alphabet,
                                 std::span<const std::uint32_t> row_major_values,
                                 std::vector<std::uint32_t> labels, std::vector<double> weights)
    : alphabets_(std::move(modality_alphabets)),
      label_alphabet_(label_alphabet),
      labels_(std::move(labels)) {
  const std::size_t n = labels_.size();
  const std::size_t k = alphabets_.size();
  if (n == 0) throw InvalidArgument("dataset must contain at least one sample");
  if (label_alphabet_ < 2) throw InvalidArgument("label alphabet must have at least 2 values");
  for (const auto a : alphabets_)
    if (a == 0) throw InvalidArgument("modality alphabet must have at least 1 value");
  if (row_major_values.size() != n * k)
    throw InvalidArgument("value table size does not match n_samples * n_modalities");

  columns_.assign(k, std::vector<std::uint32_t>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      const std::uint32_t v = row_major_values[r * k + c];
      if (v >= alphabets_[c])
        throw InvalidArgument("value " + std::to_string(v) + " in column " + std::to_string(c) +
                              " exceeds its alphabet");
      columns_[c][r] = v;
    }
    if (labels_[r] >= label_alphabet_) throw InvalidArgument("label exceeds label alphabet");
  }

  if (weights.empty()) {
    weights_.assign(n, 1.0);
  } else {
    if (weights.size() != n) throw InvalidArgument("weight count does not match n_samples");
    for (const double w : weights)
      if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("weights must be finite and >= 0");
    weights_ = std::move(weights);
    weighted_ = true;
  }
  total_weight_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (!(total_weight_ > 0.0)) throw InvalidArgument("weights must sum to a positive value");
}

}  // namespace modsel
