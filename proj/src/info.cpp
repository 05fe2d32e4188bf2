#include "modsel/info.hpp"

#include <algorithm>
#include <cmath>

#include "modsel/errors.hpp"
#include "modsel/partition.hpp"

namespace modsel {
namespace {

void check_dataset(const DiscreteDataset& data, const ModalitySubset& subset) {
  if (data.n_samples() == 0) throw InvalidArgument("empty dataset");
  subset.validate(data.n_modalities());
}

void check_disjoint(const ModalitySubset& s, const ModalitySubset& s_prime) {
  if (s.intersects(s_prime)) throw InvalidArgument("subsets must be disjoint");
}

double normalized_total(const JointTable& table) {
  double total = 0.0;
  for (const auto& cell : table.cells) total += cell.mass;
  return total;
}

}  // namespace

InfoValue InfoValue::clamped(double raw) {
  if (std::isnan(raw)) throw std::logic_error("information value is NaN");
  if (raw < -1e-9) throw std::logic_error("information value is negative beyond rounding");
  if (raw < kZeroTolerance) raw = 0.0;
  return InfoValue{raw};
}

JointTable fit_joint(const DiscreteDataset& data, const ModalitySubset& subset, bool with_label) {
  check_dataset(data, subset);
  EntropyWorkspace ws;
  Partition p = partition_of(data, subset, ws);
  if (with_label) p = refine(p, data.labels(), data.label_alphabet(), ws);

  JointTable table;
  table.variables = subset;
  table.includes_label = with_label;
  std::vector<double> mass(p.cells, 0.0);
  const auto weights = data.weights();
  for (std::size_t i = 0; i < data.n_samples(); ++i) mass[p.ids[i]] += weights[i];

  const double inv = 1.0 / data.total_weight();
  table.cells.reserve(p.cells);
  for (std::size_t id = 0; id < p.cells; ++id) {
    JointCell cell;
    const std::size_t row = p.representative[id];
    cell.values.reserve(subset.size() + (with_label ? 1 : 0));
    for (const Modality m : subset) cell.values.push_back(data.value(row, m));
    if (with_label) cell.values.push_back(data.labels()[row]);
    cell.mass = mass[id] * inv;
    table.cells.push_back(std::move(cell));
  }
  table.total_mass = normalized_total(table);
  return table;
}

InfoValue entropy(const JointTable& table) {
  const double total = normalized_total(table);
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("joint table is not normalized");
  double h = 0.0;
  for (const auto& cell : table.cells) {
    if (cell.mass < 0.0) throw InvalidArgument("joint table has negative mass");
    if (cell.mass >= 1e-15) h -= cell.mass * std::log(cell.mass);
  }
  return InfoValue::clamped(h);
}

InfoValue label_entropy(const DiscreteDataset& data) {
  EntropyWorkspace ws;
  return InfoValue::clamped(modsel::label_entropy(data, ws));
}

InfoValue conditional_entropy(const DiscreteDataset& data, const ModalitySubset& subset) {
  check_dataset(data, subset);
  EntropyWorkspace ws;
  return InfoValue::clamped(subset_entropies(data, subset, ws).conditional_label());
}

InfoValue mutual_information(const DiscreteDataset& data, const ModalitySubset& subset) {
  check_dataset(data, subset);
  if (subset.empty()) return InfoValue{};
  EntropyWorkspace ws;
  const double hy = modsel::label_entropy(data, ws);
  const double hy_s = subset_entropies(data, subset, ws).conditional_label();
  return InfoValue::clamped(hy - hy_s);
}

InfoValue conditional_mutual_information(const DiscreteDataset& data, const ModalitySubset& s,
                                         const ModalitySubset& s_prime) {
  check_dataset(data, s);
  check_dataset(data, s_prime);
  check_disjoint(s, s_prime);
  if (s.empty() || s_prime.empty()) return InfoValue{};
  EntropyWorkspace ws;
  // I(S;S'|Y) = H(S,Y) + H(S',Y) - H(S u S',Y) - H(Y)
  const double a = subset_entropies(data, s, ws).subset_label;
  const double b = subset_entropies(data, s_prime, ws).subset_label;
  const double ab = subset_entropies(data, s.united(s_prime), ws).subset_label;
  const double hy = modsel::label_entropy(data, ws);
  return InfoValue::clamped(a + b - ab - hy);
}

InfoValue marginal_mutual_information(const DiscreteDataset& data, const ModalitySubset& s,
                                      const ModalitySubset& s_prime) {
  check_dataset(data, s);
  check_dataset(data, s_prime);
  check_disjoint(s, s_prime);
  if (s.empty() || s_prime.empty()) return InfoValue{};
  EntropyWorkspace ws;
  const double a = subset_entropies(data, s, ws).subset;
  const double b = subset_entropies(data, s_prime, ws).subset;
  const double ab = subset_entropies(data, s.united(s_prime), ws).subset;
  return InfoValue::clamped(a + b - ab);
}

BayesLosses bayes_expected_losses(const DiscreteDataset& data, const ModalitySubset& subset) {
  // Walks the (S, Y) table directly: cells sharing a subset prefix are
  // contiguous, so p(s) and max_y p(s, y) come from one pass.
  const JointTable joint = fit_joint(data, subset, true);
  BayesLosses out;
  double correct = 0.0;
  std::size_t i = 0;
  const std::size_t k = subset.size();
  while (i < joint.cells.size()) {
    std::size_t j = i;
    double group = 0.0;
    double best = -1.0;
    auto same_prefix = [&](std::size_t a, std::size_t b) {
      return std::equal(joint.cells[a].values.begin(), joint.cells[a].values.begin() + k,
                        joint.cells[b].values.begin());
    };
    for (; j < joint.cells.size() && same_prefix(i, j); ++j) {
      group += joint.cells[j].mass;
      best = std::max(best, joint.cells[j].mass);
    }
    for (std::size_t c = i; c < j; ++c) {
      const double m = joint.cells[c].mass;
      if (m >= 1e-15) out.cross_entropy -= m * std::log(m / group);
    }
    correct += best;
    i = j;
  }
  out.zero_one = std::max(0.0, 1.0 - correct);
  out.cross_entropy = InfoValue::clamped(out.cross_entropy).nats;
  return out;
}

std::vector<std::uint32_t> bayes_decisions(const DiscreteDataset& data,
                                           const ModalitySubset& subset) {
  const JointTable joint = fit_joint(data, subset, true);
  const JointTable cells = fit_joint(data, subset, false);
  std::vector<std::uint32_t> decision(cells.cells.size(), 0);
  std::vector<double> best(cells.cells.size(), -1.0);
  std::size_t cell = 0;
  const std::size_t k = subset.size();
  for (const auto& jc : joint.cells) {
    while (!std::equal(cells.cells[cell].values.begin(), cells.cells[cell].values.end(),
                       jc.values.begin()))
      ++cell;
    // Labels arrive in increasing order, so strict > keeps the lower label on ties.
    if (jc.mass > best[cell]) {
      best[cell] = jc.mass;
      decision[cell] = jc.values[k];
    }
  }
  return decision;
}

}  // namespace modsel
