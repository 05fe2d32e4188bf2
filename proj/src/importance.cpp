#include "modsel/importance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "modsel/errors.hpp"
#include "modsel/info.hpp"

namespace modsel {

ImportanceEpsilons ImportanceEpsilons::from_estimate(const EpsilonEstimate& est) {
  return {est.epsilon_conditional, est.epsilon_marginal, est.scope.label(), est.lower_bound};
}

Interval fast_mci(const DiscreteDataset& data, Modality i, double eps_conditional) {
  const double self = mutual_information(data, ModalitySubset{i}).nats;
  return {self, self + eps_conditional};
}

Interval fast_shapley(const DiscreteDataset& data, Modality i, double eps_conditional,
                      double eps_marginal) {
  const double self = mutual_information(data, ModalitySubset{i}).nats;
  const double eps = std::max(eps_conditional, eps_marginal);
  return {self - eps, self + eps};
}

ImportanceReport importance_report(const DiscreteDataset& data, const ImportanceEpsilons& eps,
                                   const ImportanceOptions& options) {
  if (eps.conditional < 0.0 || eps.marginal < 0.0)
    throw InvalidArgument("epsilons must be non-negative");
  ImportanceReport report;
  report.epsilons = eps;
  const std::size_t k = data.n_modalities();
  std::vector<double> shapley;
  std::vector<MciResult> mci;
  if (options.with_exact) {
    shapley = exact_shapley_all(data, options.budget);
    mci = exact_mci_all(data, options.budget);
  }
  for (Modality i = 0; i < k; ++i) {
    ModalityImportance m;
    m.modality = i;
    m.self_mi = mutual_information(data, ModalitySubset{i}).nats;
    m.mci = {m.self_mi, m.self_mi + eps.conditional};
    m.shapley = {m.self_mi - eps.joint(), m.self_mi + eps.joint()};
    if (options.with_exact) {
      m.exact_shapley = shapley[i];
      m.exact_mci = mci[i].value;
      m.shapley_contained = m.shapley.contains(shapley[i]);
      m.mci_contained = m.mci.contains(mci[i].value);
    }
    report.modalities.push_back(std::move(m));
  }
  return report;
}

RankScore parse_rank_score(const std::string& text) {
  if (text == "mci" || text == "mci_point") return RankScore::mci_point;
  if (text == "shapley" || text == "shapley_point") return RankScore::shapley_point;
  throw InvalidArgument("score must be 'mci' or 'shapley', got '" + text + "'");
}

namespace {

// Point scores are quantized at the zero tolerance so that values equal up to
// rounding noise rank by index.
std::int64_t score_key(const ModalityImportance& m, RankScore score) {
  const double v = score == RankScore::mci_point ? m.mci.lo : m.shapley.center();
  return std::llround(v / kZeroTolerance);
}

}  // namespace

std::vector<Modality> ranking(const ImportanceReport& report, RankScore score) {
  std::vector<Modality> order(report.modalities.size());
  std::iota(order.begin(), order.end(), Modality{0});
  std::stable_sort(order.begin(), order.end(), [&](Modality a, Modality b) {
    return score_key(report.modalities[a], score) > score_key(report.modalities[b], score);
  });
  return order;
}

ModalitySubset rank_top_q(const ImportanceReport& report, std::size_t q, RankScore score) {
  const std::size_t k = report.modalities.size();
  if (q < 1 || q > k)
    throw InvalidArgument("q must lie in [1, " + std::to_string(k) + "], got " + std::to_string(q));
  auto order = ranking(report, score);
  order.resize(q);
  return ModalitySubset(std::move(order));
}

ordered_json importance_to_json(const ImportanceReport& report) {
  ordered_json j;
  ordered_json eps;
  eps["cond"] = report.epsilons.conditional;
  eps["marg"] = report.epsilons.marginal;
  eps["joint"] = report.epsilons.joint();
  eps["scope"] = report.epsilons.scope;
  eps["lower_bound"] = report.epsilons.lower_bound;
  j["epsilons"] = std::move(eps);
  ordered_json mods = ordered_json::array();
  for (const auto& m : report.modalities) {
    ordered_json r;
    r["modality"] = m.modality;
    r["self_mi"] = m.self_mi;
    r["mci_point"] = m.mci.lo;
    r["shapley_point"] = m.shapley.center();
    r["mci_interval"] = {m.mci.lo, m.mci.hi};
    r["shapley_interval"] = {m.shapley.lo, m.shapley.hi};
    r["shapley_interval_display"] = {std::max(0.0, m.shapley.lo), m.shapley.hi};
    r["exact_mci"] = m.exact_mci ? ordered_json(*m.exact_mci) : ordered_json(nullptr);
    r["exact_shapley"] = m.exact_shapley ? ordered_json(*m.exact_shapley) : ordered_json(nullptr);
    if (m.mci_contained) r["mci_contained"] = *m.mci_contained;
    if (m.shapley_contained) r["shapley_contained"] = *m.shapley_contained;
    mods.push_back(std::move(r));
  }
  j["modalities"] = std::move(mods);
  return j;
}

}  // namespace modsel
