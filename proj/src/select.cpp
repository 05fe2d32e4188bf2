#include "modsel/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modsel/errors.hpp"
#include "modsel/info.hpp"
#include "modsel/parallel.hpp"
#include "modsel/partition.hpp"

namespace modsel {
namespace {

struct GreedyState {
  const DiscreteDataset& data;
  Partition partition;
  double label_entropy;
  double conditional;  // H(Y | S_i)

  double gain(Modality j, EntropyWorkspace& ws) const {
    return conditional - extended_entropies(data, partition, j, ws).conditional_label();
  }

  // Commits j and recomputes H(Y | S_{i+1}) from the refined partition.
  void add(Modality j, EntropyWorkspace& ws) {
    partition = refine(partition, data.column(j), data.alphabet(j), ws);
    conditional = partition_entropies(data, partition, ws).conditional_label();
  }

  double utility() const { return InfoValue::clamped(label_entropy - conditional).nats; }
};

GreedyState start_state(const DiscreteDataset& data) {
  EntropyWorkspace ws;
  const double hy = label_entropy(data, ws);
  return GreedyState{data, unit_partition(data.n_samples()), hy, hy};
}

// Gains within kZeroTolerance of the maximum count as tied; ties go to the
// lowest modality index.
std::size_t pick_winner(const std::vector<Modality>& candidates,
                        const std::vector<std::optional<double>>& gains) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& g : gains)
    if (g) top = std::max(top, *g);
  std::optional<std::size_t> winner;
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (gains[c] && *gains[c] >= top - kZeroTolerance &&
        (!winner || candidates[c] < candidates[*winner]))
      winner = c;
  return *winner;
}

IterationRecord full_scan_step(GreedyState& state, const std::vector<Modality>& candidates,
                               unsigned threads) {
  std::vector<std::optional<double>> gains(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t c) {
    thread_local EntropyWorkspace ws;
    gains[c] = state.gain(candidates[c], ws);
  });
  IterationRecord rec;
  const std::size_t w = pick_winner(candidates, gains);
  rec.chosen = candidates[w];
  rec.marginal_gain = *gains[w];
  for (std::size_t c = 0; c < candidates.size(); ++c)
    rec.candidate_scores.push_back({candidates[c], *gains[c]});
  return rec;
}

// Stale gains plus the slack bound the fresh ones. Every candidate whose bound
// reaches the tie window of the best fresh gain is re-scored, so the winner
// is the one a full scan would pick whenever the slack is valid.
IterationRecord lazy_step(GreedyState& state, const std::vector<Modality>& candidates,
                          std::vector<double>& bound, double slack, EntropyWorkspace& ws) {
  std::vector<std::optional<double>> fresh(candidates.size());
  while (true) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& g : fresh)
      if (g) top = std::max(top, *g);
    std::optional<std::size_t> next;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (fresh[c]) continue;
      const double ub = bound[candidates[c]] + slack;
      if (ub < top - kZeroTolerance) continue;
      if (!next || ub > bound[candidates[*next]] + slack) next = c;
    }
    if (!next) break;
    fresh[*next] = state.gain(candidates[*next], ws);
    bound[candidates[*next]] = *fresh[*next];
  }
  IterationRecord rec;
  const std::size_t w = pick_winner(candidates, fresh);
  rec.chosen = candidates[w];
  rec.marginal_gain = *fresh[w];
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (fresh[c]) rec.candidate_scores.push_back({candidates[c], *fresh[c]});
  return rec;
}

void check_sizes(const DiscreteDataset& data, std::size_t q, std::size_t p) {
  const std::size_t k = data.n_modalities();
  if (k == 0) throw InvalidArgument("no candidate modalities");
  if (q < 1 || q > k)
    throw InvalidArgument("q must lie in [1, " + std::to_string(k) + "], got " + std::to_string(q));
  if (p < 1 || p > q)
    throw InvalidArgument("p must lie in [1, q], got p=" + std::to_string(p) +
                          " q=" + std::to_string(q));
}

}  // namespace

ModalitySubset SelectionTrace::prefix(std::size_t i) const {
  std::vector<Modality> members;
  for (std::size_t t = 0; t < i && t < iterations.size(); ++t)
    members.push_back(iterations[t].chosen);
  return ModalitySubset(std::move(members));
}

SelectionTrace greedy_select(const DiscreteDataset& data, std::size_t q, std::size_t p,
                             const GreedyOptions& options) {
  check_sizes(data, q, p);
  if (options.lazy_slack < 0.0) throw InvalidArgument("lazy slack must be non-negative");
  SelectionTrace trace;
  trace.q = q;
  trace.p = p;
  GreedyState state = start_state(data);
  EntropyWorkspace ws;
  std::vector<double> bound(data.n_modalities(), std::numeric_limits<double>::infinity());
  std::vector<bool> taken(data.n_modalities(), false);

  for (std::size_t i = 0; i < p; ++i) {
    std::vector<Modality> candidates;
    for (Modality j = 0; j < data.n_modalities(); ++j)
      if (!taken[j]) candidates.push_back(j);
    IterationRecord rec = options.mode == GreedyMode::full_scan
                              ? full_scan_step(state, candidates, options.threads)
                              : lazy_step(state, candidates, bound, options.lazy_slack, ws);
    taken[rec.chosen] = true;
    state.add(rec.chosen, ws);
    rec.cumulative_utility = state.utility();
    trace.iterations.push_back(std::move(rec));
  }
  trace.p = trace.iterations.size();
  return trace;
}

SelectionTrace path_trace(const DiscreteDataset& data, std::span<const Modality> order,
                          std::size_t q, std::string method) {
  check_sizes(data, q, std::min(q, order.size()));
  if (order.size() < q) throw InvalidArgument("ordering shorter than q");
  SelectionTrace trace;
  trace.q = q;
  trace.p = q;
  trace.method = std::move(method);
  GreedyState state = start_state(data);
  EntropyWorkspace ws;
  std::vector<bool> taken(data.n_modalities(), false);
  for (std::size_t i = 0; i < q; ++i) {
    const Modality m = order[i];
    if (m >= data.n_modalities() || taken[m])
      throw InvalidArgument("ordering repeats or exceeds modality indices");
    taken[m] = true;
    IterationRecord rec;
    rec.chosen = m;
    rec.marginal_gain = state.gain(m, ws);
    state.add(m, ws);
    rec.cumulative_utility = state.utility();
    trace.iterations.push_back(std::move(rec));
  }
  return trace;
}

std::vector<LossPoint> loss_report(const SelectionTrace& trace, const DiscreteDataset& data) {
  std::vector<LossPoint> out;
  for (std::size_t i = 0; i <= trace.iterations.size(); ++i) {
    const ModalitySubset s = trace.prefix(i);
    const BayesLosses losses = bayes_expected_losses(data, s);
    LossPoint point;
    point.size = i;
    point.utility = mutual_information(data, s).nats;
    point.cross_entropy = losses.cross_entropy;
    point.zero_one = losses.zero_one;
    out.push_back(point);
  }
  return out;
}

GuaranteeCheck check_guarantee(const SelectionTrace& trace, const DiscreteDataset& data,
                               double epsilon, const OptSource& opt_source,
                               const OracleBudget& budget) {
  const std::size_t k = data.n_modalities();
  const std::size_t q = trace.q;
  const std::size_t p = trace.iterations.size();
  check_sizes(data, q, p);
  if (trace.p != p) throw InvalidArgument("trace p does not match its iteration count");
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
  for (const auto& it : trace.iterations)
    if (it.chosen >= k) throw InvalidArgument("trace selects an out-of-range modality");
  (void)trace.selected();  // throws on repeated modalities

  constexpr double tol = kGuaranteeTolerance;
  GuaranteeCheck out;
  out.epsilon_used = epsilon;
  out.label_entropy = label_entropy(data).nats;
  auto violation = [&](std::string text) { out.violations.push_back(std::move(text)); };

  // Replay: utilities of every prefix and gains of every outside modality.
  GreedyState state = start_state(data);
  EntropyWorkspace ws;
  std::vector<std::vector<double>> gain_at(p + 1, std::vector<double>(k, 0.0));
  std::vector<bool> taken(k, false);
  for (std::size_t i = 0; i <= p; ++i) {
    for (Modality e = 0; e < k; ++e)
      if (!taken[e]) gain_at[i][e] = state.gain(e, ws);
    if (i == p) break;
    const IterationRecord& rec = trace.iterations[i];
    const double before = state.utility();
    state.add(rec.chosen, ws);
    taken[rec.chosen] = true;
    const double after = state.utility();
    if (std::abs(rec.cumulative_utility - after) > tol)
      violation("iteration " + std::to_string(i) + ": reported utility " +
                std::to_string(rec.cumulative_utility) + " differs from recomputed " +
                std::to_string(after));
    if (std::abs(rec.marginal_gain - (after - before)) > tol)
      violation("iteration " + std::to_string(i) + ": reported gain " +
                std::to_string(rec.marginal_gain) + " differs from chain-rule increment " +
                std::to_string(after - before));
    for (const auto& score : rec.candidate_scores) {
      if (score.modality >= k || std::abs(score.gain - gain_at[i][score.modality]) > tol)
        violation("iteration " + std::to_string(i) + ": candidate score for modality " +
                  std::to_string(score.modality) + " differs from recomputed gain");
    }
    if (after < before - tol) violation("iteration " + std::to_string(i) + ": utility decreased");
  }
  out.greedy_value = state.utility();

  // Diminishing returns up to epsilon along the chain S_0 subset ... subset S_p.
  std::vector<bool> in_sj(k, false);
  for (std::size_t j = 1; j <= p; ++j) {
    in_sj[trace.iterations[j - 1].chosen] = true;
    for (std::size_t i = 0; i < j; ++i) {
      for (Modality e = 0; e < k; ++e) {
        if (in_sj[e]) continue;
        ++out.submodularity_triples;
        if (gain_at[i][e] + epsilon + tol < gain_at[j][e])
          violation("diminishing returns: gain of " + std::to_string(e) + " grows from " +
                    std::to_string(gain_at[i][e]) + " at |S|=" + std::to_string(i) + " to " +
                    std::to_string(gain_at[j][e]) + " at |S|=" + std::to_string(j));
      }
    }
  }

  if (opt_source.provided) {
    out.opt_value = *opt_source.provided;
  } else {
    OptimalSubset best = brute_force_optimal(data, q, budget);
    out.opt_value = best.value;
    out.opt_subset = std::move(best.subset);
  }
  const double ratio = static_cast<double>(p) / static_cast<double>(q);
  out.factor = 1.0 - std::exp(-ratio);
  const double qeps = static_cast<double>(q) * epsilon;
  out.bound_value = out.factor * out.opt_value - qeps;
  out.slack = out.greedy_value - out.bound_value;
  out.loss_bound = out.label_entropy - out.factor * out.opt_value + qeps;
  out.loss_diff_bound = std::exp(-ratio) * out.opt_value + qeps;

  const BayesLosses greedy_losses = bayes_expected_losses(data, trace.selected());
  out.greedy_cross_entropy = greedy_losses.cross_entropy;
  out.greedy_zero_one = greedy_losses.zero_one;
  out.opt_cross_entropy = out.opt_subset
                              ? bayes_expected_losses(data, *out.opt_subset).cross_entropy
                              : out.label_entropy - out.opt_value;

  if (out.slack < -tol)
    violation("greedy bound: I(S_p;Y)=" + std::to_string(out.greedy_value) + " < " +
              std::to_string(out.bound_value));
  if (out.greedy_value > out.opt_value + tol)
    violation(out.opt_subset ? "greedy value exceeds the enumerated optimum"
                             : "greedy value exceeds the supplied optimum");
  if (out.greedy_zero_one > out.greedy_cross_entropy + tol)
    violation("zero-one loss exceeds cross-entropy loss");
  if (out.greedy_cross_entropy > out.loss_bound + tol)
    violation("loss bound: ce(S_p)=" + std::to_string(out.greedy_cross_entropy) + " > " +
              std::to_string(out.loss_bound));
  if (out.greedy_cross_entropy - out.opt_cross_entropy > out.loss_diff_bound + tol)
    violation("loss gap bound: ce(S_p)-ce(S*)=" +
              std::to_string(out.greedy_cross_entropy - out.opt_cross_entropy) + " > " +
              std::to_string(out.loss_diff_bound));
  return out;
}

ordered_json trace_to_json(const SelectionTrace& trace) {
  ordered_json j;
  j["method"] = trace.method;
  j["q"] = trace.q;
  j["p"] = trace.p;
  ordered_json its = ordered_json::array();
  for (const auto& it : trace.iterations) {
    ordered_json r;
    r["chosen"] = it.chosen;
    r["gain"] = it.marginal_gain;
    r["cumulative"] = it.cumulative_utility;
    ordered_json scores = ordered_json::object();
    for (const auto& s : it.candidate_scores) scores[std::to_string(s.modality)] = s.gain;
    r["scores"] = std::move(scores);
    its.push_back(std::move(r));
  }
  j["iterations"] = std::move(its);
  return j;
}

SelectionTrace trace_from_json(const ordered_json& j) {
  try {
    SelectionTrace trace;
    trace.q = j.at("q").get<std::size_t>();
    trace.p = j.at("p").get<std::size_t>();
    if (j.contains("method")) trace.method = j.at("method").get<std::string>();
    for (const auto& r : j.at("iterations")) {
      IterationRecord rec;
      rec.chosen = r.at("chosen").get<Modality>();
      rec.marginal_gain = r.at("gain").get<double>();
      rec.cumulative_utility = r.at("cumulative").get<double>();
      if (r.contains("scores")) {
        for (const auto& [key, value] : r.at("scores").items())
          rec.candidate_scores.push_back(
              {static_cast<Modality>(std::stoul(key)), value.get<double>()});
      }
      trace.iterations.push_back(std::move(rec));
    }
    return trace;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed trace JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw DataError(std::string("malformed trace JSON: ") + e.what());
  }
}

ordered_json losses_to_json(const std::vector<LossPoint>& losses) {
  ordered_json arr = ordered_json::array();
  for (const auto& l : losses) {
    ordered_json r;
    r["size"] = l.size;
    r["utility"] = l.utility;
    r["ce"] = l.cross_entropy;
    r["zero_one"] = l.zero_one;
    arr.push_back(std::move(r));
  }
  return arr;
}

ordered_json guarantee_to_json(const GuaranteeCheck& c) {
  ordered_json j;
  j["ok"] = c.ok();
  j["greedy_value"] = c.greedy_value;
  j["opt_value"] = c.opt_value;
  if (c.opt_subset) {
    j["opt_subset"] = std::vector<Modality>(c.opt_subset->begin(), c.opt_subset->end());
  } else {
    j["opt_subset"] = nullptr;
  }
  j["factor"] = c.factor;
  j["bound_value"] = c.bound_value;
  j["slack"] = c.slack;
  j["epsilon_used"] = c.epsilon_used;
  j["label_entropy"] = c.label_entropy;
  j["greedy_ce"] = c.greedy_cross_entropy;
  j["greedy_zero_one"] = c.greedy_zero_one;
  j["opt_ce"] = c.opt_cross_entropy;
  j["loss_bound"] = c.loss_bound;
  j["loss_diff_bound"] = c.loss_diff_bound;
  j["submodularity_triples"] = c.submodularity_triples;
  j["violations"] = c.violations;
  return j;
}

}  // namespace modsel
