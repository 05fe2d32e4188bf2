#include "modsel/audit.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <limits>
#include <sstream>

#include "modsel/errors.hpp"
#include "modsel/info.hpp"
#include "modsel/oracle.hpp"
#include "modsel/parallel.hpp"
#include "modsel/partition.hpp"
#include "modsel/subset_table.hpp"

namespace modsel {
namespace {

struct PairStats {
  double cond_max = 0.0;
  double marg_max = 0.0;
  double cond_sum = 0.0;
  double marg_sum = 0.0;
  std::uint64_t count = 0;

  void add(double cond, double marg) {
    cond = InfoValue::clamped(cond).nats;
    marg = InfoValue::clamped(marg).nats;
    cond_max = std::max(cond_max, cond);
    marg_max = std::max(marg_max, marg);
    cond_sum += cond;
    marg_sum += marg;
    ++count;
  }
  void merge(const PairStats& o) {
    cond_max = std::max(cond_max, o.cond_max);
    marg_max = std::max(marg_max, o.marg_max);
    cond_sum += o.cond_sum;
    marg_sum += o.marg_sum;
    count += o.count;
  }
};

// All subsets of size 1..m in (size, lexicographic) order.
std::vector<ModalitySubset> small_subsets(std::size_t k, std::size_t m) {
  std::vector<ModalitySubset> out;
  std::vector<Modality> current;
  for (std::size_t size = 1; size <= m; ++size) {
    std::vector<Modality> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = static_cast<Modality>(i);
    while (true) {
      out.emplace_back(idx);
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == k - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

PairStats scan_with_table(const SubsetTable& table, const std::vector<ModalitySubset>& subsets,
                          unsigned threads) {
  std::vector<std::uint64_t> masks;
  masks.reserve(subsets.size());
  for (const auto& s : subsets) masks.push_back(s.mask());
  std::vector<PairStats> partial(subsets.size());
  parallel_for(subsets.size(), threads, [&](std::size_t a) {
    for (std::size_t b = a + 1; b < masks.size(); ++b) {
      if (masks[a] & masks[b]) continue;
      partial[a].add(table.conditional_mi(masks[a], masks[b]),
                     table.marginal_mi(masks[a], masks[b]));
    }
  });
  PairStats total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

PairStats scan_direct(const DiscreteDataset& data, const std::vector<ModalitySubset>& subsets,
                      unsigned threads) {
  std::vector<JointEntropies> single(subsets.size());
  parallel_for(subsets.size(), threads, [&](std::size_t a) {
    EntropyWorkspace ws;
    single[a] = subset_entropies(data, subsets[a], ws);
  });
  EntropyWorkspace ws0;
  const double hy = label_entropy(data, ws0);
  std::vector<PairStats> partial(subsets.size());
  parallel_for(subsets.size(), threads, [&](std::size_t a) {
    EntropyWorkspace ws;
    for (std::size_t b = a + 1; b < subsets.size(); ++b) {
      if (subsets[a].intersects(subsets[b])) continue;
      const JointEntropies both = subset_entropies(data, subsets[a].united(subsets[b]), ws);
      partial[a].add(single[a].subset_label + single[b].subset_label - both.subset_label - hy,
                     single[a].subset + single[b].subset - both.subset);
    }
  });
  PairStats total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace

AuditScope AuditScope::parse(const std::string& text) {
  if (text == "singletons") return singletons();
  const std::string prefix = "exhaustive:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t m = 0;
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, m);
    if (ec == std::errc() && ptr == last && m >= 1) return exhaustive(m);
  }
  throw InvalidArgument("scope must be 'singletons' or 'exhaustive:<m>' with m >= 1, got '" +
                        text + "'");
}

std::string AuditScope::label() const {
  return kind == Kind::singletons ? "singletons" : "exhaustive:" + std::to_string(max_size);
}

std::uint64_t disjoint_pair_count(std::size_t k, std::size_t m) {
  // Ordered pairs, then halve: S != S' always holds for disjoint non-empty sets.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t ordered = 0;
  for (std::size_t a = 1; a <= std::min(m, k); ++a) {
    for (std::size_t b = 1; b <= std::min(m, k - a); ++b) {
      const std::uint64_t x = binomial(k, a);
      const std::uint64_t y = binomial(k - a, b);
      if (x == kMax || y == kMax || (y != 0 && x > kMax / y)) return kMax;
      if (ordered > kMax - x * y) return kMax;
      ordered += x * y;
    }
  }
  return ordered / 2;
}

EpsilonEstimate estimate_epsilon(const DiscreteDataset& data, const AuditScope& scope,
                                 const AuditOptions& options) {
  const std::size_t k = data.n_modalities();
  if (k < 2) throw InvalidArgument("independence audit needs at least 2 modalities");
  if (scope.kind == AuditScope::Kind::exhaustive && scope.max_size < 1)
    throw InvalidArgument("exhaustive scope needs a subset size of at least 1");

  const std::size_t m = scope.kind == AuditScope::Kind::singletons
                            ? 1
                            : std::min(scope.max_size, k - 1);
  const std::uint64_t pairs = disjoint_pair_count(k, m);
  if (pairs > options.pair_budget)
    throw BudgetExceeded("audit scope " + scope.label() + " has " + std::to_string(pairs) +
                         " subset pairs, over the budget of " +
                         std::to_string(options.pair_budget));

  const auto subsets = small_subsets(k, m);
  PairStats stats;
  if (k < 63 && (std::uint64_t{1} << k) <= options.table_budget) {
    stats = scan_with_table(SubsetTable::build(data, options.table_budget, options.threads),
                            subsets, options.threads);
  } else {
    stats = scan_direct(data, subsets, options.threads);
  }

  EpsilonEstimate est;
  est.scope = scope;
  est.pairs_evaluated = stats.count;
  est.epsilon_conditional = stats.cond_max;
  est.epsilon_marginal = stats.marg_max;
  est.mean_conditional = stats.cond_sum / static_cast<double>(stats.count);
  est.mean_marginal = stats.marg_sum / static_cast<double>(stats.count);
  est.lower_bound = m < k - 1;
  return est;
}

ordered_json audit_report(const EpsilonEstimate& estimate) {
  ordered_json j;
  j["scope"] = estimate.scope.label();
  j["pairs_evaluated"] = estimate.pairs_evaluated;
  j["eps_cond_max"] = estimate.epsilon_conditional;
  j["eps_cond_mean"] = estimate.mean_conditional;
  j["eps_marg_max"] = estimate.epsilon_marginal;
  j["eps_marg_mean"] = estimate.mean_marginal;
  j["lower_bound"] = estimate.lower_bound;
  return j;
}

std::string audit_table(const EpsilonEstimate& estimate) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "scope " << estimate.scope.label() << " (" << estimate.pairs_evaluated << " pairs"
     << (estimate.lower_bound ? ", lower bound on epsilon" : "") << ")\n";
  os << std::setw(16) << "" << std::setw(16) << "Mean Marg. MI" << std::setw(16)
     << "Mean Cond. MI\n";
  os << std::setw(16) << "mean" << std::setw(16) << estimate.mean_marginal << std::setw(16)
     << estimate.mean_conditional << '\n';
  os << std::setw(16) << "max (epsilon)" << std::setw(16) << estimate.epsilon_marginal
     << std::setw(16) << estimate.epsilon_conditional << '\n';
  return os.str();
}

}  // namespace modsel
