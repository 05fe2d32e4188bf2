#pragma once

// Empirical estimates of the conditional-independence constant (max I(S;S'|Y))
// and the marginal-independence constant (max I(S;S')) over disjoint pairs.

#include <cstdint>
#include <string>

#include "modsel/dataset.hpp"
#include "vendor_json.hpp"

namespace modsel {

struct AuditScope {
  enum class Kind { singletons, exhaustive };
  Kind kind = Kind::singletons;
  std::size_t max_size = 1;  // exhaustive: |S|, |S'| <= max_size

  static AuditScope singletons() { return {}; }
  static AuditScope exhaustive(std::size_t m) { return {Kind::exhaustive, m}; }
  // "singletons" or "exhaustive:<m>"
  static AuditScope parse(const std::string& text);
  std::string label() const;
  bool operator==(const AuditScope&) const = default;
};

struct AuditOptions {
  std::uint64_t pair_budget = 1'000'000;
  // Exhaustive audits precompute all 2^k subsets when this allows it.
  std::uint64_t table_budget = std::uint64_t{1} << 20;
  unsigned threads = 1;
};

struct EpsilonEstimate {
  double epsilon_conditional = 0.0;  // max I(S; S' | Y)
  double epsilon_marginal = 0.0;     // max I(S; S')
  double mean_conditional = 0.0;
  double mean_marginal = 0.0;
  AuditScope scope;
  std::uint64_t pairs_evaluated = 0;
  // False when the scope covers every disjoint pair, so the maxima are the true constants.
  bool lower_bound = true;
};

// Unordered pairs {S, S'} of disjoint non-empty subsets with |S|, |S'| <= m.
std::uint64_t disjoint_pair_count(std::size_t k, std::size_t m);

EpsilonEstimate estimate_epsilon(const DiscreteDataset& data, const AuditScope& scope,
                                 const AuditOptions& options = {});

// {scope, pairs_evaluated, eps_cond_max, eps_cond_mean, eps_marg_max, eps_marg_mean, lower_bound}
ordered_json audit_report(const EpsilonEstimate& estimate);
std::string audit_table(const EpsilonEstimate& estimate);

}  // namespace modsel
