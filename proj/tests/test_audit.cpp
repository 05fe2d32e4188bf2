#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "modsel/audit.hpp"
#include "modsel/datagen.hpp"
#include "modsel/errors.hpp"

using namespace modsel;

namespace {
DiscreteDataset naive_bayes(std::size_t k, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = GeneratorKind::naive_bayes;
  s.k = k;
  s.label_alphabet = 3;
  s.seed = seed;
  return generate(s);
}
}  // namespace

TEST_SUITE("audit") {
  TEST_CASE("scope parsing") {
    CHECK(AuditScope::parse("singletons") == AuditScope::singletons());
    CHECK(AuditScope::parse("exhaustive:3") == AuditScope::exhaustive(3));
    CHECK(AuditScope::exhaustive(2).label() == "exhaustive:2");
    CHECK_THROWS_AS(AuditScope::parse("exhaustive:0"), InvalidArgument);
    CHECK_THROWS_AS(AuditScope::parse("pairs"), InvalidArgument);
  }

  TEST_CASE("pair counts") {
    CHECK(disjoint_pair_count(3, 1) == 3);
    CHECK(disjoint_pair_count(4, 1) == 6);
    // All unordered pairs of disjoint non-empty subsets: (3^k - 2^(k+1) + 1) / 2.
    for (std::size_t k = 2; k <= 10; ++k) {
      const std::uint64_t p3 = static_cast<std::uint64_t>(std::llround(std::pow(3.0, k)));
      CHECK(disjoint_pair_count(k, k - 1) == (p3 - (std::uint64_t{2} << k) + 1) / 2);
    }
  }

  TEST_CASE("naive Bayes population has zero conditional dependence") {
    const auto d = naive_bayes(6, 4);
    const auto s = estimate_epsilon(d, AuditScope::singletons());
    CHECK(s.epsilon_conditional == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.mean_conditional == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.epsilon_marginal > 0.0);
    CHECK(s.lower_bound);
    const auto e = estimate_epsilon(d, AuditScope::exhaustive(5));
    CHECK(e.epsilon_conditional <= 1e-12);
    CHECK_FALSE(e.lower_bound);
  }

  TEST_CASE("duplicate modality identities") {
    const auto d = fx::duplicate_best();
    const auto e = estimate_epsilon(d, AuditScope::singletons());
    const double h_a_given_y = fx::ref::entropy(d, {0}, true) - fx::ref::entropy(d, {}, true);
    CHECK(e.epsilon_conditional == doctest::Approx(h_a_given_y).epsilon(1e-12));
    CHECK(e.epsilon_marginal == doctest::Approx(fx::ref::entropy(d, {0}, false)).epsilon(1e-12));
    CHECK(e.pairs_evaluated == 3);
  }

  TEST_CASE("exhaustive maxima match brute force") {
    for (std::uint64_t seed = 10; seed < 13; ++seed) {
      const auto d = fx::random_joint(5, 2, seed);
      for (std::size_t m = 1; m <= 4; ++m) {
        const auto e = estimate_epsilon(d, AuditScope::exhaustive(m));
        CHECK(e.epsilon_conditional ==
              doctest::Approx(fx::ref::epsilon_conditional(d, m)).epsilon(1e-12));
        CHECK(e.epsilon_marginal == doctest::Approx(fx::ref::epsilon_marginal(d, m)).epsilon(1e-12));
        CHECK(e.pairs_evaluated == disjoint_pair_count(5, m));
      }
    }
  }

  TEST_CASE("estimates are monotone in the scope") {
    const auto d = fx::random_joint(6, 2, 99);
    double prev_c = -1.0, prev_m = -1.0;
    for (std::size_t m = 1; m <= 5; ++m) {
      const auto e = estimate_epsilon(d, AuditScope::exhaustive(m));
      CHECK(e.epsilon_conditional >= prev_c);
      CHECK(e.epsilon_marginal >= prev_m);
      prev_c = e.epsilon_conditional;
      prev_m = e.epsilon_marginal;
    }
  }

  TEST_CASE("direct path agrees with the subset table") {
    const auto d = fx::random_joint(5, 3, 4);
    AuditOptions no_table;
    no_table.table_budget = 1;
    const auto a = estimate_epsilon(d, AuditScope::exhaustive(2));
    const auto b = estimate_epsilon(d, AuditScope::exhaustive(2), no_table);
    CHECK(a.epsilon_conditional == doctest::Approx(b.epsilon_conditional).epsilon(1e-12));
    CHECK(a.mean_marginal == doctest::Approx(b.mean_marginal).epsilon(1e-12));
  }

  TEST_CASE("budget and argument errors") {
    const auto d = fx::random_samples(12, 2, 2, 100, 1);
    AuditOptions tight;
    tight.pair_budget = 100;
    CHECK_THROWS_AS(estimate_epsilon(d, AuditScope::exhaustive(3), tight), BudgetExceeded);
    CHECK_THROWS_AS(estimate_epsilon(fx::bsc(0.1), AuditScope::singletons()), InvalidArgument);
  }

  TEST_CASE("report keys") {
    const auto j = audit_report(estimate_epsilon(fx::duplicate_best(), AuditScope::singletons()));
    for (const char* key : {"scope", "pairs_evaluated", "eps_cond_max", "eps_cond_mean", "eps_marg_max",
                            "eps_marg_mean", "lower_bound"})
      CHECK(j.contains(key));
  }
}
