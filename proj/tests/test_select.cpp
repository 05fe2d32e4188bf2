#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "modsel/datagen.hpp"
#include "modsel/errors.hpp"
#include "modsel/info.hpp"
#include "modsel/select.hpp"

using namespace modsel;

namespace {
std::vector<Modality> chosen(const SelectionTrace& t) {
  std::vector<Modality> out;
  for (const auto& it : t.iterations) out.push_back(it.chosen);
  return out;
}

DiscreteDataset nb(std::size_t k, std::uint64_t seed) {
  GeneratorSpec s;
  s.k = k;
  s.seed = seed;
  return generate(s);
}
}  // namespace

TEST_SUITE("select") {
  TEST_CASE("duplicate fixture: greedy skips the copy") {
    const auto t = greedy_select(fx::duplicate_best(), 2, 2);
    CHECK(chosen(t) == std::vector<Modality>{0, 2});
    CHECK(t.iterations[1].marginal_gain > 0.0);
    for (const auto& c : t.iterations[1].candidate_scores)
      if (c.modality == 1) CHECK(c.gain == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("gains and cumulative utilities are consistent") {
    const auto d = fx::random_joint(6, 3, 21);
    const auto t = greedy_select(d, 6, 6);
    double sum = 0.0;
    for (std::size_t i = 0; i < t.iterations.size(); ++i) {
      sum += t.iterations[i].marginal_gain;
      CHECK(t.iterations[i].cumulative_utility == doctest::Approx(sum).epsilon(1e-10));
      CHECK(t.iterations[i].cumulative_utility ==
            doctest::Approx(fx::ref::mi(d, t.prefix(i + 1))).epsilon(1e-12));
    }
  }

  TEST_CASE("each step picks the best candidate") {
    const auto d = fx::random_joint(5, 2, 3);
    const auto t = greedy_select(d, 5, 5);
    for (std::size_t i = 0; i < t.iterations.size(); ++i) {
      const auto base = fx::ref::mi(d, t.prefix(i));
      const double best = fx::ref::mi(d, t.prefix(i + 1)) - base;
      for (Modality j = 0; j < 5; ++j)
        if (!t.prefix(i).contains(j)) CHECK(fx::ref::mi(d, t.prefix(i).with(j)) - base <= best + 1e-12);
    }
  }

  TEST_CASE("ties go to the lowest index") {
    // Four independent-given-Y copies with equal noise.
    GeneratorSpec s;
    s.k = 4;
    s.noise.assign(4, 0.2);
    const auto t = greedy_select(generate(s), 4, 4);
    CHECK(chosen(t) == std::vector<Modality>{0, 1, 2, 3});
  }

  TEST_CASE("lazy mode matches full scan") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto d = nb(8, seed);
      GreedyOptions lazy;
      lazy.mode = GreedyMode::lazy;
      CHECK(chosen(greedy_select(d, 8, 8, lazy)) == chosen(greedy_select(d, 8, 8)));
    }
    // With a slack above the largest possible violation the match is exact on any data.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto d = fx::random_joint(6, 2, 100 + seed);
      GreedyOptions lazy;
      lazy.mode = GreedyMode::lazy;
      lazy.lazy_slack = label_entropy(d).nats;
      const auto a = greedy_select(d, 6, 6, lazy);
      const auto b = greedy_select(d, 6, 6);
      CHECK(chosen(a) == chosen(b));
      for (std::size_t i = 0; i < a.iterations.size(); ++i)
        CHECK(a.iterations[i].marginal_gain == b.iterations[i].marginal_gain);
    }
  }

  TEST_CASE("lazy mode re-scores fewer candidates on naive Bayes data") {
    const auto d = nb(12, 3);
    GreedyOptions lazy;
    lazy.mode = GreedyMode::lazy;
    const auto t = greedy_select(d, 6, 6, lazy);
    std::size_t scored = 0;
    for (const auto& it : t.iterations) scored += it.candidate_scores.size();
    CHECK(scored < 12 + 11 + 10 + 9 + 8 + 7);
  }

  TEST_CASE("argument checks") {
    const auto d = nb(4, 1);
    CHECK_THROWS_AS(greedy_select(d, 0, 0), InvalidArgument);
    CHECK_THROWS_AS(greedy_select(d, 5, 1), InvalidArgument);
    CHECK_THROWS_AS(greedy_select(d, 2, 3), InvalidArgument);
    GreedyOptions bad;
    bad.lazy_slack = -1.0;
    CHECK_THROWS_AS(greedy_select(d, 2, 2, bad), InvalidArgument);
  }

  TEST_CASE("p < q stops early") {
    const auto t = greedy_select(nb(6, 2), 4, 2);
    CHECK(t.iterations.size() == 2);
    CHECK(t.q == 4);
  }

  TEST_CASE("loss report on BSC") {
    const auto d = fx::bsc(0.1);
    const auto t = greedy_select(d, 1, 1);
    const auto l = loss_report(t, d);
    REQUIRE(l.size() == 2);
    CHECK(l[0].cross_entropy == doctest::Approx(std::log(2.0)));
    CHECK(l[1].cross_entropy == doctest::Approx(0.325083).epsilon(1e-6));
    CHECK(l[1].zero_one == doctest::Approx(0.1));
  }

  TEST_CASE("guarantee holds on naive Bayes with epsilon 0") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto d = nb(8, seed);
      const auto t = greedy_select(d, 3, 3);
      const auto c = check_guarantee(t, d, 0.0, OptSource::oracle());
      CHECK(c.ok());
      CHECK(c.slack >= -1e-9);
      CHECK(c.opt_value == doctest::Approx(fx::ref::optimum(d, 3)).epsilon(1e-12));
      CHECK(c.factor == doctest::Approx(1.0 - std::exp(-1.0)));
    }
  }

  TEST_CASE("p = q = k reduces the bound to (1 - 1/e) I(V;Y) - k eps") {
    const auto d = fx::random_joint(4, 2, 5);
    const auto t = greedy_select(d, 4, 4);
    const double eps = 0.05;
    const auto c = check_guarantee(t, d, eps, OptSource::oracle());
    const double iv = fx::ref::mi(d, ModalitySubset::range(4));
    CHECK(c.opt_value == doctest::Approx(iv).epsilon(1e-12));
    CHECK(c.bound_value == doctest::Approx((1.0 - std::exp(-1.0)) * iv - 4 * eps).epsilon(1e-12));
  }

  TEST_CASE("a corrupted trace is caught") {
    const auto d = nb(6, 7);
    auto t = greedy_select(d, 3, 3);
    t.iterations[1].marginal_gain += 0.05;
    const auto c = check_guarantee(t, d, 0.0, OptSource::oracle());
    CHECK_FALSE(c.ok());
    auto t2 = greedy_select(d, 3, 3);
    t2.iterations[2].cumulative_utility += 1.0;
    CHECK_FALSE(check_guarantee(t2, d, 0.0, OptSource::oracle()).ok());
  }

  TEST_CASE("a wrong optimum is flagged") {
    const auto d = nb(6, 8);
    const auto t = greedy_select(d, 3, 3);
    const auto c = check_guarantee(t, d, 0.0, OptSource::value(0.01));
    CHECK_FALSE(c.ok());
  }

  TEST_CASE("trace JSON round trip") {
    const auto d = nb(5, 9);
    const auto t = greedy_select(d, 3, 3);
    const auto j = trace_to_json(t);
    const auto back = trace_from_json(j);
    CHECK(trace_to_json(back).dump() == j.dump());
    CHECK_THROWS_AS(trace_from_json(ordered_json::parse(R"({"q":1})")), DataError);
  }

  TEST_CASE("path trace follows the given order") {
    const auto d = nb(5, 1);
    std::vector<Modality> order{4, 2, 0, 1, 3};
    const auto t = path_trace(d, order, 3, "custom");
    CHECK(chosen(t) == std::vector<Modality>{4, 2, 0});
    CHECK(t.method == "custom");
  }
}
