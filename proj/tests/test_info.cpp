#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "modsel/errors.hpp"
#include "modsel/info.hpp"

using namespace modsel;

TEST_SUITE("info") {
  TEST_CASE("fit_joint on a 4-sample dataset") {
    std::vector<std::uint32_t> x{0, 0, 1, 1};
    DiscreteDataset d({2}, 2, x, {0, 0, 1, 1});
    const auto t = fit_joint(d, {0}, true);
    REQUIRE(t.cells.size() == 2);
    CHECK(t.cells[0].values == std::vector<std::uint32_t>{0, 0});
    CHECK(t.cells[0].mass / t.total_mass == doctest::Approx(0.5));
    CHECK(t.cells[1].values == std::vector<std::uint32_t>{1, 1});
    CHECK(t.cells[1].mass / t.total_mass == doctest::Approx(0.5));
  }

  TEST_CASE("entropy of (0.25, 0.75)") {
    std::vector<std::uint32_t> x{0, 0};
    DiscreteDataset d({1}, 2, x, {0, 1}, {0.25, 0.75});
    CHECK(label_entropy(d).nats == doctest::Approx(0.562335).epsilon(1e-6));
  }

  TEST_CASE("binary symmetric channel") {
    const auto d = fx::bsc(0.1);
    const double hb = -(0.1 * std::log(0.1) + 0.9 * std::log(0.9));
    CHECK(conditional_entropy(d, {0}).nats == doctest::Approx(hb).epsilon(1e-12));
    CHECK(conditional_entropy(d, {0}).nats == doctest::Approx(0.325083).epsilon(1e-6));
    CHECK(mutual_information(d, {0}).nats == doctest::Approx(0.368064).epsilon(1e-6));
    const auto losses = bayes_expected_losses(d, {0});
    CHECK(losses.cross_entropy == doctest::Approx(0.325083).epsilon(1e-6));
    CHECK(losses.zero_one == doctest::Approx(0.1).epsilon(1e-12));
    const auto dec = bayes_decisions(d, {0});
    CHECK(dec == std::vector<std::uint32_t>{0, 1});
  }

  TEST_CASE("empty subset") {
    const auto d = fx::bsc(0.2);
    CHECK(mutual_information(d, {}).nats == 0.0);
    CHECK(conditional_entropy(d, {}).nats == doctest::Approx(std::log(2.0)));
    CHECK(bayes_expected_losses(d, {}).zero_one == doctest::Approx(0.5));
  }

  TEST_CASE("duplicate-variable identities") {
    const auto d = fx::duplicate_best();
    const double h_a_given_y = fx::ref::entropy(d, {0}, true) - fx::ref::entropy(d, {}, true);
    CHECK(conditional_mutual_information(d, {0}, {1}).nats ==
          doctest::Approx(h_a_given_y).epsilon(1e-12));
    CHECK(marginal_mutual_information(d, {0}, {1}).nats ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(conditional_mutual_information(d, {0}, {2}).nats == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(conditional_mutual_information(d, {0}, {}).nats == 0.0);
  }

  TEST_CASE("overlapping subsets are rejected") {
    const auto d = fx::duplicate_best();
    CHECK_THROWS_AS(conditional_mutual_information(d, {0, 1}, {1}), InvalidArgument);
    CHECK_THROWS_AS(marginal_mutual_information(d, {2}, {2}), InvalidArgument);
  }

  TEST_CASE("clamping") {
    CHECK(InfoValue::clamped(-1e-13).nats == 0.0);
    CHECK(InfoValue::clamped(5e-13).nats == 0.0);
    CHECK(InfoValue::clamped(0.3).nats == 0.3);
    CHECK_THROWS(InfoValue::clamped(-1e-6));
    CHECK_THROWS(InfoValue::clamped(std::nan("")));
  }

  TEST_CASE("measures match the reference on random joints") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto d = fx::random_joint(4, 3, seed);
      for (std::uint64_t m = 0; m < 16; ++m) {
        const auto s = ModalitySubset::from_mask(m);
        CHECK(mutual_information(d, s).nats == doctest::Approx(fx::ref::mi(d, s)).epsilon(1e-12));
        const auto l = bayes_expected_losses(d, s);
        CHECK(l.cross_entropy + mutual_information(d, s).nats ==
              doctest::Approx(label_entropy(d).nats).epsilon(1e-12));
        CHECK(l.zero_one == doctest::Approx(fx::ref::zero_one(d, s)).epsilon(1e-12));
      }
      CHECK(conditional_mutual_information(d, {0, 1}, {3}).nats ==
            doctest::Approx(fx::ref::cmi(d, {0, 1}, {3})).epsilon(1e-12));
      CHECK(marginal_mutual_information(d, {2}, {0, 3}).nats ==
            doctest::Approx(fx::ref::marginal_mi(d, {2}, {0, 3})).epsilon(1e-12));
    }
  }

  TEST_CASE("sampled data matches the reference") {
    const auto d = fx::random_samples(5, 4, 3, 3000, 3);
    for (std::uint64_t m = 1; m < 32; m += 3) {
      const auto s = ModalitySubset::from_mask(m);
      CHECK(mutual_information(d, s).nats == doctest::Approx(fx::ref::mi(d, s)).epsilon(1e-11));
    }
  }

  TEST_CASE("dataset validation") {
    std::vector<std::uint32_t> x{0, 2};
    CHECK_THROWS_AS(DiscreteDataset({2}, 2, x, {0, 1}), InvalidArgument);
    std::vector<std::uint32_t> ok{0, 1};
    CHECK_THROWS_AS(DiscreteDataset({2}, 2, ok, {0, 2}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteDataset({2}, 1, ok, {0, 0}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteDataset({2}, 2, ok, {0, 1}, {1.0, -1.0}), InvalidArgument);
    CHECK_THROWS_AS(ModalitySubset({1, 1}), InvalidArgument);
  }
  TEST_CASE("single sample and point mass") {
    std::vector<std::uint32_t> x{1};
    DiscreteDataset d({2}, 2, x, {1});
    const auto t = fit_joint(d, {0}, true);
    REQUIRE(t.cells.size() == 1);
    CHECK(t.cells[0].mass / t.total_mass == 1.0);
    CHECK(entropy(t).nats == 0.0);
    CHECK(label_entropy(d).nats == 0.0);
  }

  TEST_CASE("deterministic copy") {
    const auto d = fx::bsc(0.0);
    CHECK(conditional_entropy(d, {0}).nats == doctest::Approx(0.0).epsilon(1e-12));
    const auto l = bayes_expected_losses(d, {0});
    CHECK(l.cross_entropy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(l.zero_one == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("chain rule and marginal bounds") {
    for (std::uint64_t seed = 11; seed <= 14; ++seed) {
      const auto d = fx::random_joint(4, 3, seed);
      const double joint = mutual_information(d, {0, 2}).nats;
      const double split = mutual_information(d, {0}).nats +
                           conditional_entropy(d, {0}).nats - conditional_entropy(d, {0, 2}).nats;
      CHECK(joint == doctest::Approx(split).epsilon(1e-9));
      for (std::uint32_t i = 0; i < 4; ++i) {
        const double hx = fx::ref::entropy(d, {i}, false);
        CHECK(mutual_information(d, {i}).nats <= std::min(hx, label_entropy(d).nats) + 1e-12);
      }
    }
  }
}
