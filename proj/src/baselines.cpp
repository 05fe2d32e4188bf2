#include "modsel/baselines.hpp"

#include <numeric>
#include <sstream>
#include <iomanip>

#include "modsel/errors.hpp"
#include "modsel/random.hpp"

namespace modsel {

std::vector<Modality> random_order(std::size_t k, std::uint64_t seed) {
  std::vector<Modality> order(k);
  std::iota(order.begin(), order.end(), Modality{0});
  Rng rng(seed);
  for (std::size_t i = k; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
  return order;
}

SelectionTrace random_trace(const DiscreteDataset& data, std::size_t q, std::uint64_t seed) {
  const auto order = random_order(data.n_modalities(), seed);
  return path_trace(data, order, q, "random");
}

std::vector<CurvePoint> optimal_curve(const DiscreteDataset& data, std::size_t q_max,
                                      const OracleBudget& budget) {
  std::vector<CurvePoint> curve;
  for (std::size_t q = 1; q <= q_max; ++q) {
    OptimalSubset best = brute_force_optimal(data, q, budget);
    curve.push_back({q, best.value, std::move(best.subset)});
  }
  return curve;
}

std::vector<CurvePoint> average_curve(const DiscreteDataset& data, std::size_t q_max,
                                      const OracleBudget& budget) {
  std::vector<CurvePoint> curve;
  for (std::size_t q = 1; q <= q_max; ++q)
    curve.push_back({q, average_utility(data, q, budget), std::nullopt});
  return curve;
}

std::vector<CurvePoint> trace_curve(const SelectionTrace& trace) {
  std::vector<CurvePoint> curve;
  for (std::size_t i = 0; i < trace.iterations.size(); ++i)
    curve.push_back({i + 1, trace.iterations[i].cumulative_utility, trace.prefix(i + 1)});
  return curve;
}

ordered_json curve_to_json(const std::vector<CurvePoint>& curve) {
  ordered_json arr = ordered_json::array();
  for (const auto& point : curve) {
    ordered_json r;
    r["size"] = point.size;
    r["utility"] = point.utility;
    if (point.subset)
      r["subset"] = std::vector<Modality>(point.subset->begin(), point.subset->end());
    arr.push_back(std::move(r));
  }
  return arr;
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream os;
  os << "size,utility\n" << std::setprecision(17);
  for (const auto& point : curve) os << point.size << ',' << point.utility << '\n';
  return os.str();
}

}  // namespace modsel
