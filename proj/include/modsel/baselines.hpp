#pragma once

// Comparison curves for greedy selection: random paths, score-ranked paths,
// and the enumerated optimal and average utility at each subset size.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modsel/dataset.hpp"
#include "modsel/oracle.hpp"
#include "modsel/select.hpp"

namespace modsel {

struct CurvePoint {
  std::size_t size = 0;
  double utility = 0.0;
  std::optional<ModalitySubset> subset;  // set for the optimal curve
};

// Uniformly random ordering of the modalities from a seeded generator.
std::vector<Modality> random_order(std::size_t k, std::uint64_t seed);

SelectionTrace random_trace(const DiscreteDataset& data, std::size_t q, std::uint64_t seed);

// Best subset of each size 1..q_max.
std::vector<CurvePoint> optimal_curve(const DiscreteDataset& data, std::size_t q_max,
                                      const OracleBudget& budget = {});
// Mean utility over all subsets of each size 1..q_max.
std::vector<CurvePoint> average_curve(const DiscreteDataset& data, std::size_t q_max,
                                      const OracleBudget& budget = {});

std::vector<CurvePoint> trace_curve(const SelectionTrace& trace);

ordered_json curve_to_json(const std::vector<CurvePoint>& curve);
std::string curve_to_csv(const std::vector<CurvePoint>& curve);

}  // namespace modsel
