#pragma once

// Shared fixtures and a deliberately naive reference implementation of the
// information measures (std::map tables, std::log) used as an oracle.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "modsel/dataset.hpp"

namespace fx {

using modsel::DiscreteDataset;
using modsel::Modality;
using modsel::ModalitySubset;

// Exact population over the full product space; prob(x, y) must sum to 1.
DiscreteDataset make_population(
    const std::vector<std::uint32_t>& alphabets, std::uint32_t label_alphabet,
    const std::function<double(const std::vector<std::uint32_t>&, std::uint32_t)>& prob);

// X1 = Y flipped with probability eta, Y uniform binary.
DiscreteDataset bsc(double eta);

// {A, A', C}: label Y = (Y1, Y2) uniform on 4 values, A = BSC(Y1, 0.05),
// A' = A, C = BSC(Y2, 0.2).
DiscreteDataset duplicate_best();

// Y = (Y_1..Y_k) independent bits, X_i = BSC(Y_i, eta_i). Zero conditional and
// marginal dependence, so utility is additive.
DiscreteDataset additive(const std::vector<double>& etas);

// Arbitrary random joint over binary modalities and label (Dirichlet(1)
// weights); generic dependence structure.
DiscreteDataset random_joint(std::size_t k, std::uint32_t label_alphabet, std::uint64_t seed);

// Uniformly random categorical samples.
DiscreteDataset random_samples(std::size_t k, std::uint32_t alphabet, std::uint32_t label_alphabet,
                               std::size_t n, std::uint64_t seed);

std::string fixture_path(const std::string& name);

namespace ref {
double entropy(const DiscreteDataset& d, const ModalitySubset& s, bool with_label);
double mi(const DiscreteDataset& d, const ModalitySubset& s);  // I(S;Y)
double cmi(const DiscreteDataset& d, const ModalitySubset& a, const ModalitySubset& b);  // I(A;B|Y)
double marginal_mi(const DiscreteDataset& d, const ModalitySubset& a, const ModalitySubset& b);
double zero_one(const DiscreteDataset& d, const ModalitySubset& s);
// Brute force over all masks (k < 20).
double shapley(const DiscreteDataset& d, Modality i);
double mci(const DiscreteDataset& d, Modality i);
double optimum(const DiscreteDataset& d, std::size_t q);
// max over all disjoint non-empty pairs with sizes <= m.
double epsilon_conditional(const DiscreteDataset& d, std::size_t m);
double epsilon_marginal(const DiscreteDataset& d, std::size_t m);
}  // namespace ref

}  // namespace fx
