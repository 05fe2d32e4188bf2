#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace fx {

DiscreteDataset make_population(
    const std::vector<std::uint32_t>& alphabets, std::uint32_t label_alphabet,
    const std::function<double(const std::vector<std::uint32_t>&, std::uint32_t)>& prob) {
  const std::size_t k = alphabets.size();
  std::vector<std::uint32_t> x(k, 0), values, labels;
  std::vector<double> weights;
  while (true) {
    for (std::uint32_t y = 0; y < label_alphabet; ++y) {
      const double p = prob(x, y);
      if (p > 0.0) {
        values.insert(values.end(), x.begin(), x.end());
        labels.push_back(y);
        weights.push_back(p);
      }
    }
    std::size_t i = k;
    while (i > 0 && ++x[i - 1] == alphabets[i - 1]) x[--i] = 0;
    if (i == 0) break;
  }
  DiscreteDataset d(alphabets, label_alphabet, values, labels, weights);
  d.set_population(true);
  return d;
}

namespace {
double flip(std::uint32_t x, std::uint32_t y, double eta) { return x == y ? 1.0 - eta : eta; }
}  // namespace

DiscreteDataset bsc(double eta) {
  return make_population({2}, 2, [&](const auto& x, std::uint32_t y) { return 0.5 * flip(x[0], y, eta); });
}

DiscreteDataset duplicate_best() {
  return make_population({2, 2, 2}, 4, [](const auto& x, std::uint32_t y) {
    if (x[0] != x[1]) return 0.0;
    return 0.25 * flip(x[0], y & 1u, 0.05) * flip(x[2], y >> 1, 0.2);
  });
}

DiscreteDataset additive(const std::vector<double>& etas) {
  const std::size_t k = etas.size();
  return make_population(std::vector<std::uint32_t>(k, 2), 1u << k,
                         [&](const auto& x, std::uint32_t y) {
                           double p = 1.0 / static_cast<double>(1u << k);
                           for (std::size_t i = 0; i < k; ++i) p *= flip(x[i], (y >> i) & 1u, etas[i]);
                           return p;
                         });
}

DiscreteDataset random_joint(std::size_t k, std::uint32_t label_alphabet, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  const std::size_t cells = (std::size_t{1} << k) * label_alphabet;
  std::vector<double> w(cells);
  double total = 0.0;
  for (auto& v : w) total += (v = expo(rng));
  return make_population(std::vector<std::uint32_t>(k, 2), label_alphabet,
                         [&](const auto& x, std::uint32_t y) {
                           std::size_t idx = 0;
                           for (auto v : x) idx = idx * 2 + v;
                           return w[idx * label_alphabet + y] / total;
                         });
}

DiscreteDataset random_samples(std::size_t k, std::uint32_t alphabet, std::uint32_t label_alphabet,
                               std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> values(n * k), labels(n);
  for (auto& v : values) v = static_cast<std::uint32_t>(rng() % alphabet);
  for (auto& y : labels) y = static_cast<std::uint32_t>(rng() % label_alphabet);
  return DiscreteDataset(std::vector<std::uint32_t>(k, alphabet), label_alphabet, values, labels);
}

std::string fixture_path(const std::string& name) { return std::string(MODSEL_FIXTURE_DIR) + "/" + name; }

namespace ref {

double entropy(const DiscreteDataset& d, const ModalitySubset& s, bool with_label) {
  std::map<std::vector<std::uint32_t>, double> table;
  double total = 0.0;
  for (std::size_t r = 0; r < d.n_samples(); ++r) {
    std::vector<std::uint32_t> key;
    for (auto m : s) key.push_back(d.value(r, m));
    if (with_label) key.push_back(d.labels()[r]);
    table[key] += d.weights()[r];
    total += d.weights()[r];
  }
  double h = 0.0;
  for (const auto& [key, w] : table)
    if (w > 0.0) h -= (w / total) * std::log(w / total);
  return h;
}

double mi(const DiscreteDataset& d, const ModalitySubset& s) {
  if (s.empty()) return 0.0;
  return entropy(d, {}, true) + entropy(d, s, false) - entropy(d, s, true);
}

double cmi(const DiscreteDataset& d, const ModalitySubset& a, const ModalitySubset& b) {
  return entropy(d, a, true) + entropy(d, b, true) - entropy(d, a.united(b), true) -
         entropy(d, {}, true);
}

double marginal_mi(const DiscreteDataset& d, const ModalitySubset& a, const ModalitySubset& b) {
  return entropy(d, a, false) + entropy(d, b, false) - entropy(d, a.united(b), false);
}

double zero_one(const DiscreteDataset& d, const ModalitySubset& s) {
  std::map<std::vector<std::uint32_t>, std::vector<double>> table;
  double total = 0.0;
  for (std::size_t r = 0; r < d.n_samples(); ++r) {
    std::vector<std::uint32_t> key;
    for (auto m : s) key.push_back(d.value(r, m));
    auto& row = table[key];
    row.resize(d.label_alphabet(), 0.0);
    row[d.labels()[r]] += d.weights()[r];
    total += d.weights()[r];
  }
  double correct = 0.0;
  for (const auto& [key, row] : table) correct += *std::max_element(row.begin(), row.end());
  return 1.0 - correct / total;
}

namespace {
std::vector<double> all_utilities(const DiscreteDataset& d) {
  const std::size_t k = d.n_modalities();
  if (k >= 20) throw std::runtime_error("reference enumeration too large");
  std::vector<double> f(std::size_t{1} << k);
  for (std::uint64_t m = 0; m < f.size(); ++m) f[m] = mi(d, ModalitySubset::from_mask(m));
  return f;
}
double binom(std::size_t n, std::size_t r) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0)));
}
}  // namespace

double shapley(const DiscreteDataset& d, Modality i) {
  const auto f = all_utilities(d);
  const std::size_t k = d.n_modalities();
  double phi = 0.0;
  for (std::uint64_t m = 0; m < f.size(); ++m) {
    if (m >> i & 1u) continue;
    const auto s = static_cast<std::size_t>(__builtin_popcountll(m));
    phi += (f[m | (1ull << i)] - f[m]) / (static_cast<double>(k) * binom(k - 1, s));
  }
  return phi;
}

double mci(const DiscreteDataset& d, Modality i) {
  const auto f = all_utilities(d);
  double best = -1e300;
  for (std::uint64_t m = 0; m < f.size(); ++m)
    if (!(m >> i & 1u)) best = std::max(best, f[m | (1ull << i)] - f[m]);
  return best;
}

double optimum(const DiscreteDataset& d, std::size_t q) {
  double best = -1e300;
  for (std::uint64_t m = 1; m < (1ull << d.n_modalities()); ++m)
    if (static_cast<std::size_t>(__builtin_popcountll(m)) == q)
      best = std::max(best, mi(d, ModalitySubset::from_mask(m)));
  return best;
}

namespace {
template <class F>
double max_over_pairs(const DiscreteDataset& d, std::size_t max_size, F f) {
  const std::uint64_t full = 1ull << d.n_modalities();
  double best = 0.0;
  for (std::uint64_t a = 1; a < full; ++a) {
    if (static_cast<std::size_t>(__builtin_popcountll(a)) > max_size) continue;
    for (std::uint64_t b = a + 1; b < full; ++b) {
      if ((a & b) || static_cast<std::size_t>(__builtin_popcountll(b)) > max_size) continue;
      best = std::max(best, f(ModalitySubset::from_mask(a), ModalitySubset::from_mask(b)));
    }
  }
  return best;
}
}  // namespace

double epsilon_conditional(const DiscreteDataset& d, std::size_t m) {
  return max_over_pairs(d, m, [&](const auto& a, const auto& b) { return cmi(d, a, b); });
}

double epsilon_marginal(const DiscreteDataset& d, std::size_t m) {
  return max_over_pairs(d, m, [&](const auto& a, const auto& b) { return marginal_mi(d, a, b); });
}

}  // namespace ref
}  // namespace fx
