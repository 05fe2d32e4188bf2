#include "modsel/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "modsel/errors.hpp"
#include "modsel/random.hpp"

namespace modsel {

std::string kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::naive_bayes: return "naive_bayes";
    case GeneratorKind::correlated: return "correlated";
    case GeneratorKind::patch_grid: return "patch_grid";
  }
  return "?";
}

GeneratorKind parse_kind(const std::string& text) {
  if (text == "naive_bayes") return GeneratorKind::naive_bayes;
  if (text == "correlated") return GeneratorKind::correlated;
  if (text == "patch_grid") return GeneratorKind::patch_grid;
  throw InvalidArgument("unknown generator kind '" + text + "'");
}

std::vector<std::uint32_t> GeneratorSpec::resolved_alphabets() const {
  if (alphabets.empty()) return std::vector<std::uint32_t>(k, label_alphabet);
  return alphabets;
}

void GeneratorSpec::validate() const {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (k > 4096) throw InvalidArgument("k must be at most 4096");
  if (label_alphabet < 2) throw InvalidArgument("label_alphabet must be at least 2");
  if (!alphabets.empty() && alphabets.size() != k)
    throw InvalidArgument("alphabets has " + std::to_string(alphabets.size()) +
                          " entries, expected k = " + std::to_string(k));
  for (auto a : alphabets)
    if (a < 1) throw InvalidArgument("alphabet sizes must be at least 1");
  if (!noise.empty() && noise.size() != k)
    throw InvalidArgument("noise has " + std::to_string(noise.size()) + " entries, expected k");
  for (double e : noise)
    if (!(e >= 0.0 && e <= 1.0)) throw InvalidArgument("noise values must lie in [0, 1]");
  if (!(correlation_knob >= 0.0 && correlation_knob <= 1.0))
    throw InvalidArgument("correlation_knob must lie in [0, 1]");
  if (copy_noise && !(*copy_noise >= 0.0 && *copy_noise <= 1.0))
    throw InvalidArgument("copy_noise must lie in [0, 1]");
  if (n_samples == 0) {
    std::uint64_t support = label_alphabet;
    for (auto a : resolved_alphabets()) {
      support *= a;
      if (support > kPopulationBudget)
        throw BudgetExceeded("population support exceeds " + std::to_string(kPopulationBudget) +
                             " cells; set n_samples for sample mode");
    }
  }
}

GeneratorSpec GeneratorSpec::from_json(const ordered_json& j) {
  if (!j.is_object()) throw InvalidArgument("generator spec must be a JSON object");
  static const char* known[] = {"kind",  "k",          "alphabets",  "label_alphabet",
                                "noise", "correlation_knob", "copy_noise", "n_samples",
                                "seed"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* s) { return it.key() == s; }) == std::end(known))
      throw InvalidArgument("unknown generator field '" + it.key() + "'");
  GeneratorSpec s;
  try {
    s.kind = parse_kind(j.at("kind").get<std::string>());
    s.k = j.at("k").get<std::size_t>();
    if (j.contains("alphabets")) {
      if (j["alphabets"].is_number())
        s.alphabets.assign(s.k, j["alphabets"].get<std::uint32_t>());
      else
        s.alphabets = j["alphabets"].get<std::vector<std::uint32_t>>();
    }
    if (j.contains("label_alphabet")) s.label_alphabet = j["label_alphabet"].get<std::uint32_t>();
    if (j.contains("noise")) {
      if (j["noise"].is_number())
        s.noise.assign(s.k, j["noise"].get<double>());
      else
        s.noise = j["noise"].get<std::vector<double>>();
    }
    if (j.contains("correlation_knob")) s.correlation_knob = j["correlation_knob"].get<double>();
    if (j.contains("copy_noise")) s.copy_noise = j["copy_noise"].get<double>();
    if (j.contains("n_samples")) s.n_samples = j["n_samples"].get<std::uint64_t>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad generator spec: ") + e.what());
  }
  s.validate();
  return s;
}

ordered_json GeneratorSpec::to_json() const {
  ordered_json j;
  j["kind"] = kind_name(kind);
  j["k"] = k;
  j["alphabets"] = resolved_alphabets();
  j["label_alphabet"] = label_alphabet;
  j["noise"] = noise;
  j["correlation_knob"] = correlation_knob;
  if (copy_noise) j["copy_noise"] = *copy_noise;
  j["n_samples"] = n_samples;
  j["seed"] = seed;
  return j;
}

namespace {

std::vector<double> grid_radii(std::size_t k) {
  const auto w = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k))));
  const std::size_t rows = (k + w - 1) / w;
  const double cr = (static_cast<double>(rows) - 1.0) / 2.0;
  const double cc = (static_cast<double>(w) - 1.0) / 2.0;
  std::vector<double> r(k);
  double max_r = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dr = static_cast<double>(i / w) - cr;
    const double dc = static_cast<double>(i % w) - cc;
    r[i] = std::sqrt(dr * dr + dc * dc);
    max_r = std::max(max_r, r[i]);
  }
  if (max_r > 0.0)
    for (auto& x : r) x /= max_r;
  return r;
}

constexpr double kInnerRadius = 0.75;

}  // namespace

ChannelNetwork build_network(const GeneratorSpec& spec) {
  spec.validate();
  ChannelNetwork net;
  net.label_alphabet = spec.label_alphabet;
  net.alphabets = spec.resolved_alphabets();
  const std::size_t k = spec.k;
  net.modalities.resize(k);

  std::vector<double> eta = spec.noise;
  if (spec.kind == GeneratorKind::patch_grid) {
    const auto r = grid_radii(k);
    net.latent = ChannelNode{-1, spec.copy_noise.value_or(0.05)};
    for (std::size_t i = 0; i < k; ++i) {
      net.modalities[i].source = r[i] < kInnerRadius ? -2 : -1;
      net.modalities[i].noise = eta.empty() ? 0.5 * r[i] * r[i] : eta[i];
    }
    return net;
  }

  if (eta.empty()) {
    Rng rng(spec.seed);
    eta.resize(k);
    for (auto& e : eta) e = 0.05 + 0.4 * uniform01(rng);
  }
  for (std::size_t i = 0; i < k; ++i) net.modalities[i] = {-1, eta[i]};
  if (spec.kind == GeneratorKind::correlated) {
    const auto rewired =
        static_cast<std::size_t>(std::lround(spec.correlation_knob * static_cast<double>(k - 1)));
    // Rewiring from the back keeps the copy sets nested as the knob grows.
    for (std::size_t j = k - rewired; j < k; ++j)
      net.modalities[j] = {0, spec.copy_noise.value_or(0.0)};
  }
  return net;
}

double channel_probability(std::uint32_t source_value, std::uint32_t value, std::uint32_t alphabet,
                           double noise) {
  if (alphabet == 1) return 1.0;
  const std::uint32_t kept = source_value % alphabet;
  return value == kept ? 1.0 - noise : noise / static_cast<double>(alphabet - 1);
}

namespace {

std::uint32_t sample_channel(Rng& rng, std::uint32_t source_value, std::uint32_t alphabet,
                             double noise) {
  if (alphabet == 1) return 0;
  const std::uint32_t kept = source_value % alphabet;
  if (uniform01(rng) >= noise) return kept;
  auto v = static_cast<std::uint32_t>(uniform_below(rng, alphabet - 1));
  return v >= kept ? v + 1 : v;
}

std::uint32_t source_value(int source, std::uint32_t y, std::uint32_t z,
                           const std::vector<std::uint32_t>& x) {
  if (source == -1) return y;
  if (source == -2) return z;
  return x[static_cast<std::size_t>(source)];
}

struct PopulationBuilder {
  const ChannelNetwork& net;
  std::vector<double>& mass;  // index: ((x_0 * a_1 + x_1) ... ) * L + y
  std::vector<std::uint32_t> x;

  void visit(std::size_t i, std::uint32_t y, std::uint32_t z, double p, std::uint64_t index) {
    if (i == net.modalities.size()) {
      mass[index * net.label_alphabet + y] += p;
      return;
    }
    const auto& node = net.modalities[i];
    const std::uint32_t a = net.alphabets[i];
    const std::uint32_t s = source_value(node.source, y, z, x);
    for (std::uint32_t v = 0; v < a; ++v) {
      const double pv = channel_probability(s, v, a, node.noise);
      if (pv <= 0.0) continue;
      x[i] = v;
      visit(i + 1, y, z, p * pv, index * a + v);
    }
  }
};

}  // namespace

DiscreteDataset population_of(const ChannelNetwork& net) {
  const std::size_t k = net.modalities.size();
  const std::uint32_t L = net.label_alphabet;
  std::uint64_t support = L;
  for (auto a : net.alphabets) {
    support *= a;
    if (support > kPopulationBudget) throw BudgetExceeded("population support too large");
  }
  std::vector<double> mass(support, 0.0);
  PopulationBuilder builder{net, mass, std::vector<std::uint32_t>(k, 0)};
  const double py = 1.0 / static_cast<double>(L);
  for (std::uint32_t y = 0; y < L; ++y) {
    if (net.latent) {
      for (std::uint32_t z = 0; z < L; ++z) {
        const double pz = channel_probability(y, z, L, net.latent->noise);
        if (pz > 0.0) builder.visit(0, y, z, py * pz, 0);
      }
    } else {
      builder.visit(0, y, 0, py, 0);
    }
  }

  std::vector<std::uint32_t> values;
  std::vector<std::uint32_t> labels;
  std::vector<double> weights;
  std::vector<std::uint32_t> row(k);
  for (std::uint64_t idx = 0; idx < support; ++idx) {
    if (mass[idx] <= 0.0) continue;
    std::uint64_t rest = idx / L;
    for (std::size_t i = k; i-- > 0;) {
      row[i] = static_cast<std::uint32_t>(rest % net.alphabets[i]);
      rest /= net.alphabets[i];
    }
    values.insert(values.end(), row.begin(), row.end());
    labels.push_back(static_cast<std::uint32_t>(idx % L));
    weights.push_back(mass[idx]);
  }
  DiscreteDataset data(net.alphabets, L, values, std::move(labels), std::move(weights));
  data.set_population(true);
  return data;
}

DiscreteDataset generate(const GeneratorSpec& spec) {
  const ChannelNetwork net = build_network(spec);
  if (spec.n_samples == 0) return population_of(net);

  const std::size_t k = spec.k;
  // Stream distinct from the one that draws default noise levels.
  Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::uint32_t> values;
  values.reserve(spec.n_samples * k);
  std::vector<std::uint32_t> labels(spec.n_samples);
  std::vector<std::uint32_t> x(k);
  for (std::uint64_t s = 0; s < spec.n_samples; ++s) {
    const auto y = static_cast<std::uint32_t>(uniform_below(rng, net.label_alphabet));
    std::uint32_t z = 0;
    if (net.latent) z = sample_channel(rng, y, net.label_alphabet, net.latent->noise);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& node = net.modalities[i];
      x[i] = sample_channel(rng, source_value(node.source, y, z, x), net.alphabets[i], node.noise);
    }
    values.insert(values.end(), x.begin(), x.end());
    labels[s] = y;
  }
  return DiscreteDataset(net.alphabets, net.label_alphabet, values, std::move(labels));
}

}  // namespace modsel
