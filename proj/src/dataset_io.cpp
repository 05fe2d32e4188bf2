#include "modsel/dataset_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "modsel/errors.hpp"
#include "modsel/vendor_json.hpp"

namespace modsel {

void write_dataset(std::ostream& out, const DiscreteDataset& data) {
  ordered_json header;
  header["format"] = "modsel-jsonl";
  header["version"] = 1;
  header["k"] = data.n_modalities();
  header["alphabets"] = std::vector<std::uint32_t>(data.alphabets().begin(), data.alphabets().end());
  header["label_alphabet"] = data.label_alphabet();
  header["n"] = data.n_samples();
  header["weighted"] = data.weighted();
  header["population"] = data.population();
  out << header.dump() << '\n';
  const std::size_t k = data.n_modalities();
  std::vector<std::uint32_t> x(k);
  for (std::size_t r = 0; r < data.n_samples(); ++r) {
    for (Modality m = 0; m < k; ++m) x[m] = data.value(r, m);
    ordered_json row;
    row["x"] = x;
    row["y"] = data.labels()[r];
    if (data.weighted()) row["w"] = data.weights()[r];
    out << row.dump() << '\n';
  }
}

DiscreteDataset read_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) -> DataError {
    return DataError("dataset line " + std::to_string(line_no) + ": " + what);
  };
  if (!next_line()) throw DataError("dataset is empty");
  try {
    const auto header = ordered_json::parse(line);
    if (header.value("format", "") != "modsel-jsonl") throw fail("not a modsel-jsonl header");
    if (header.value("version", 0) != 1) throw fail("unsupported version");
    const auto k = header.at("k").get<std::size_t>();
    auto alphabets = header.at("alphabets").get<std::vector<std::uint32_t>>();
    const auto label_alphabet = header.at("label_alphabet").get<std::uint32_t>();
    const auto n = header.at("n").get<std::size_t>();
    const bool weighted = header.value("weighted", false);
    if (alphabets.size() != k) throw fail("alphabets length differs from k");

    std::vector<std::uint32_t> values;
    values.reserve(n * k);
    std::vector<std::uint32_t> labels;
    labels.reserve(n);
    std::vector<double> weights;
    while (labels.size() < n) {
      if (!next_line())
        throw DataError("dataset ends after " + std::to_string(labels.size()) + " of " +
                        std::to_string(n) + " rows");
      const auto row = ordered_json::parse(line);
      const auto& x = row.at("x");
      if (!x.is_array() || x.size() != k) throw fail("row must hold k values");
      for (const auto& v : x) values.push_back(v.get<std::uint32_t>());
      labels.push_back(row.at("y").get<std::uint32_t>());
      if (weighted) weights.push_back(row.at("w").get<double>());
    }
    if (next_line()) throw fail("more rows than the header declares");
    DiscreteDataset data(std::move(alphabets), label_alphabet, values, std::move(labels),
                         std::move(weights));
    data.set_population(header.value("population", false));
    return data;
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("invalid dataset: ") + e.what());
  }
}

void save_dataset(const std::string& path, const DiscreteDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_dataset(out, data);
  if (!out) throw DataError("write failed for " + path);
}

DiscreteDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset " + path);
  return read_dataset(in);
}

}  // namespace modsel
