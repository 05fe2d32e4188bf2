#include "modsel/csv_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/tokenizer.hpp>

#include "modsel/errors.hpp"

namespace modsel {

Binning Binning::parse(const std::string& text) {
  if (text == "none") return none();
  const std::string prefix = "equal_frequency:";
  if (text.rfind(prefix, 0) == 0) {
    std::uint32_t b = 0;
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, b);
    if (ec == std::errc() && ptr == last && b >= 2) return equal_frequency(b);
  }
  throw InvalidArgument("binning must be 'none' or 'equal_frequency:<B>' with B >= 2, got '" +
                        text + "'");
}

namespace {

using Table = std::vector<std::vector<std::string>>;  // rows of cells

std::vector<std::string> split_line(const std::string& line) {
  using Sep = boost::escaped_list_separator<char>;
  std::vector<std::string> cells;
  try {
    boost::tokenizer<Sep> tok(line, Sep('\\', ',', '"'));
    cells.assign(tok.begin(), tok.end());
  } catch (const boost::escaped_list_error& e) {
    throw DataError(std::string("malformed CSV line: ") + e.what());
  }
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t\r");
    c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
  }
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

struct Encoded {
  std::vector<std::uint32_t> ids;
  std::uint32_t alphabet = 0;
  ordered_json mapping;
};

Encoded encode_categorical(const std::vector<std::string>& cells) {
  Encoded e;
  std::unordered_map<std::string, std::uint32_t> dict;
  std::vector<std::string> values;
  e.ids.reserve(cells.size());
  for (const auto& c : cells) {
    auto [it, inserted] = dict.try_emplace(c, static_cast<std::uint32_t>(values.size()));
    if (inserted) values.push_back(c);
    e.ids.push_back(it->second);
  }
  e.alphabet = static_cast<std::uint32_t>(values.size());
  e.mapping["type"] = "categorical";
  e.mapping["values"] = values;
  return e;
}

Encoded encode_binned(const std::vector<double>& x, std::uint32_t bins) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<std::uint32_t> raw(n);
  std::uint32_t run_bin = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto bin = static_cast<std::uint32_t>((r * bins) / n);
    if (r == 0 || x[order[r]] != x[order[r - 1]]) run_bin = bin;
    raw[order[r]] = run_bin;
  }
  // Ties can leave bins empty; renumber the occupied ones densely.
  std::vector<std::int64_t> dense(bins, -1);
  std::vector<std::pair<double, double>> edges;
  std::uint32_t next = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto b = raw[order[r]];
    if (dense[b] < 0) {
      dense[b] = next++;
      edges.emplace_back(x[order[r]], x[order[r]]);
    }
    edges[static_cast<std::size_t>(dense[b])].second = x[order[r]];
  }
  Encoded e;
  e.ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.ids[i] = static_cast<std::uint32_t>(dense[raw[i]]);
  e.alphabet = next;
  e.mapping["type"] = "binned";
  ordered_json b = ordered_json::array();
  for (auto [lo, hi] : edges) b.push_back({lo, hi});
  e.mapping["bins"] = std::move(b);
  return e;
}

Encoded encode_column(const std::string& name, const std::vector<std::string>& cells,
                      const Binning& binning) {
  std::vector<double> numbers(cells.size());
  bool numeric = true;
  bool integral = true;
  for (std::size_t i = 0; i < cells.size() && numeric; ++i) {
    numeric = parse_number(cells[i], numbers[i]);
    integral = integral && numeric && numbers[i] == std::floor(numbers[i]);
  }
  Encoded e;
  if (!numeric) {
    e = encode_categorical(cells);
  } else {
    const std::set<double> distinct(numbers.begin(), numbers.end());
    if (binning.kind == Binning::Kind::equal_frequency && distinct.size() > binning.bins) {
      e = encode_binned(numbers, binning.bins);
    } else if (binning.kind == Binning::Kind::none && !integral) {
      throw DataError("column '" + name + "' is continuous; enable binning to use it");
    } else {
      e = encode_categorical(cells);
    }
  }
  ordered_json tagged;
  tagged["column"] = name;
  for (auto& [key, v] : e.mapping.items()) tagged[key] = v;
  e.mapping = std::move(tagged);
  return e;
}

}  // namespace

IngestResult ingest_csv_text(const std::string& text, const IngestSpec& spec) {
  if (spec.binning.kind == Binning::Kind::equal_frequency && spec.binning.bins < 2)
    throw InvalidArgument("equal-frequency binning needs at least 2 bins");
  if (spec.label_column.empty()) throw InvalidArgument("label column is required");
  if (!spec.modality_columns.empty() && !spec.groups.empty())
    throw InvalidArgument("give modality columns or groups, not both");

  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) header = split_line(line);
  if (header.empty()) throw DataError("CSV file is empty");
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (!index.emplace(header[c], c).second)
      throw DataError("duplicate CSV column '" + header[c] + "'");

  Table rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError("CSV row " + std::to_string(rows.size() + 2) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw DataError("CSV file has no data rows");

  auto column_index = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw DataError("missing CSV column '" + name + "'");
    return it->second;
  };
  auto column_cells = [&](std::size_t c) {
    std::vector<std::string> cells(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) cells[r] = rows[r][c];
    return cells;
  };

  const std::size_t label_idx = column_index(spec.label_column);
  std::vector<std::vector<std::string>> groups = spec.groups;
  if (groups.empty()) {
    if (!spec.modality_columns.empty()) {
      for (const auto& c : spec.modality_columns) groups.push_back({c});
    } else {
      for (const auto& h : header)
        if (h != spec.label_column) groups.push_back({h});
    }
  }
  if (groups.empty()) throw DataError("no modality columns");
  std::set<std::string> seen{spec.label_column};
  for (const auto& g : groups) {
    if (g.empty()) throw InvalidArgument("empty column group");
    for (const auto& c : g)
      if (!seen.insert(c).second)
        throw InvalidArgument("column '" + c + "' is used twice (groups must be disjoint)");
  }

  const std::size_t n = rows.size();
  const std::size_t k = groups.size();
  std::vector<std::uint32_t> alphabets(k);
  std::vector<std::uint32_t> values(n * k);
  ordered_json modalities = ordered_json::array();
  for (std::size_t m = 0; m < k; ++m) {
    std::vector<Encoded> parts;
    for (const auto& c : groups[m]) parts.push_back(encode_column(c, column_cells(column_index(c)), spec.binning));
    ordered_json entry;
    entry["columns"] = groups[m];
    ordered_json cols = ordered_json::array();
    for (auto& p : parts) cols.push_back(p.mapping);
    entry["encodings"] = std::move(cols);
    if (parts.size() == 1) {
      alphabets[m] = parts[0].alphabet;
      for (std::size_t r = 0; r < n; ++r) values[r * k + m] = parts[0].ids[r];
    } else {
      std::map<std::vector<std::uint32_t>, std::uint32_t> dict;
      ordered_json tuples = ordered_json::array();
      std::vector<std::uint32_t> key(parts.size());
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t p = 0; p < parts.size(); ++p) key[p] = parts[p].ids[r];
        auto [it, inserted] = dict.try_emplace(key, static_cast<std::uint32_t>(dict.size()));
        if (inserted) tuples.push_back(key);
        values[r * k + m] = it->second;
      }
      alphabets[m] = static_cast<std::uint32_t>(dict.size());
      entry["tuples"] = std::move(tuples);
    }
    modalities.push_back(std::move(entry));
  }

  Encoded label = encode_categorical(column_cells(label_idx));
  const std::uint32_t label_alphabet = std::max<std::uint32_t>(2, label.alphabet);

  ordered_json mapping;
  mapping["source"] = spec.path;
  mapping["label"] = {{"column", spec.label_column}, {"values", label.mapping["values"]}};
  mapping["modalities"] = std::move(modalities);
  mapping["rows"] = n;
  return {DiscreteDataset(std::move(alphabets), label_alphabet, values, std::move(label.ids)),
          std::move(mapping)};
}

IngestResult ingest_csv(const IngestSpec& spec) {
  std::ifstream in(spec.path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV " + spec.path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_csv_text(buf.str(), spec);
}

}  // namespace modsel
