#pragma once

// Tabular CSV (with a header row) to a DiscreteDataset. Each modality is one
// column or a group of columns; a group's value is the tuple of its columns.

#include <cstdint>
#include <string>
#include <vector>

#include "modsel/dataset.hpp"
#include "modsel/vendor_json.hpp"

namespace modsel {

struct Binning {
  enum class Kind { none, equal_frequency };
  Kind kind = Kind::equal_frequency;
  std::uint32_t bins = 8;

  static Binning none() { return {Kind::none, 0}; }
  static Binning equal_frequency(std::uint32_t b) { return {Kind::equal_frequency, b}; }
  // "none" or "equal_frequency:<B>"
  static Binning parse(const std::string& text);
};

struct IngestSpec {
  std::string path;
  std::string label_column;
  // Either explicit columns (one modality each) or groups. Both empty: every
  // column except the label.
  std::vector<std::string> modality_columns;
  std::vector<std::vector<std::string>> groups;
  Binning binning;
};

struct IngestResult {
  DiscreteDataset data;
  // Value dictionaries and bin edges, enough to re-map new rows.
  ordered_json mapping;
};

// Categorical columns map to dense ids in order of first appearance. Numeric
// columns with more than B distinct values are cut into B equal-frequency
// bins; tied values share the bin of their first sorted position.
IngestResult ingest_csv(const IngestSpec& spec);
IngestResult ingest_csv_text(const std::string& text, const IngestSpec& spec);

}  // namespace modsel
