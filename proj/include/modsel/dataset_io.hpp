#pragma once

// JSON-lines dataset files. The first line is a header
//   {"format":"modsel-jsonl","version":1,"k":..,"alphabets":[..],
//    "label_alphabet":..,"n":..,"weighted":..,"population":..}
// followed by one row per line: {"x":[..],"y":..} plus "w" when weighted.

#include <iosfwd>
#include <string>

#include "modsel/dataset.hpp"

namespace modsel {

void write_dataset(std::ostream& out, const DiscreteDataset& data);
// Throws DataError on malformed input.
DiscreteDataset read_dataset(std::istream& in);

void save_dataset(const std::string& path, const DiscreteDataset& data);
DiscreteDataset load_dataset(const std::string& path);

}  // namespace modsel
