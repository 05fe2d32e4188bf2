#pragma once

#include <json.hpp>

namespace modsel {
using ordered_json = nlohmann::ordered_json;
}
