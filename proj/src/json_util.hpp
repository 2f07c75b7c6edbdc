#pragma once

// Internal helpers shared by the serialization and experiment writers; not
// part of the installed API.

#include <json.hpp>

#include "vantage/environments.hpp"

namespace vantage::detail {

using ojson = nlohmann::ordered_json;

inline ojson oval_to_json(const Oval& o) {
    return ojson{{"center_row", o.center_row},
                 {"center_col", o.center_col},
                 {"semi_row", o.semi_row},
                 {"semi_col", o.semi_col}};
}

inline Oval oval_from_json(const ojson& j) {
    Oval o;
    o.center_row = j.at("center_row").get<double>();
    o.center_col = j.at("center_col").get<double>();
    o.semi_row = j.at("semi_row").get<double>();
    o.semi_col = j.at("semi_col").get<double>();
    return o;
}

}  // namespace vantage::detail
