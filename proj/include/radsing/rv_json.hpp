#pragma once
#include <json.hpp>

#include "radsing/rv.hpp"

namespace radsing::rv {

nlohmann::json to_json(const SlowlyVarying& L);
SlowlyVarying from_json_value(const nlohmann::json& j);

}  // namespace radsing::rv
