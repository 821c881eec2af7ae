#pragma once

#include <json.hpp>

#include "harmap/functionals.hpp"

namespace harmap::detail {

nlohmann::ordered_json to_json(const VerificationReport& report);
nlohmann::ordered_json number_or_inf(double x);

}  // namespace harmap::detail
