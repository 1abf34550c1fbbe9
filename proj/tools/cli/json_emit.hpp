#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace finsler4::cli {

/// Two-space indented text with a trailing newline. Floating-point values
/// are printed with 17 significant digits; NaN and infinities become null.
std::string emit_json(const nlohmann::ordered_json& value);

}  // namespace finsler4::cli
