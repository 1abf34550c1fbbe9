#include "json_emit.hpp"

#include <cmath>
#include <cstdio>

namespace finsler4::cli {

namespace {

using json = nlohmann::ordered_json;

void put_string(std::string& out, const std::string& s) {
  out += json(s).dump();
}

void put_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  std::string_view t(buf);
  if (t.find_first_of(".eEn") == std::string_view::npos) out += ".0";
}

void emit(std::string& out, const json& v, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        put_string(out, key);
        out += ": ";
        emit(out, item, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      bool scalars = true;
      for (const auto& item : v) scalars = scalars && item.is_primitive();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          emit(out, v[i], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(out, v[i], depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: put_number(out, v.get<double>()); return;
    case json::value_t::string: put_string(out, v.get<std::string>()); return;
    default: out += v.dump(); return;
  }
}

}  // namespace

std::string emit_json(const json& value) {
  std::string out;
  emit(out, value, 0);
  out += "\n";
  return out;
}

}  // namespace finsler4::cli
