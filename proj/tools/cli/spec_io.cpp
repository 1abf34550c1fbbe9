#include "spec_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "finsler4/conformal.hpp"
#include "finsler4/error.hpp"

namespace finsler4::cli {

namespace {

using json = nlohmann::ordered_json;

class SchemaReader {
 public:
  explicit SchemaReader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& msg, std::string_view near = {}) const {
    std::size_t off = Error::npos;
    if (!near.empty()) {
      const std::string quoted = "\"" + std::string(near) + "\"";
      const auto pos = text_.find(quoted);
      if (pos != std::string_view::npos) off = pos;
    }
    throw Error(ErrorKind::SpecParseError, msg, off);
  }

  void only_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                 const std::string& where) const {
    if (!obj.is_object()) fail(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) fail("unknown field \"" + key + "\" in " + where, key);
    }
  }

  std::string expr_text(const json& v, const std::string& where, std::string_view near = {}) const {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      return buf;
    }
    fail(where + " must be a string or a number", near);
  }

  template <std::size_t N>
  std::array<std::string, N> expr_array(const json& v, const std::string& where,
                                        std::string_view near) const {
    if (!v.is_array() || v.size() != N) fail(where + " must be an array of " + std::to_string(N), near);
    std::array<std::string, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = expr_text(v[i], where, near);
    return out;
  }

  MetricSpec metric(const json& doc, const std::string& where) const {
    if (!doc.contains("family") || !doc["family"].is_string())
      fail(where + ": \"family\" must be a string", "family");
    const auto name = doc["family"].get<std::string>();
    const auto family = family_from_name(name);
    if (!family) fail("unknown family \"" + name + "\"", name);

    const json params = doc.contains("params") ? doc["params"] : json::object();
    if (*family == Family::Conformal) {
      only_keys(params, {"base"}, "params");
      if (!params.contains("base")) fail("conformal family requires params.base", "params");
      only_keys(params["base"], {"family", "params", "L"}, "params.base");
      if (!doc.contains("sigma")) throw Error(ErrorKind::MissingSigma, "conformal family requires sigma");
      return metric(params["base"], "params.base");
    }
    only_keys(params, {"g", "b"}, "params");
    MetricParams p;
    if (params.contains("g")) {
      const json& g = params["g"];
      if (!g.is_array() || g.size() != kDim) fail("params.g must be a 4x4 array", "g");
      std::array<std::array<std::string, kDim>, kDim> rows;
      for (int i = 0; i < kDim; ++i) rows[i] = expr_array<kDim>(g[i], "params.g row", "g");
      p.g = rows;
    }
    if (params.contains("b")) p.b = expr_array<kDim>(params["b"], "params.b", "b");
    if (doc.contains("L")) p.L = expr_text(doc["L"], "L", "L");
    return make_builtin_metric(*family, p);
  }

  DomainSpec domain(const json& d, DomainSpec base) const {
    only_keys(d, {"x_box", "y_cone"}, "domain");
    if (d.contains("x_box")) {
      const json& box = d["x_box"];
      if (!box.is_array() || box.size() != kDim) fail("domain.x_box must hold 4 intervals", "x_box");
      for (int i = 0; i < kDim; ++i) {
        const json& iv = box[i];
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
          fail("domain.x_box entries must be [lo, hi]", "x_box");
        base.x_box[i] = {iv[0].get<double>(), iv[1].get<double>()};
      }
    }
    if (d.contains("y_cone")) {
      if (!d["y_cone"].is_string()) fail("domain.y_cone must be a string", "y_cone");
      const auto name = d["y_cone"].get<std::string>();
      const auto cone = cone_from_name(name);
      if (!cone) fail("unknown y_cone \"" + name + "\"", name);
      base.y_cone = *cone;
    }
    return base;
  }

  std::uint64_t count(const json& doc, const char* key, std::int64_t min) const {
    const json& v = doc[key];
    if (!v.is_number_integer() || v.get<std::int64_t>() < min)
      fail(std::string("\"") + key + "\" must be an integer >= " + std::to_string(min), key);
    return v.get<std::uint64_t>();
  }

 private:
  std::string_view text_;
};

}  // namespace

LoadedSpec parse_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SpecParseError, e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  SchemaReader r(text);
  r.only_keys(doc, {"family", "params", "L", "sigma", "domain", "samples", "seed"}, "spec");

  LoadedSpec out;
  out.spec = r.metric(doc, "spec");
  if (doc.contains("domain")) out.spec = out.spec.with_domain(r.domain(doc["domain"], out.spec.domain()));
  if (doc.contains("sigma")) {
    out.spec = conformal_lift(out.spec, r.expr_text(doc["sigma"], "sigma", "sigma"));
    out.has_sigma = true;
  }
  if (doc.contains("samples")) out.plan.count = static_cast<int>(r.count(doc, "samples", 1));
  if (doc.contains("seed")) out.plan.seed = r.count(doc, "seed", 0);
  out.source = std::move(doc);
  return out;
}

LoadedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::SpecParseError, "cannot read spec file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

}  // namespace finsler4::cli
