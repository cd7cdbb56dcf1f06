#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qboson::cli {
namespace {

using nlohmann::json;

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double finite_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

// [re, im] or a bare real number.
cplx complex_value(const json& v, const std::string& field) {
  if (v.is_number()) return {finite_number(v, field), 0.0};
  if (!v.is_array() || v.size() != 2)
    throw ConfigError(field, "expected a complex number as [re, im]");
  return {finite_number(v[0], field + "[0]"), finite_number(v[1], field + "[1]")};
}

std::size_t positive_count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ConfigError(field, "expected a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
    if (!ok) throw ConfigError(prefix + key, "unknown field");
  }
}

}  // namespace

double SweepAxis::value(long long k) const {
  if (steps <= 1) return start;
  return start + (stop - start) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::OneMode: return "one_mode";
    case ModelKind::TwoMode: return "two_mode";
    case ModelKind::Custom: return "custom";
  }
  return "?";
}

std::vector<std::string> sweep_parameters(ModelKind k) {
  switch (k) {
    case ModelKind::OneMode:
      return {"alpha", "alpha_re", "alpha_im", "beta", "beta_re", "beta_im"};
    case ModelKind::TwoMode:
      return {"alpha", "alpha_re", "alpha_im", "beta", "beta_re", "beta_im", "gamma"};
    case ModelKind::Custom: return {};
  }
  return {};
}

std::size_t ModelConfig::modes() const {
  switch (kind) {
    case ModelKind::OneMode: return 1;
    case ModelKind::TwoMode: return 2;
    case ModelKind::Custom: return static_cast<std::size_t>(G.rows()) / 2;
  }
  return 0;
}

QuadraticForm ModelConfig::form() const {
  switch (kind) {
    case ModelKind::OneMode: return swanson::one_mode(one_mode_params());
    case ModelKind::TwoMode: return swanson::two_mode(two_mode_params());
    case ModelKind::Custom: return QuadraticForm(BosonBasis(modes()), G, offset);
  }
  throw ConfigError("model", "unknown kind");
}

ModelConfig ModelConfig::with(const std::string& parameter, double v) const {
  const auto names = sweep_parameters(kind);
  if (std::find(names.begin(), names.end(), parameter) == names.end())
    throw ConfigError("sweep.parameter", "'" + parameter + "' is not a parameter of model " +
                                             to_string(kind));
  ModelConfig c = *this;
  if (parameter == "alpha") c.alpha = {v, 0.0};
  else if (parameter == "alpha_re") c.alpha.real(v);
  else if (parameter == "alpha_im") c.alpha.imag(v);
  else if (parameter == "beta") c.beta = {v, 0.0};
  else if (parameter == "beta_re") c.beta.real(v);
  else if (parameter == "beta_im") c.beta.imag(v);
  else if (parameter == "gamma") c.gamma = v;
  return c;
}

ModelConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON");
  }
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  reject_unknown(j, {"model", "alpha", "beta", "gamma", "G", "offset", "oracle", "sweep", "s11"}, "");

  ModelConfig c;
  if (!j.contains("model") || !j["model"].is_string())
    throw ConfigError("model", "required; one of one_mode, two_mode, custom");
  const auto kind = j["model"].get<std::string>();
  if (kind == "one_mode") c.kind = ModelKind::OneMode;
  else if (kind == "two_mode") c.kind = ModelKind::TwoMode;
  else if (kind == "custom") c.kind = ModelKind::Custom;
  else throw ConfigError("model", "unknown model '" + kind + "'");

  if (c.kind == ModelKind::Custom) {
    for (const char* f : {"alpha", "beta", "gamma"})
      if (j.contains(f)) throw ConfigError(f, "not used by the custom model; give G instead");
    if (!j.contains("G")) throw ConfigError("G", "required for the custom model");
    const auto& g = j["G"];
    if (!g.is_array() || g.empty() || g.size() % 2 != 0)
      throw ConfigError("G", "expected a 2K x 2K array of rows");
    const auto n = static_cast<Eigen::Index>(g.size());
    c.G.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& row = g[static_cast<std::size_t>(r)];
      const std::string rf = "G[" + std::to_string(r) + "]";
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
        throw ConfigError(rf, "expected " + std::to_string(n) + " entries");
      for (Eigen::Index col = 0; col < n; ++col)
        c.G(r, col) = complex_value(row[static_cast<std::size_t>(col)],
                                    rf + "[" + std::to_string(col) + "]");
    }
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index col = 0; col < r; ++col)
        if (std::abs(c.G(r, col) - c.G(col, r)) > 1e-12)
          throw ConfigError("G", "not symmetric: G[" + std::to_string(r) + "][" +
                                     std::to_string(col) + "] differs from its transpose");
    if (j.contains("offset")) c.offset = complex_value(j["offset"], "offset");
  } else {
    for (const char* f : {"G", "offset"})
      if (j.contains(f)) throw ConfigError(f, "only used by the custom model");
    if (j.contains("alpha")) c.alpha = complex_value(j["alpha"], "alpha");
    if (j.contains("beta")) c.beta = complex_value(j["beta"], "beta");
    if (j.contains("gamma")) {
      if (c.kind != ModelKind::TwoMode) throw ConfigError("gamma", "only used by two_mode");
      c.gamma = finite_number(j["gamma"], "gamma");
    }
  }

  if (j.contains("oracle")) {
    const auto& o = j["oracle"];
    if (!o.is_object()) throw ConfigError("oracle", "expected an object");
    reject_unknown(o, {"nmax", "levels", "tol"}, "oracle.");
    if (o.contains("nmax")) c.oracle.nmax = positive_count(o["nmax"], "oracle.nmax");
    if (o.contains("levels")) c.oracle.levels = positive_count(o["levels"], "oracle.levels");
    if (o.contains("tol")) {
      c.oracle.tol = finite_number(o["tol"], "oracle.tol");
      if (!(*c.oracle.tol > 0.0)) throw ConfigError("oracle.tol", "must be positive");
    }
  }

  if (j.contains("sweep")) {
    auto s = j["sweep"];
    if (s.is_object()) s = json::array({s});
    if (!s.is_array() || s.empty() || s.size() > 2)
      throw ConfigError("sweep", "expected one or two axes");
    for (std::size_t a = 0; a < s.size(); ++a) {
      const std::string af = "sweep[" + std::to_string(a) + "]";
      const auto& ax = s[a];
      if (!ax.is_object()) throw ConfigError(af, "expected an object");
      reject_unknown(ax, {"parameter", "start", "stop", "steps"}, af + ".");
      for (const char* f : {"parameter", "start", "stop", "steps"})
        if (!ax.contains(f)) throw ConfigError(af + "." + f, "required");
      SweepAxis axis;
      if (!ax["parameter"].is_string()) throw ConfigError(af + ".parameter", "expected a string");
      axis.parameter = ax["parameter"].get<std::string>();
      const auto names = sweep_parameters(c.kind);
      if (std::find(names.begin(), names.end(), axis.parameter) == names.end())
        throw ConfigError(af + ".parameter",
                          "'" + axis.parameter + "' is not a parameter of model " + kind);
      axis.start = finite_number(ax["start"], af + ".start");
      axis.stop = finite_number(ax["stop"], af + ".stop");
      if (!ax["steps"].is_number_integer()) throw ConfigError(af + ".steps", "expected an integer");
      axis.steps = ax["steps"].get<long long>();
      if (axis.steps < 1) throw ConfigError(af + ".steps", "must be at least 1");
      c.sweep.push_back(axis);
    }
    if (c.sweep.size() == 2) {
      const auto& a = c.sweep[0].parameter;
      const auto& b = c.sweep[1].parameter;
      const auto stem = [](const std::string& n) { return n.substr(0, n.find('_')); };
      // "alpha" overwrites both parts, so it cannot share an axis pair with alpha_re/alpha_im
      if (a == b || (stem(a) == stem(b) && (a == stem(a) || b == stem(b))))
        throw ConfigError("sweep", "axes '" + a + "' and '" + b + "' set the same parameter");
    }
  }

  if (j.contains("s11")) c.s11 = finite_number(j["s11"], "s11");
  return c;
}

ModelConfig load_config(const std::string& path, std::string* raw) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (raw) *raw = text;
  return parse_config(text);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qboson::cli
