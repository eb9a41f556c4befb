#include "ltlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ltlab/errors.hpp"
#include "ltlab/schema_embed.hpp"

namespace ltlab::cli {

namespace {

bool type_matches(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "null") return v.is_null();
  return false;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config " + (where.empty() ? std::string("/") : where) + ": " + what);
}

void validate_at(const json& v, const json& s, const std::string& where) {
  if (s.contains("type")) {
    const auto& t = s["type"];
    bool ok = false;
    if (t.is_string()) ok = type_matches(v, t.get<std::string>());
    else
      for (const auto& alt : t) ok = ok || type_matches(v, alt.get<std::string>());
    if (!ok) fail(where, "expected type " + t.dump());
  }
  if (s.contains("enum")) {
    bool ok = false;
    for (const auto& e : s["enum"]) ok = ok || e == v;
    if (!ok) fail(where, "value " + v.dump() + " not in " + s["enum"].dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s["minimum"].get<double>()) fail(where, "below minimum " + s["minimum"].dump());
    if (s.contains("maximum") && x > s["maximum"].get<double>()) fail(where, "above maximum " + s["maximum"].dump());
    if (s.contains("exclusiveMinimum") && !(x > s["exclusiveMinimum"].get<double>()))
      fail(where, "must exceed " + s["exclusiveMinimum"].dump());
  }
  if (v.is_object()) {
    const json props = s.value("properties", json::object());
    if (s.contains("required"))
      for (const auto& r : s["required"])
        if (!v.contains(r.get<std::string>())) fail(where, "missing required field '" + r.get<std::string>() + "'");
    for (const auto& [key, child] : v.items()) {
      const std::string path = where + "/" + key;
      if (props.contains(key)) {
        validate_at(child, props[key], path);
      } else if (s.contains("additionalProperties")) {
        const auto& ap = s["additionalProperties"];
        if (ap.is_boolean() && !ap.get<bool>()) fail(path, "unknown field");
        if (ap.is_object()) validate_at(child, ap, path);
      }
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) fail(where, "too few items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) fail(where, "too many items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) validate_at(v[i], s["items"], where + "/" + std::to_string(i));
  }
}

boxsim::Index to_index(const json& arr, int d, const std::string& what) {
  if (static_cast<int>(arr.size()) != d) throw ConfigError(what + " needs exactly d = " + std::to_string(d) + " components");
  boxsim::Index n{0, 0, 0};
  for (int i = 0; i < d; ++i) n[i] = arr[i].get<int>();
  return n;
}

}  // namespace

const json& config_schema() {
  static const json schema = json::parse(kConfigSchemaText);
  return schema;
}

void validate_schema(const json& doc, const json& schema) { validate_at(doc, schema, ""); }

ExperimentConfig parse_config(const json& doc) {
  validate_schema(doc, config_schema());
  ExperimentConfig c;
  c.raw = doc;
  const auto& ph = doc["physics"];
  c.d = ph["d"].get<int>();
  c.q = ph.value("q", 1);
  c.mu = ph["mu"].get<double>();
  if (ph.contains("T")) c.T = ph["T"].get<double>();
  if (doc.contains("box")) {
    c.L = doc["box"]["L"].get<double>();
    c.n_max = doc["box"].value("n_max", 0);
  }
  if (doc.contains("potential")) c.potential_spec = doc["potential"];
  if (doc.contains("sweep")) {
    const auto& s = doc["sweep"];
    c.sweep_kind = s.value("kind", "");
    if (s.contains("levels")) c.levels = s["levels"].get<std::vector<double>>();
    c.count = s.value("count", c.count);
    c.w0 = s.value("w0", c.w0);
    c.points_per_width = s.value("points_per_width", c.points_per_width);
    if (s.contains("omega_lo")) c.omega_lo = s["omega_lo"].get<std::vector<double>>();
    if (s.contains("omega_width")) c.omega_width = s["omega_width"].get<std::vector<double>>();
    c.e = s.value("e", c.e);
    c.margin = s.value("margin", c.margin);
  }
  if (doc.contains("output")) {
    c.density_csv = doc["output"].value("density_csv", false);
    c.plot = doc["output"].value("plot", false);
  }
  c.seed = doc.value("seed", std::uint64_t{0});
  // Validates the (d, q, mu) triple early.
  (void)c.params();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

boxsim::FourierPotential ExperimentConfig::potential(double L) const {
  boxsim::FourierPotential V(d, L);
  if (potential_spec.contains("family")) {
    const auto& f = potential_spec["family"];
    const std::string name = f["name"].get<std::string>();
    const double a = f.value("a", 1.0);
    if (name == "cosine") {
      if (!f.contains("m")) throw ConfigError("cosine family needs 'm'");
      V = boxsim::cosine_mode(d, L, to_index(f["m"], d, "cosine m"), a);
    } else if (name == "gaussian-bump") {
      if (!f.contains("sigma")) throw ConfigError("gaussian-bump family needs 'sigma'");
      V = boxsim::gaussian_bump(d, L, a, f["sigma"].get<double>());
    } else {
      if (!f.contains("width")) throw ConfigError("peierls-packet family needs 'width'");
      const double k0 = f.value("center", 2.0 * std::sqrt(mu));
      V = boxsim::peierls_packet(d, L, a, k0, f["width"].get<double>());
    }
    if (f.value("zero_mean", false)) V.set_mode({0, 0, 0}, 0.0);
  }
  if (potential_spec.contains("modes"))
    for (const auto& m : potential_spec["modes"])
      V.set_mode(to_index(m["n"], d, "mode n"), {m["re"].get<double>(), m.value("im", 0.0)});
  return V;
}

std::pair<double, double> ExperimentConfig::gaussian_parameters() const {
  if (!potential_spec.contains("family") || potential_spec["family"]["name"] != "gaussian-bump")
    throw ConfigError("this sweep needs potential.family = gaussian-bump");
  const auto& f = potential_spec["family"];
  if (!f.contains("sigma")) throw ConfigError("gaussian-bump family needs 'sigma'");
  return {f.value("a", 1.0), f["sigma"].get<double>()};
}

json potential_to_json(const boxsim::FourierPotential& V) {
  json out = json::array();
  for (const auto& [n, c] : V.coeffs()) {
    const boxsim::Index neg{-n[0], -n[1], -n[2]};
    if (neg < n) continue;  // keep one of each Hermitian pair
    json idx = json::array();
    for (int i = 0; i < V.d(); ++i) idx.push_back(n[i]);
    out.push_back({{"n", idx}, {"re", c.real()}, {"im", c.imag()}});
  }
  return out;
}

}  // namespace ltlab::cli
