#include "config.hpp"

#include <fstream>
#include <sstream>

#include "kramers/catalog.hpp"
#include "kramers/errors.hpp"

namespace kramers {

namespace {

using nlohmann::json;

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) raise(ErrorKind::ConfigError, where + " is missing '" + key + "'");
  if (!j[key].is_number()) raise(ErrorKind::ConfigError, where + "." + key + " must be a number");
  return j[key].get<double>();
}

DomainGeometry parse_domain(const json& d) {
  if (!d.is_object()) raise(ErrorKind::ConfigError, "domain must be an object");
  if (!d.contains("type") || !d["type"].is_string()) raise(ErrorKind::ConfigError, "domain.type must be a string");
  std::string type = d["type"];
  if (type == "interval") return DomainGeometry::interval(number(d, "a", "domain"), number(d, "b", "domain"));
  if (type == "ball") {
    if (!d.contains("center") || !d["center"].is_array() || d["center"].size() != 2 || !d["center"][0].is_number() ||
        !d["center"][1].is_number())
      raise(ErrorKind::ConfigError, "domain.center must be a pair of numbers");
    return DomainGeometry::ball({d["center"][0].get<double>(), d["center"][1].get<double>()},
                                number(d, "radius", "domain"));
  }
  raise(ErrorKind::ConfigError, "domain.type must be \"interval\" or \"ball\"");
}

std::map<std::string, double> parse_params(const json& p) {
  std::map<std::string, double> out;
  if (p.is_null()) return out;
  if (!p.is_object()) raise(ErrorKind::ConfigError, "potential.params must be an object");
  for (auto it = p.begin(); it != p.end(); ++it) {
    if (!it.value().is_number()) raise(ErrorKind::ConfigError, "parameter '" + it.key() + "' must be a number");
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) raise(ErrorKind::ConfigError, "config must be a JSON object");
  if (!j.contains("potential") || !j["potential"].is_object()) raise(ErrorKind::ConfigError, "config needs a potential object");
  const json& p = j["potential"];
  RunConfig c;
  c.source = j;
  auto params = parse_params(p.contains("params") ? p["params"] : json());
  bool has_expr = p.contains("expr"), has_cat = p.contains("catalog");
  if (has_expr == has_cat) raise(ErrorKind::ConfigError, "potential needs exactly one of 'expr' and 'catalog'");
  if (has_cat) {
    if (!p["catalog"].is_string()) raise(ErrorKind::ConfigError, "potential.catalog must be a string");
    const std::string name = p["catalog"];
    c.spec = catalog_spec(name, params);
    if (j.contains("domain")) {
      c.geom = parse_domain(j["domain"]);
    } else {
      c.geom = catalog_entry(name).domain;
    }
    if (c.geom.dim() != c.spec.dimension)
      raise(ErrorKind::ConfigError, "catalog entry '" + name + "' is " + std::to_string(c.spec.dimension) +
                                        "D but the domain is " + std::to_string(c.geom.dim()) + "D");
  } else {
    if (!p["expr"].is_string()) raise(ErrorKind::ConfigError, "potential.expr must be a string");
    if (!j.contains("domain")) raise(ErrorKind::ConfigError, "expression potentials need a domain");
    c.geom = parse_domain(j["domain"]);
    c.spec = parse_potential(p["expr"].get<std::string>(), params);
    if (c.spec.dimension == 2 && c.geom.dim() == 1) raise(ErrorKind::ConfigError, "expression uses y on an interval");
    c.spec.dimension = c.geom.dim();
  }
  if (p.contains("offset")) c.spec.offset = number(p, "offset", "potential");
  if (j.contains("defaults")) {
    const json& d = j["defaults"];
    if (!d.is_object()) raise(ErrorKind::ConfigError, "defaults must be an object");
    if (d.contains("resolution")) c.resolution = static_cast<int>(number(d, "resolution", "defaults"));
    if (d.contains("grid")) c.grid = static_cast<int>(number(d, "grid", "defaults"));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ConfigError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json domain_json(const DomainGeometry& g) {
  if (g.dim() == 1) return {{"type", "interval"}, {"a", g.a()}, {"b", g.b()}};
  return {{"type", "ball"}, {"center", {g.center()[0], g.center()[1]}}, {"radius", g.radius()}};
}

}  // namespace kramers
