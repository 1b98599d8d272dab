#include "dmv/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace dmv {
namespace {

struct Entry {
  std::string key, value;
  int line;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<Entry> parse_text(const std::string& text) {
  std::vector<Entry> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + s + "'", line);
    Entry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty()) throw ConfigError("missing key before '='", line);
    if (e.value.empty()) throw ConfigError("missing value for '" + e.key + "'", line);
    out.push_back(std::move(e));
  }
  return out;
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::vector<Entry>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else if (it->is_string()) {
      out.push_back({key, it->get<std::string>(), 0});
    } else if (it->is_number() || it->is_boolean()) {
      out.push_back({key, it->dump(), 0});
    } else {
      throw ConfigError("unsupported JSON value for '" + key + "'");
    }
  }
}

std::vector<Entry> parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("JSON config must be an object");
  std::vector<Entry> out;
  flatten(j, "", out);
  return out;
}

double to_double(const Entry& e) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("'" + e.key + "' expects a number, got '" + e.value + "'", e.line);
  return v;
}

long long to_int(const Entry& e) {
  long long v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("'" + e.key + "' expects an integer, got '" + e.value + "'", e.line);
  return v;
}

struct Builder {
  int nx = 0, ny = 0;
  double lx = 1.0, ly = 1.0;
  SolverConfig c;
};

using Setter = std::function<void(Builder&, const Entry&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"grid.nx", [](Builder& b, const Entry& e) { b.nx = static_cast<int>(to_int(e)); }},
      {"grid.ny", [](Builder& b, const Entry& e) { b.ny = static_cast<int>(to_int(e)); }},
      {"grid.lx", [](Builder& b, const Entry& e) { b.lx = to_double(e); }},
      {"grid.ly", [](Builder& b, const Entry& e) { b.ly = to_double(e); }},
      {"fluid.gamma", [](Builder& b, const Entry& e) { b.c.fluid.gamma = to_double(e); }},
      {"fluid.a", [](Builder& b, const Entry& e) { b.c.fluid.a = to_double(e); }},
      {"fluid.mu", [](Builder& b, const Entry& e) { b.c.fluid.mu = to_double(e); }},
      {"fluid.lambda", [](Builder& b, const Entry& e) { b.c.fluid.lambda = to_double(e); }},
      {"fluid.c_star", [](Builder& b, const Entry& e) { b.c.fluid.c_star = to_double(e); }},
      {"run.t_end", [](Builder& b, const Entry& e) { b.c.t_end = to_double(e); }},
      {"run.cfl", [](Builder& b, const Entry& e) { b.c.cfl = to_double(e); }},
      {"run.output_every", [](Builder& b, const Entry& e) { b.c.output_every = static_cast<int>(to_int(e)); }},
      {"run.backend",
       [](Builder& b, const Entry& e) {
         if (e.value == "serial") {
           b.c.backend = Backend::serial;
         } else if (e.value == "openmp") {
           b.c.backend = Backend::openmp;
         } else {
           throw ConfigError("run.backend must be 'serial' or 'openmp', got '" + e.value + "'", e.line);
         }
       }},
      {"ic.kind",
       [](Builder& b, const Entry& e) {
         using K = InitialCondition::Kind;
         if (e.value == "constant") {
           b.c.ic.kind = K::constant;
         } else if (e.value == "perturbed") {
           b.c.ic.kind = K::perturbed;
         } else if (e.value == "file") {
           b.c.ic.kind = K::file;
         } else {
           throw ConfigError("ic.kind must be constant, perturbed or file, got '" + e.value + "'", e.line);
         }
       }},
      {"ic.rho0", [](Builder& b, const Entry& e) { b.c.ic.rho0 = to_double(e); }},
      {"ic.theta0", [](Builder& b, const Entry& e) { b.c.ic.theta0 = to_double(e); }},
      {"ic.ux", [](Builder& b, const Entry& e) { b.c.ic.u0.x = to_double(e); }},
      {"ic.uy", [](Builder& b, const Entry& e) { b.c.ic.u0.y = to_double(e); }},
      {"ic.amplitude", [](Builder& b, const Entry& e) { b.c.ic.amplitude = to_double(e); }},
      {"ic.modes", [](Builder& b, const Entry& e) { b.c.ic.modes = static_cast<int>(to_int(e)); }},
      {"ic.seed",
       [](Builder& b, const Entry& e) {
         const long long s = to_int(e);
         if (s < 0) throw ConfigError("ic.seed must be nonnegative", e.line);
         b.c.ic.seed = static_cast<std::uint64_t>(s);
       }},
      {"ic.path", [](Builder& b, const Entry& e) { b.c.ic.path = e.value; }},
      {"forcing", [](Builder& b, const Entry& e) { b.c.forcing = e.value; }},
  };
  return m;
}

SolverConfig build(const std::vector<Entry>& entries) {
  Builder b;
  std::map<std::string, int> seen;
  for (const Entry& e : entries) {
    const auto it = setters().find(e.key);
    if (it == setters().end()) throw ConfigError("unknown key '" + e.key + "'", e.line);
    if (seen.count(e.key)) throw ConfigError("duplicate key '" + e.key + "'", e.line);
    seen[e.key] = e.line;
    it->second(b, e);
  }
  for (const char* key : {"grid.nx", "grid.ny", "run.t_end", "ic.kind"})
    if (!seen.count(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  if (b.nx < 1 || b.ny < 1) throw ConfigError("grid.nx and grid.ny must be >= 1", seen["grid.nx"]);
  if (!(b.lx > 0.0) || !(b.ly > 0.0)) throw ConfigError("grid.lx and grid.ly must be positive");
  b.c.grid = Grid2D(b.nx, b.ny, b.lx, b.ly);
  try {
    b.c.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return b.c;
}

}  // namespace

SolverConfig parse_config(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = first != std::string::npos && text[first] == '{';
  return build(json ? parse_json(text) : parse_text(text));
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const SolverConfig& c) {
  nlohmann::ordered_json j;
  j["grid"] = {{"nx", c.grid.nx()}, {"ny", c.grid.ny()}, {"lx", c.grid.lx()}, {"ly", c.grid.ly()}};
  j["fluid"] = {{"gamma", c.fluid.gamma},
                {"a", c.fluid.a},
                {"mu", c.fluid.mu},
                {"lambda", c.fluid.lambda},
                {"c_star", c.fluid.c_star}};
  j["run"] = {{"t_end", c.t_end},
              {"cfl", c.cfl},
              {"output_every", c.output_every},
              {"backend", c.backend == Backend::serial ? "serial" : "openmp"}};
  const char* kind = c.ic.kind == InitialCondition::Kind::constant    ? "constant"
                     : c.ic.kind == InitialCondition::Kind::perturbed ? "perturbed"
                                                                      : "file";
  j["ic"] = {{"kind", kind},         {"rho0", c.ic.rho0},           {"theta0", c.ic.theta0},
             {"ux", c.ic.u0.x},      {"uy", c.ic.u0.y},             {"amplitude", c.ic.amplitude},
             {"modes", c.ic.modes},  {"seed", c.ic.seed},           {"path", c.ic.path}};
  j["forcing"] = c.forcing;
  return j.dump(2);
}

}  // namespace dmv
