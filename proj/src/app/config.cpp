#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "otto/app.hpp"
#include "otto/cycle.hpp"
#include "otto/errors.hpp"
#include "otto/optimizer.hpp"

namespace otto::app {
namespace {

using nlohmann::json;

std::vector<double> read_grid(const json& v, const std::string& at) {
  if (v.is_array()) return v.get<std::vector<double>>();
  const double start = v.at("start").get<double>();
  const double stop = v.at("stop").get<double>();
  const double step = v.at("step").get<double>();
  if (stop < start) throw ConfigError(at, "range stop is below start");
  if (step < 1e-9) throw ConfigError(at + "/step", "range step must be at least 1e-9");
  if ((stop - start) / step > 1e6) throw ConfigError(at, "range has more than 1e6 points");
  return range_grid(start, stop, step);
}

std::vector<RampKind> read_kinds(const json& v) {
  std::vector<RampKind> kinds;
  for (const auto& k : v) kinds.push_back(ramp_kind_from_string(k.get<std::string>()));
  return kinds;
}

json kinds_json(const std::vector<RampKind>& kinds) {
  json out = json::array();
  for (RampKind k : kinds) out.push_back(std::string(to_string(k)));
  return out;
}

template <class T>
void take(const json& block, const char* key, T& field) {
  if (block.contains(key)) field = block[key].get<T>();
}

// Re-raises physics-type validation failures of inner types as config errors.
template <class F>
void check_at(const std::string& at, F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    throw ConfigError(at, e.what());
  }
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Qstar: return "qstar";
    case Command::Cost: return "cost";
    case Command::Cycle: return "cycle";
    case Command::Empower: return "empower";
    case Command::Sweep: return "sweep";
  }
  return "?";
}

Command command_from_string(std::string_view name) {
  for (Command c : {Command::Qstar, Command::Cost, Command::Cycle, Command::Empower, Command::Sweep})
    if (to_string(c) == name) return c;
  throw ConfigError("", "unknown command '" + std::string(name) + "'");
}

std::vector<double> range_grid(double start, double stop, double step) {
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    // snap to 12 decimals so 0.02 * 3 prints as 0.06
    out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return out;
}

RunConfig::RunConfig() {
  cost.taus = range_grid(2.5, 12.0, 0.5);
  cycle.taus = range_grid(0.25, 10.0, 0.25);
  empower.beta_ratios = range_grid(0.02, 0.98, 0.02);
}

void RunConfig::validate() const {
  check_at("/qstar", [&] {
    for (RampKind k : qstar.kinds) FrequencyProtocol(k, qstar.omega_i, qstar.omega_f, qstar.tau);
  });
  check_at("/cost", [&] {
    for (double t : cost.taus) FrequencyProtocol(cost.kind, cost.omega_i, cost.omega_f, t);
  });
  check_at("/cycle", [&] {
    for (double t : cycle.taus) {
      CycleConfig c{cycle.omega1, cycle.omega2, cycle.beta1, cycle.beta2, t, t, cycle.kind};
      c.validate();
    }
  });
  for (std::size_t i = 0; i < empower.beta_ratios.size(); ++i) {
    const double r = empower.beta_ratios[i];
    if (!(r > 0.0 && r < 1.0))
      throw ConfigError("/empower/beta_ratios/" + std::to_string(i), "beta ratio must lie in (0, 1)");
  }
  check_at("/empower", [&] {
    EmpConfig e{empower.omega1, empower.beta1, 0.5 * empower.beta1, empower.high_T_hot,
                empower.high_T_cold};
    e.validate();
  });
  for (std::size_t i = 0; i < sweep.omega_ratios.size(); ++i)
    if (!(sweep.omega_ratios[i] < 1.0))
      throw ConfigError("/sweep/omega_ratios/" + std::to_string(i), "omega ratio must lie in (0, 1)");
  for (std::size_t i = 0; i < sweep.beta_ratios.size(); ++i)
    if (!(sweep.beta_ratios[i] < 1.0))
      throw ConfigError("/sweep/beta_ratios/" + std::to_string(i), "beta ratio must lie in (0, 1)");
  if (numerics.nodes % 2 == 0)
    throw ConfigError("/numerics/nodes", "Simpson quadrature needs an odd node count");
  if (!(numerics.rel_tol > 0.0 && numerics.rel_tol <= 1e-3))
    throw ConfigError("/numerics/rel_tol", "tolerance must lie in (0, 1e-3]");
  if (!(numerics.abs_tol > 0.0 && numerics.abs_tol <= 1e-3))
    throw ConfigError("/numerics/abs_tol", "tolerance must lie in (0, 1e-3]");
}

json RunConfig::effective() const {
  json j;
  j["qstar"] = {{"kinds", kinds_json(qstar.kinds)}, {"omega_i", qstar.omega_i},
                {"omega_f", qstar.omega_f},          {"tau", qstar.tau},
                {"beta", qstar.beta},                {"points", qstar.points}};
  j["cost"] = {{"kind", std::string(to_string(cost.kind))},
               {"omega_i", cost.omega_i},
               {"omega_f", cost.omega_f},
               {"beta", cost.beta},
               {"taus", cost.taus}};
  j["cycle"] = {{"kind", std::string(to_string(cycle.kind))},
                {"omega1", cycle.omega1},
                {"omega2", cycle.omega2},
                {"beta1", cycle.beta1},
                {"beta2", cycle.beta2},
                {"taus", cycle.taus}};
  j["empower"] = {{"omega1", empower.omega1},
                  {"beta1", empower.beta1},
                  {"beta_ratios", empower.beta_ratios},
                  {"high_T_hot", empower.high_T_hot},
                  {"high_T_cold", empower.high_T_cold}};
  j["sweep"] = {{"omega2", sweep.omega2},           {"beta1", sweep.beta1},
                {"omega_ratios", sweep.omega_ratios}, {"beta_ratios", sweep.beta_ratios},
                {"taus", sweep.taus},               {"kinds", kinds_json(sweep.kinds)}};
  j["numerics"] = {
      {"rel_tol", numerics.rel_tol}, {"abs_tol", numerics.abs_tol}, {"nodes", numerics.nodes}};
  j["oracle"] = oracle;
  return j;
}

RunConfig parse_config(const json& doc) {
  const auto issues = validate_schema(config_schema(), doc);
  if (!issues.empty()) {
    std::ostringstream msg;
    msg << issues.front().message;
    if (issues.size() > 1) msg << " (+" << issues.size() - 1 << " more)";
    for (std::size_t i = 1; i < issues.size(); ++i)
      msg << "\n  " << (issues[i].pointer.empty() ? "/" : issues[i].pointer) << ": "
          << issues[i].message;
    throw ConfigError(issues.front().pointer, msg.str());
  }

  RunConfig cfg;
  if (doc.contains("qstar")) {
    const json& b = doc["qstar"];
    if (b.contains("kinds")) cfg.qstar.kinds = read_kinds(b["kinds"]);
    take(b, "omega_i", cfg.qstar.omega_i);
    take(b, "omega_f", cfg.qstar.omega_f);
    take(b, "tau", cfg.qstar.tau);
    take(b, "beta", cfg.qstar.beta);
    if (b.contains("points")) cfg.qstar.points = static_cast<int>(b["points"].get<double>());
  }
  if (doc.contains("cost")) {
    const json& b = doc["cost"];
    if (b.contains("kind")) cfg.cost.kind = ramp_kind_from_string(b["kind"].get<std::string>());
    take(b, "omega_i", cfg.cost.omega_i);
    take(b, "omega_f", cfg.cost.omega_f);
    take(b, "beta", cfg.cost.beta);
    if (b.contains("taus")) cfg.cost.taus = read_grid(b["taus"], "/cost/taus");
  }
  if (doc.contains("cycle")) {
    const json& b = doc["cycle"];
    if (b.contains("kind")) cfg.cycle.kind = ramp_kind_from_string(b["kind"].get<std::string>());
    take(b, "omega1", cfg.cycle.omega1);
    take(b, "omega2", cfg.cycle.omega2);
    take(b, "beta1", cfg.cycle.beta1);
    take(b, "beta2", cfg.cycle.beta2);
    if (b.contains("taus")) cfg.cycle.taus = read_grid(b["taus"], "/cycle/taus");
  }
  if (doc.contains("empower")) {
    const json& b = doc["empower"];
    take(b, "omega1", cfg.empower.omega1);
    take(b, "beta1", cfg.empower.beta1);
    take(b, "high_T_hot", cfg.empower.high_T_hot);
    take(b, "high_T_cold", cfg.empower.high_T_cold);
    if (b.contains("beta_ratios"))
      cfg.empower.beta_ratios = read_grid(b["beta_ratios"], "/empower/beta_ratios");
  }
  if (doc.contains("sweep")) {
    const json& b = doc["sweep"];
    take(b, "omega2", cfg.sweep.omega2);
    take(b, "beta1", cfg.sweep.beta1);
    if (b.contains("omega_ratios"))
      cfg.sweep.omega_ratios = read_grid(b["omega_ratios"], "/sweep/omega_ratios");
    if (b.contains("beta_ratios"))
      cfg.sweep.beta_ratios = read_grid(b["beta_ratios"], "/sweep/beta_ratios");
    if (b.contains("taus")) cfg.sweep.taus = read_grid(b["taus"], "/sweep/taus");
    if (b.contains("kinds")) cfg.sweep.kinds = read_kinds(b["kinds"]);
  }
  if (doc.contains("numerics")) {
    const json& b = doc["numerics"];
    take(b, "rel_tol", cfg.numerics.rel_tol);
    take(b, "abs_tol", cfg.numerics.abs_tol);
    if (b.contains("nodes")) cfg.numerics.nodes = static_cast<int>(b["nodes"].get<double>());
  }
  take(doc, "oracle", cfg.oracle);
  if (doc.contains("format"))
    cfg.format = doc["format"].get<std::string>() == "json" ? Format::Json : Format::Csv;
  cfg.validate();
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace otto::app

// ---- digest ------------------------------------------------------------------

std::string otto::app::RunConfig::digest() const {
  const std::string text = effective().dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}
