#pragma once

// Batch front-end: config loading, dataset assembly and rendering for the
// otto-sta command line tool.

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "otto/protocols.hpp"

namespace otto::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitNumerics = 4;

/// Invalid configuration; pointer is the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

// ---- schema ----------------------------------------------------------------

struct SchemaIssue {
  std::string pointer;
  std::string message;
};

/// The published run-config schema (schema/run_config.schema.json).
const nlohmann::json& config_schema();

/// Checks doc against the subset of JSON Schema used by the published schema:
/// type, enum, properties, required, additionalProperties, items, minItems,
/// minimum/maximum (inclusive and exclusive), oneOf and local $ref.
std::vector<SchemaIssue> validate_schema(const nlohmann::json& schema, const nlohmann::json& doc);

// ---- config ----------------------------------------------------------------

enum class Command { Qstar, Cost, Cycle, Empower, Sweep };
enum class Format { Csv, Json };

std::string_view to_string(Command c);
Command command_from_string(std::string_view name);

struct QstarParams {
  std::vector<RampKind> kinds{RampKind::Poly5, RampKind::Poly3, RampKind::Cosine, RampKind::Linear};
  double omega_i = 0.35;
  double omega_f = 1.0;
  double tau = 3.0;
  double beta = 2.0;
  int points = 1001;
};

struct CostParams {
  RampKind kind = RampKind::Poly5;
  double omega_i = 0.35;
  double omega_f = 1.0;
  double beta = 2.0;
  std::vector<double> taus;  // default 2.5, 3.0, ..., 12.0
};

struct CycleParams {
  RampKind kind = RampKind::Poly5;
  double omega1 = 0.35;
  double omega2 = 1.0;
  double beta1 = 2.0;
  double beta2 = 0.2;
  std::vector<double> taus;  // default 0.25, 0.5, ..., 10.0
};

struct EmpowerParams {
  double omega1 = 1.0;
  double beta1 = 1.0;
  std::vector<double> beta_ratios;  // default 0.02, 0.04, ..., 0.98
  bool high_T_hot = true;
  bool high_T_cold = true;
};

struct SweepParams {
  double omega2 = 1.0;
  double beta1 = 2.0;
  std::vector<double> omega_ratios{0.35};
  std::vector<double> beta_ratios{0.1};
  std::vector<double> taus{2.5, 3.0, 5.0, 10.0};
  std::vector<RampKind> kinds{RampKind::Poly5};
};

struct NumericsParams {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int nodes = 1001;
};

struct RunConfig {
  QstarParams qstar;
  CostParams cost;
  CycleParams cycle;
  EmpowerParams empower;
  SweepParams sweep;
  NumericsParams numerics;
  bool oracle = false;
  Format format = Format::Csv;

  RunConfig();

  /// Fully expanded config (defaults filled, grids listed) as canonical JSON;
  /// the output format is not part of it.
  nlohmann::json effective() const;
  /// SHA-256 of effective().dump(), hex.
  std::string digest() const;
  /// Re-checks physical constraints the schema cannot express.
  void validate() const;
};

/// Schema check, then field extraction, then validate(). Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);

/// start, start + step, ... up to stop (inclusive within 1e-9 step).
std::vector<double> range_grid(double start, double stop, double step);

// ---- datasets ----------------------------------------------------------------

/// Empty cells mark quantities that are undefined at that point.
using Cell = std::variant<std::monostate, double, std::string, bool>;

struct Dataset {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json metadata;
};

/// Shortest round-trip decimal form.
std::string format_number(double v);

std::string render_csv(const Dataset& ds);
std::string render_json(const Dataset& ds);
std::string render(const Dataset& ds, Format format);

/// Writes through a temporary file in the same directory and renames it into
/// place, so a failed run never leaves a partial file.
void write_atomically(const std::string& path, std::string_view content);

// ---- commands ----------------------------------------------------------------

Dataset cmd_qstar(const RunConfig& cfg, int jobs);
Dataset cmd_cost(const RunConfig& cfg, int jobs);
Dataset cmd_cycle(const RunConfig& cfg, int jobs);
Dataset cmd_empower(const RunConfig& cfg, int jobs);
Dataset cmd_sweep(const RunConfig& cfg, int jobs);
Dataset run_command(Command c, const RunConfig& cfg, int jobs);

/// Maps the exception currently being handled to an exit code.
int exit_code_for_current_exception();

}  // namespace otto::app
