#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include "otto/app.hpp"
#include "otto/cycle.hpp"
#include "otto/dynamics.hpp"
#include "otto/errors.hpp"
#include "otto/fock.hpp"
#include "otto/optimizer.hpp"
#include "otto/sta_cost.hpp"

#ifndef OTTO_VERSION
#define OTTO_VERSION "dev"
#endif

namespace otto::app {
namespace {

using nlohmann::json;
using Row = std::vector<Cell>;

// Evaluates f(0..n-1) on up to `jobs` threads. Results keep index order and
// the lowest-index failure is rethrown, so output never depends on scheduling.
template <class F>
auto parallel_map(std::size_t n, int jobs, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using T = decltype(f(std::size_t{}));
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

IntegratorTolerance tolerance(const RunConfig& cfg) {
  return {cfg.numerics.rel_tol, cfg.numerics.abs_tol};
}

CycleOptions cycle_options(const RunConfig& cfg) { return {tolerance(cfg), cfg.numerics.nodes}; }

json open_questions() {
  return {
      {"cd_validity", "CD trap confining iff 1 - wdot^2/(4 w^4) > 0"},
      {"sta_cost_sign", "cost = <H_STA>_tau of both strokes, subtracted from the work output"},
      {"sta_efficiency", "eta_STA = -(W1+W3)/(Q2 + cost1 + cost3), P_STA = (-(W1+W3) - cost)/tau_cycle"},
      {"time_averaged_work", "<W_i>_tau = W_i,AD + <H_STA^i>_tau; eta_avg = -(<W1>+<W3>)/Q2"},
      {"fluctuation_average", "<deltaDeltaW>_tau = (1/tau) int sqrt(delta(DeltaW)^2) dt"},
      {"eta_star", "printed eta* formula and 1 - x_opt both reported"},
      {"w_irr_beta", "S(rho_t||rho_ad)/beta with beta of the bath preceding the stroke"},
      {"empty_field", "quantity undefined at this point (CD trap inversion, non-STA ramp or not an engine)"},
  };
}

Dataset make_dataset(Command c, const RunConfig& cfg, std::vector<std::string> columns) {
  Dataset ds;
  ds.command = std::string(to_string(c));
  ds.columns = std::move(columns);
  ds.metadata = {
      {"tool", "otto-sta"},
      {"version", OTTO_VERSION},
      {"command", ds.command},
      {"config_digest", cfg.digest()},
      {"config", cfg.effective()},
      {"units", {{"hbar", 1}, {"m", 1}, {"omega_f", 1},
                 {"energy", "hbar omega_f"}, {"time", "1/omega_f"}}},
      {"open_questions", open_questions()},
      {"columns", ds.columns},
  };
  return ds;
}

Cell opt(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

// ---- qstar -------------------------------------------------------------------

Dataset cmd_qstar(const RunConfig& cfg, int jobs) {
  const QstarParams& q = cfg.qstar;
  Dataset ds = make_dataset(Command::Qstar, cfg, {"t", "protocol_kind", "omega", "q_cd", "q_bare"});
  std::vector<double> times(static_cast<std::size_t>(q.points));
  for (int k = 0; k < q.points; ++k) times[k] = q.tau * k / (q.points - 1);
  times.back() = q.tau;

  auto curves = parallel_map(q.kinds.size(), jobs, [&](std::size_t i) {
    const FrequencyProtocol p(q.kinds[i], q.omega_i, q.omega_f, q.tau);
    const auto bare = adiabaticity_Q_curve(p, q.beta, times, Drive::Bare, tolerance(cfg));
    std::vector<Row> rows;
    rows.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
      std::optional<double> qcd;
      try {
        qcd = q_cd(p, times[k]);
      } catch (const TrapInversionError&) {
      }
      rows.push_back({times[k], std::string(to_string(p.kind())), p.eval(times[k]).omega,
                      opt(qcd), bare[k]});
    }
    return rows;
  });
  for (auto& c : curves)
    for (auto& r : c) ds.rows.push_back(std::move(r));
  return ds;
}

// ---- cost --------------------------------------------------------------------

Dataset cmd_cost(const RunConfig& cfg, int jobs) {
  const CostParams& c = cfg.cost;
  Dataset ds = make_dataset(Command::Cost, cfg,
                            {"tau", "avg_work_cost", "avg_variance_cost", "friction_final",
                             "adiabatic_work"});
  ds.metadata["stroke"] = "compression from a thermal state at (beta, omega_i)";
  ds.rows = parallel_map(c.taus.size(), jobs, [&](std::size_t i) -> Row {
    const double tau = c.taus[i];
    const StrokeContext ctx(FrequencyProtocol(c.kind, c.omega_i, c.omega_f, tau), c.beta);
    return {tau, avg_work_cost(ctx, cfg.numerics.nodes), avg_variance_cost(ctx, cfg.numerics.nodes),
            friction(ctx, tau, tolerance(cfg)), adiabatic_work(ctx)};
  });
  return ds;
}

// ---- cycle -------------------------------------------------------------------

namespace {

// Largest relative deviation between Fock and Gaussian mean energies at the
// end of both bare strokes.
double oracle_residual(const CycleConfig& c, const IntegratorTolerance& tol) {
  double worst = 0.0;
  auto stroke = [&](const FrequencyProtocol& p, double beta) {
    const double ref = fock::default_ref_omega(p);
    const int dim = fock::default_cutoff(beta, std::min(p.omega_i(), p.omega_f()));
    const auto rho0 = fock::thermal_fock(beta, p.omega_i(), ref, dim);
    const auto rho = fock::propagate_fock(rho0, p, p.tau(), Drive::Bare);
    const double e_fock = fock::mean_energy(rho, p.omega_f());
    const double e_gauss =
        mean_energy(propagate(thermal_state(beta, p.omega_i()), p, p.tau(), Drive::Bare, tol),
                    p.omega_f());
    worst = std::max(worst, std::abs(e_fock - e_gauss) / std::abs(e_gauss));
  };
  stroke(c.compression(), c.beta1);
  stroke(c.expansion(), c.beta2);
  return worst;
}

struct Figure {
  std::optional<double> eta;
  std::optional<double> power;
};

Figure figure_of(const CycleConfig& c, Accounting a, const CycleOptions& o) {
  try {
    const CycleResult r = evaluate_cycle(c, a, o);
    if (!r.engine_mode) return {};
    return {r.eta, r.power};
  } catch (const TrapInversionError&) {
    return {};
  } catch (const DomainError&) {
    return {};  // non-STA ramp under an STA accounting
  }
}

}  // namespace

Dataset cmd_cycle(const RunConfig& cfg, int jobs) {
  const CycleParams& p = cfg.cycle;
  std::vector<std::string> cols{"tau",     "eta_ad", "P_ad",    "eta_na", "P_na",
                                "eta_sta", "P_sta",  "eta_avg", "P_avg"};
  if (cfg.oracle) cols.push_back("oracle_residual");
  Dataset ds = make_dataset(Command::Cycle, cfg, cols);

  // the ideal cycle has no tau dependence in its efficiency; it must be an engine
  {
    const CycleConfig c{p.omega1, p.omega2, p.beta1, p.beta2, 1.0, 1.0, p.kind};
    if (!evaluate_cycle(c, Accounting::Adiabatic).engine_mode)
      throw DomainError("the adiabatic cycle is not an engine for these frequencies and temperatures");
  }

  const CycleOptions opts = cycle_options(cfg);
  ds.rows = parallel_map(p.taus.size(), jobs, [&](std::size_t i) -> Row {
    const double tau = p.taus[i];
    const CycleConfig c{p.omega1, p.omega2, p.beta1, p.beta2, tau, tau, p.kind};
    Row row{tau};
    for (Accounting a : {Accounting::Adiabatic, Accounting::Nonadiabatic, Accounting::STAWithCost,
                         Accounting::TimeAveraged}) {
      const Figure f = figure_of(c, a, opts);
      row.push_back(opt(f.eta));
      row.push_back(opt(f.power));
    }
    if (cfg.oracle) row.push_back(oracle_residual(c, opts.tol));
    return row;
  });
  return ds;
}

// ---- empower -----------------------------------------------------------------

Dataset cmd_empower(const RunConfig& cfg, int jobs) {
  const EmpowerParams& e = cfg.empower;
  Dataset ds = make_dataset(Command::Empower, cfg,
                            {"beta_ratio", "eta_ca", "eta_star_printed", "one_minus_xopt",
                             "x_opt_numeric", "delta_eta"});
  ds.metadata["delta_eta"] = "one_minus_xopt - eta_star_printed";
  ds.rows = parallel_map(e.beta_ratios.size(), jobs, [&](std::size_t i) -> Row {
    const double r = e.beta_ratios[i];
    const EmpConfig ec{e.omega1, e.beta1, r * e.beta1, e.high_T_hot, e.high_T_cold};
    const EmpResult res = maximize_power_numeric(ec);
    if (!res.engine_regime) return {r, curzon_ahlborn(r), {}, {}, {}, {}};
    const double printed = eta_max_power_analytic(res.gamma);
    return {r, curzon_ahlborn(r), printed, res.eta_at_max, res.x_opt, res.eta_at_max - printed};
  });
  return ds;
}

// ---- sweep -------------------------------------------------------------------

Dataset cmd_sweep(const RunConfig& cfg, int jobs) {
  const SweepParams& s = cfg.sweep;
  Dataset ds = make_dataset(Command::Sweep, cfg,
                            {"omega_ratio", "beta_ratio", "tau", "kind", "accounting", "status",
                             "W1", "W3", "Q2", "Q4", "Q1star", "Q3star", "cost1", "cost3", "eta",
                             "power", "dS_tot", "engine_mode"});
  struct Point {
    double x, r, tau;
    RampKind kind;
  };
  std::vector<Point> points;
  for (double x : s.omega_ratios)
    for (double r : s.beta_ratios)
      for (double tau : s.taus)
        for (RampKind k : s.kinds) points.push_back({x, r, tau, k});

  const CycleOptions opts = cycle_options(cfg);
  auto blocks = parallel_map(points.size(), jobs, [&](std::size_t i) {
    const Point& pt = points[i];
    const CycleConfig c{pt.x * s.omega2, s.omega2, s.beta1, pt.r * s.beta1, pt.tau, pt.tau, pt.kind};
    std::vector<Row> rows;
    for (Accounting a : {Accounting::Adiabatic, Accounting::Nonadiabatic, Accounting::STAWithCost,
                         Accounting::TimeAveraged}) {
      Row row{pt.x, pt.r, pt.tau, std::string(to_string(pt.kind)), std::string(to_string(a))};
      std::optional<CycleResult> res;
      std::string status = "ok";
      try {
        res = evaluate_cycle(c, a, opts);
      } catch (const TrapInversionError&) {
        status = "trap_inversion";
      } catch (const DomainError&) {
        status = is_sta_kind(pt.kind) ? "domain_error" : "not_sta_ramp";
      }
      row.push_back(status);
      if (res) {
        const CycleResult& r = *res;
        for (double v : {r.W1, r.W3, r.Q2, r.Q4, r.Q1star, r.Q3star, r.cost1, r.cost3, r.eta,
                         r.power, r.dS_tot})
          row.push_back(v);
        row.push_back(r.engine_mode);
      } else {
        row.resize(ds.columns.size());
      }
      rows.push_back(std::move(row));
    }
    return rows;
  });
  for (auto& b : blocks)
    for (auto& r : b) ds.rows.push_back(std::move(r));
  return ds;
}

Dataset run_command(Command c, const RunConfig& cfg, int jobs) {
  switch (c) {
    case Command::Qstar: return cmd_qstar(cfg, jobs);
    case Command::Cost: return cmd_cost(cfg, jobs);
    case Command::Cycle: return cmd_cycle(cfg, jobs);
    case Command::Empower: return cmd_empower(cfg, jobs);
    case Command::Sweep: return cmd_sweep(cfg, jobs);
  }
  throw ConfigError("", "unknown command");
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const nlohmann::json::exception&) {
    return kExitConfig;
  } catch (const TrapInversionError&) {
    return kExitDomain;
  } catch (const DomainError&) {
    return kExitDomain;
  } catch (const NumericsError&) {
    return kExitNumerics;
  } catch (const InvariantViolation&) {
    return kExitNumerics;
  } catch (...) {
    return 1;
  }
}

}  // namespace otto::app
