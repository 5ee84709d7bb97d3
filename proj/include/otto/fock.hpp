#pragma once

// Truncated number-basis engine for the driven oscillator. Independent of the
// Gaussian moment equations: used to validate energies, transitionless
// populations, two-point work statistics and relative-entropy dissipation.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "otto/dynamics.hpp"
#include "otto/protocols.hpp"

namespace otto::fock {

using Matrix = Eigen::MatrixXcd;

/// Position/momentum quadratics in the number basis of frequency ref_omega,
/// built from truncated ladder operators. x2, p2 and xp_sym are the exact
/// projections of x^2, p^2 and xp + px; x and p are the projected linear ones.
struct FockOperators {
  double ref_omega;
  int dim;
  Matrix x;
  Matrix p;
  Matrix x2;
  Matrix p2;
  Matrix xp_sym;
};

FockOperators build_operators(double ref_omega, int dim);

/// H0(w) = p^2/2 + w^2 x^2/2
Matrix h0_matrix(const FockOperators& ops, double omega);
/// H_CD = H0(w) - (wdot / 4w)(xp + px)
Matrix h_cd_matrix(const FockOperators& ops, double omega, double omega_dot);

/// Exact spectral form of a state built from known populations: rho =
/// sum_n exp(log_weights[n]) |v_n><v_n|. Lets ln(rho) be taken without
/// eigenvalue round-off in the far tail.
struct Spectrum {
  Eigen::VectorXd log_weights;
  Matrix vectors;
};

class FockDensityMatrix {
 public:
  /// Checks Hermiticity and unit trace (1e-10).
  FockDensityMatrix(Matrix rho, double ref_omega, std::optional<Spectrum> spectrum = std::nullopt);

  int dim() const { return static_cast<int>(rho_.rows()); }
  double ref_omega() const noexcept { return ref_omega_; }
  const Matrix& rho() const noexcept { return rho_; }
  double trace() const { return rho_.trace().real(); }
  double min_eigenvalue() const;
  const std::optional<Spectrum>& spectrum() const noexcept { return spectrum_; }

 private:
  Matrix rho_;
  double ref_omega_;
  std::optional<Spectrum> spectrum_;
};

/// Smallest level index whose thermal tail sum_{n>=N} p_n falls below 1e-10.
int thermal_tail_index(double beta, double omega);

/// Cutoff used by default: ceil(1.6 * tail index) + 10 guard levels. The
/// factor covers the squeezing a ramp induces relative to the fixed basis.
int default_cutoff(double beta, double omega);

/// Basis frequency used by default for a ramp: sqrt(w_i w_f).
double default_ref_omega(const FrequencyProtocol& protocol);

/// Thermal populations p_n = (1 - e^{-beta w}) e^{-n beta w} for n < count.
std::vector<double> thermal_populations(double beta, double omega, int count);

/// sum_n p_n |n_w><n_w| with |n_w> the eigenvectors of truncated H0(w),
/// renormalised to unit trace.
FockDensityMatrix populations_state(std::span<const double> populations, double omega,
                                    double ref_omega, int dim);

/// Thermal state of H0(omega) represented in the basis of ref_omega.
FockDensityMatrix thermal_fock(double beta, double omega, double ref_omega, int dim);

/// Thermal populations of (beta, omega_i) carried by the eigenstates of H0(omega_t).
FockDensityMatrix adiabatic_state(double beta, double omega_i, double omega_t, double ref_omega,
                                  int dim);

struct FockOptions {
  /// Local error allowed per step on the purification (Frobenius norm).
  double step_tol = 1e-8;
  /// Population allowed in the top two levels before CutoffError.
  double leakage_limit = 1e-6;
  double initial_step = 0.02;
};

struct FockRunStats {
  int accepted_steps = 0;
  int rejected_steps = 0;
  double max_leakage = 0.0;
  double trace_drift = 0.0;
};

std::vector<FockDensityMatrix> propagate_fock_trajectory(const FockDensityMatrix& rho0,
                                                         const FrequencyProtocol& protocol,
                                                         std::span<const double> times,
                                                         Drive drive,
                                                         const FockOptions& opts = {},
                                                         FockRunStats* stats = nullptr);

FockDensityMatrix propagate_fock(const FockDensityMatrix& rho0, const FrequencyProtocol& protocol,
                                 double t, Drive drive, const FockOptions& opts = {},
                                 FockRunStats* stats = nullptr);

/// Re tr(rho H)
double expectation(const FockDensityMatrix& rho, const Matrix& h);
/// <H0(omega)> in the state's own basis.
double mean_energy(const FockDensityMatrix& rho, double omega);

/// Occupations of the eigenstates of truncated H0(omega), ascending energy.
std::vector<double> level_populations(const FockDensityMatrix& rho, double omega);

/// S(rho || sigma) = tr(rho ln rho - rho ln sigma) via eigendecompositions
/// (sigma's exact spectrum is used when it carries one). Returns +inf when rho
/// has weight > 1e-10 on eigenvectors of sigma with eigenvalue < 1e-14, or
/// exactly zero for a known spectrum.
double relative_entropy(const FockDensityMatrix& rho, const FockDensityMatrix& sigma);

/// <W_irr> = S(rho_t || rho_ad) / beta
double irreversible_work(const FockDensityMatrix& rho_t, const FockDensityMatrix& rho_ad,
                         double beta);

/// <n_CD|H0(w)|n_CD> for the lowest `levels` eigenstates of H_CD(w, wdot).
std::vector<double> cd_level_bare_energies(double omega, double omega_dot, double ref_omega,
                                           int dim, int levels);

/// Two-point-measurement work statistics of a CD stroke at time t: level n is
/// prepared with thermal weight, carries energy w_i(n+1/2) initially and
/// <n_CD(t)|H0(w_t)|n_CD(t)> at t; the adiabatic reference keeps level n of H0(w_t).
struct TwoPointWorkStats {
  double mean_cd;
  double variance_cd;
  double mean_ad;
  double variance_ad;

  double variance_excess() const { return variance_cd - variance_ad; }
};

TwoPointWorkStats two_point_work_cd(const FrequencyProtocol& protocol, double beta, double t,
                                    int dim);

}  // namespace otto::fock
