#include "otto/fock.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "otto/errors.hpp"

namespace otto::fock {
namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

// ln(1e10): thermal tail threshold for the default cutoff
constexpr double kTailLog = 23.025850929940457;

void require_dim(int dim) {
  if (dim < 4) throw DomainError("Fock dimension must be at least 4");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

// Pentadiagonal Hermitian operator with zero first off-diagonal:
// K(n,n) = d[n], K(n,n+2) = u[n], K(n+2,n) = conj(u[n]).
struct Band {
  Eigen::VectorXd d;
  Eigen::VectorXcd u;
};

Band band_of(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Band b{Eigen::VectorXd(n), Eigen::VectorXcd(std::max(n - 2, 0))};
  for (int i = 0; i < n; ++i) b.d[i] = m(i, i).real();
  for (int i = 0; i + 2 < n; ++i) b.u[i] = m(i, i + 2);
  return b;
}

Band combine(double a, const Band& x, double b, const Band& y) {
  return {a * x.d + b * y.d, a * x.u + b * y.u};
}

// out = (K in - shift in) * scale
void apply(const Band& k, const Matrix& in, Matrix& out, double shift, double scale) {
  const Eigen::Index n = in.rows();
  out.noalias() = ((k.d.array() - shift) * scale).matrix().asDiagonal() * in;
  out.topRows(n - 2).noalias() += (k.u * scale).asDiagonal() * in.bottomRows(n - 2);
  out.bottomRows(n - 2).noalias() += (k.u.conjugate() * scale).asDiagonal() * in.topRows(n - 2);
}

// exp(-i h K) M by Chebyshev expansion over the Gershgorin interval of K.
Matrix expm_apply(const Band& k, double h, const Matrix& m) {
  const Eigen::Index n = k.d.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    double r = 0.0;
    if (i + 2 < n) r += std::abs(k.u[i]);
    if (i >= 2) r += std::abs(k.u[i - 2]);
    lo = std::min(lo, k.d[i] - r);
    hi = std::max(hi, k.d[i] + r);
  }
  const double center = 0.5 * (hi + lo);
  const double radius = std::max(0.5 * (hi - lo), 1e-300);
  const double z = h * radius;

  Matrix t_prev = m;
  Matrix t_cur(m.rows(), m.cols());
  apply(k, m, t_cur, center, 1.0 / radius);
  Matrix acc = std::cyl_bessel_j(0.0, z) * m;
  Matrix t_next(m.rows(), m.cols());

  cplx phase = -I;  // (-i)^k
  int small = 0;
  const int max_terms = 64 + static_cast<int>(4.0 * z);
  for (int order = 1; order <= max_terms; ++order) {
    const double j = std::cyl_bessel_j(static_cast<double>(order), z);
    acc += (2.0 * j * phase) * t_cur;
    if (order > z && std::abs(j) < 1e-17) {
      if (++small == 2) break;
    } else {
      small = 0;
    }
    apply(k, t_cur, t_next, center, 2.0 / radius);
    t_next -= t_prev;
    std::swap(t_prev, t_cur);
    std::swap(t_cur, t_next);
    phase *= -I;
    if (order == max_terms) throw NumericsError("Chebyshev expansion did not converge");
  }
  return std::exp(-I * (h * center)) * acc;
}

// Instantaneous Hamiltonian in banded form.
class BandedHamiltonian {
 public:
  BandedHamiltonian(const FockOperators& ops, const FrequencyProtocol& protocol, Drive drive)
      : protocol_(protocol),
        drive_(drive),
        x2_(band_of(ops.x2)),
        p2_(band_of(ops.p2)),
        xp_(band_of(ops.xp_sym)) {}

  Band at(double t) const {
    const RampSample s = protocol_.eval(t);
    Band h = combine(0.5, p2_, 0.5 * s.omega * s.omega, x2_);
    if (drive_ == Drive::CD) {
      const double margin = cd_margin(s);
      if (!(margin > 0.0)) {
        std::ostringstream msg;
        msg << "counterdiabatic trap inverted at t = " << t;
        throw TrapInversionError(msg.str(), t, margin);
      }
      const double kappa = s.omega_dot / (4.0 * s.omega);
      h.d -= kappa * xp_.d;
      h.u -= kappa * xp_.u;
    }
    return h;
  }

 private:
  const FrequencyProtocol& protocol_;
  Drive drive_;
  Band x2_;
  Band p2_;
  Band xp_;
};

// Fourth-order commutator-free Magnus step.
Matrix cf4_step(const BandedHamiltonian& ham, double t, double h, const Matrix& m) {
  static const double r3 = std::sqrt(3.0);
  const double c1 = 0.5 - r3 / 6.0;
  const double c2 = 0.5 + r3 / 6.0;
  const double a1 = 0.25 + r3 / 6.0;
  const double a2 = 0.25 - r3 / 6.0;
  const Band h1 = ham.at(t + c1 * h);
  const Band h2 = ham.at(t + c2 * h);
  const Matrix half = expm_apply(combine(a1, h1, a2, h2), h, m);
  return expm_apply(combine(a2, h1, a1, h2), h, half);
}

double top_leakage(const Matrix& m) {
  const Eigen::Index n = m.rows();
  return m.row(n - 1).squaredNorm() + m.row(n - 2).squaredNorm();
}

Matrix purification(const FockDensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.rho());
  const Eigen::VectorXd& lam = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam[i] > 1e-12 * lam.maxCoeff()) keep.push_back(i);
  Matrix m(rho.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    m.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(lam[keep[c]]);
  return m;
}

FockDensityMatrix from_purification(const Matrix& m, double ref_omega) {
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return {std::move(rho), ref_omega};
}

}  // namespace

FockOperators build_operators(double ref_omega, int dim) {
  require_positive(ref_omega, "reference frequency");
  require_dim(dim);
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Matrix ad = a.adjoint();
  const Matrix id = Matrix::Identity(dim, dim);
  // a a and a^dag a are exact in the truncated space; a a^dag is not, so the
  // quadratics are assembled from these two only.
  const Matrix aa = a * a;
  const Matrix adad = ad * ad;
  const Matrix num = ad * a;

  FockOperators ops{ref_omega, dim, {}, {}, {}, {}, {}};
  ops.x = (a + ad) / std::sqrt(2.0 * ref_omega);
  ops.p = I * std::sqrt(ref_omega / 2.0) * (ad - a);
  ops.x2 = (aa + adad + 2.0 * num + id) / (2.0 * ref_omega);
  ops.p2 = -(ref_omega / 2.0) * (aa + adad - 2.0 * num - id);
  ops.xp_sym = I * (adad - aa);
  return ops;
}

Matrix h0_matrix(const FockOperators& ops, double omega) {
  require_positive(omega, "frequency");
  return 0.5 * ops.p2 + 0.5 * omega * omega * ops.x2;
}

Matrix h_cd_matrix(const FockOperators& ops, double omega, double omega_dot) {
  return h0_matrix(ops, omega) - (omega_dot / (4.0 * omega)) * ops.xp_sym;
}

FockDensityMatrix::FockDensityMatrix(Matrix rho, double ref_omega,
                                     std::optional<Spectrum> spectrum)
    : rho_(std::move(rho)), ref_omega_(ref_omega), spectrum_(std::move(spectrum)) {
  require_positive(ref_omega, "reference frequency");
  if (rho_.rows() != rho_.cols() || rho_.rows() < 4)
    throw DomainError("density matrix must be square with dimension >= 4");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw InvariantViolation("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - 1.0) > 1e-10)
    throw InvariantViolation("density matrix trace differs from 1");
}

double FockDensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

int thermal_tail_index(double beta, double omega) {
  require_positive(omega, "frequency");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (std::isinf(beta)) return 1;
  return static_cast<int>(std::ceil(kTailLog / (beta * omega)));
}

int default_cutoff(double beta, double omega) {
  const int n = static_cast<int>(std::ceil(1.6 * thermal_tail_index(beta, omega))) + 10;
  return std::max(n, 20);
}

double default_ref_omega(const FrequencyProtocol& protocol) {
  return std::sqrt(protocol.omega_i() * protocol.omega_f());
}

std::vector<double> thermal_populations(double beta, double omega, int count) {
  require_positive(omega, "frequency");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  std::vector<double> p(static_cast<std::size_t>(std::max(count, 0)), 0.0);
  if (p.empty()) return p;
  if (std::isinf(beta)) {
    p[0] = 1.0;
    return p;
  }
  const double x = beta * omega;
  const double norm = -std::expm1(-x);
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = norm * std::exp(-x * static_cast<double>(n));
  return p;
}

FockDensityMatrix populations_state(std::span<const double> populations, double omega,
                                    double ref_omega, int dim) {
  const FockOperators ops = build_operators(ref_omega, dim);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h0_matrix(ops, omega));
  const Eigen::Index levels =
      std::min<Eigen::Index>(dim, static_cast<Eigen::Index>(populations.size()));
  double tr = 0.0;
  for (Eigen::Index n = 0; n < levels; ++n) {
    if (!(populations[n] >= 0.0)) throw DomainError("populations must be non-negative");
    tr += populations[n];
  }
  if (!(tr > 0.0)) throw DomainError("populations sum to zero");

  Spectrum spec{Eigen::VectorXd::Constant(dim, -std::numeric_limits<double>::infinity()),
                es.eigenvectors()};
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index n = 0; n < levels; ++n) {
    w[n] = populations[n] / tr;
    if (w[n] > 0.0) spec.log_weights[n] = std::log(w[n]);
  }
  const Matrix& v = es.eigenvectors();
  Matrix rho = v * w.asDiagonal() * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return {std::move(rho), ref_omega, std::move(spec)};
}

FockDensityMatrix thermal_fock(double beta, double omega, double ref_omega, int dim) {
  const auto p = thermal_populations(beta, omega, dim);
  return populations_state(p, omega, ref_omega, dim);
}

FockDensityMatrix adiabatic_state(double beta, double omega_i, double omega_t, double ref_omega,
                                  int dim) {
  const auto p = thermal_populations(beta, omega_i, dim);
  return populations_state(p, omega_t, ref_omega, dim);
}

std::vector<FockDensityMatrix> propagate_fock_trajectory(const FockDensityMatrix& rho0,
                                                         const FrequencyProtocol& protocol,
                                                         std::span<const double> times,
                                                         Drive drive, const FockOptions& opts,
                                                         FockRunStats* stats) {
  if (!(opts.step_tol > 0.0) || !(opts.initial_step > 0.0))
    throw DomainError("Fock step tolerance and initial step must be positive");
  double prev = 0.0;
  for (double t : times) {
    if (!(t >= prev) || t > protocol.tau() * (1.0 + 1e-12))
      throw DomainError("Fock output times must be non-decreasing within [0, tau]");
    prev = t;
  }

  const FockOperators ops = build_operators(rho0.ref_omega(), rho0.dim());
  const BandedHamiltonian ham(ops, protocol, drive);
  Matrix m = purification(rho0);
  FockRunStats local;

  auto check_leak = [&](double t) {
    const double leak = top_leakage(m);
    local.max_leakage = std::max(local.max_leakage, leak);
    if (leak > opts.leakage_limit) {
      std::ostringstream msg;
      msg << "Fock cutoff " << rho0.dim() << " too small: top-level population " << leak
          << " at t = " << t;
      throw CutoffError(msg.str(), leak);
    }
  };
  check_leak(0.0);

  std::vector<FockDensityMatrix> out;
  out.reserve(times.size());
  double t = 0.0;
  double h = std::min(opts.initial_step, protocol.tau());
  for (double target : times) {
    target = std::min(target, protocol.tau());
    while (target - t > 1e-14 * std::max(1.0, protocol.tau())) {
      const double step = std::min(h, target - t);
      const Matrix full = cf4_step(ham, t, step, m);
      const Matrix half = cf4_step(ham, t + 0.5 * step, 0.5 * step, cf4_step(ham, t, 0.5 * step, m));
      const Matrix diff = half - full;
      const double err = diff.norm();
      if (!std::isfinite(err)) throw NumericsError("non-finite state in Fock propagation");
      const double factor =
          err == 0.0 ? 3.0 : std::clamp(0.9 * std::pow(opts.step_tol / err, 0.2), 0.2, 3.0);
      if (err <= opts.step_tol) {
        m = half + diff / 15.0;
        t += step;
        ++local.accepted_steps;
        local.trace_drift = std::max(local.trace_drift, std::abs(m.squaredNorm() - 1.0));
        check_leak(t);
        // a step shortened to land on an output time keeps the previous size
        if (step == h || factor < 1.0) h = step * factor;
      } else {
        ++local.rejected_steps;
        h = step * factor;
        if (h < 1e-12 * protocol.tau()) throw NumericsError("Fock step size underflow");
      }
    }
    out.push_back(from_purification(m, rho0.ref_omega()));
  }
  if (stats) *stats = local;
  return out;
}

FockDensityMatrix propagate_fock(const FockDensityMatrix& rho0, const FrequencyProtocol& protocol,
                                 double t, Drive drive, const FockOptions& opts,
                                 FockRunStats* stats) {
  const double times[] = {t};
  return std::move(propagate_fock_trajectory(rho0, protocol, times, drive, opts, stats).front());
}

double expectation(const FockDensityMatrix& rho, const Matrix& h) {
  if (h.rows() != rho.dim() || h.cols() != rho.dim())
    throw DomainError("operator dimension does not match the state");
  return (rho.rho() * h).trace().real();
}

double mean_energy(const FockDensityMatrix& rho, double omega) {
  const FockOperators ops = build_operators(rho.ref_omega(), rho.dim());
  return expectation(rho, h0_matrix(ops, omega));
}

std::vector<double> level_populations(const FockDensityMatrix& rho, double omega) {
  const FockOperators ops = build_operators(rho.ref_omega(), rho.dim());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h0_matrix(ops, omega));
  const Matrix& v = es.eigenvectors();
  std::vector<double> p(static_cast<std::size_t>(rho.dim()));
  for (int n = 0; n < rho.dim(); ++n) p[n] = (v.col(n).adjoint() * rho.rho() * v.col(n))(0, 0).real();
  return p;
}

double relative_entropy(const FockDensityMatrix& rho, const FockDensityMatrix& sigma) {
  if (rho.dim() != sigma.dim() || std::abs(rho.ref_omega() - sigma.ref_omega()) > 1e-14)
    throw DomainError("relative entropy needs states in the same basis");
  Eigen::SelfAdjointEigenSolver<Matrix> er(rho.rho(), Eigen::EigenvaluesOnly);

  double s = 0.0;
  for (Eigen::Index i = 0; i < er.eigenvalues().size(); ++i) {
    const double l = er.eigenvalues()[i];
    if (l > 0.0) s += l * std::log(l);
  }
  Eigen::VectorXd log_mu;
  Matrix sv;
  if (sigma.spectrum()) {
    log_mu = sigma.spectrum()->log_weights;
    sv = sigma.spectrum()->vectors;
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.rho());
    sv = es.eigenvectors();
    log_mu = es.eigenvalues().unaryExpr([](double mu) {
      return mu < 1e-14 ? -std::numeric_limits<double>::infinity() : std::log(mu);
    });
  }
  for (Eigen::Index j = 0; j < log_mu.size(); ++j) {
    const double w = (sv.col(j).adjoint() * rho.rho() * sv.col(j))(0, 0).real();
    if (std::isinf(log_mu[j])) {
      if (w > 1e-10) return std::numeric_limits<double>::infinity();
      continue;
    }
    s -= w * log_mu[j];
  }
  return std::max(s, 0.0);
}

double irreversible_work(const FockDensityMatrix& rho_t, const FockDensityMatrix& rho_ad,
                         double beta) {
  require_positive(beta, "beta");
  return relative_entropy(rho_t, rho_ad) / beta;
}

std::vector<double> cd_level_bare_energies(double omega, double omega_dot, double ref_omega,
                                           int dim, int levels) {
  const RampSample s{omega, omega_dot, 0.0};
  const double margin = cd_margin(s);
  if (!(margin > 0.0))
    throw TrapInversionError("counterdiabatic trap inverted", std::nan(""), margin);
  if (levels < 0 || levels > dim) throw DomainError("level count outside the basis");
  const FockOperators ops = build_operators(ref_omega, dim);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h_cd_matrix(ops, omega, omega_dot));
  const Matrix h0 = h0_matrix(ops, omega);
  std::vector<double> e(static_cast<std::size_t>(levels));
  for (int n = 0; n < levels; ++n) {
    const auto v = es.eigenvectors().col(n);
    e[n] = (v.adjoint() * h0 * v)(0, 0).real();
  }
  return e;
}

TwoPointWorkStats two_point_work_cd(const FrequencyProtocol& protocol, double beta, double t,
                                    int dim) {
  const RampSample s = protocol.eval(t);
  const double wi = protocol.omega_i();
  const int levels = thermal_tail_index(beta, wi);
  if (levels + 10 > dim) {
    std::ostringstream msg;
    msg << "Fock cutoff " << dim << " too small for " << levels << " thermal levels";
    throw CutoffError(msg.str(), std::exp(-beta * wi * (dim - 10)));
  }
  const auto e_cd = cd_level_bare_energies(s.omega, s.omega_dot, s.omega, dim, levels);
  const auto p = thermal_populations(beta, wi, levels);

  double norm = 0.0, m_cd = 0.0, q_cd = 0.0, m_ad = 0.0, q_ad = 0.0;
  for (int n = 0; n < levels; ++n) {
    const double e0 = wi * (n + 0.5);
    const double w_cd = e_cd[n] - e0;
    const double w_ad = s.omega * (n + 0.5) - e0;
    norm += p[n];
    m_cd += p[n] * w_cd;
    q_cd += p[n] * w_cd * w_cd;
    m_ad += p[n] * w_ad;
    q_ad += p[n] * w_ad * w_ad;
  }
  m_cd /= norm;
  m_ad /= norm;
  return {m_cd, q_cd / norm - m_cd * m_cd, m_ad, q_ad / norm - m_ad * m_ad};
}

}  // namespace otto::fock
