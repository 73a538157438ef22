#include "coopemit/dynamics.hpp"

#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "coopemit/errors.hpp"

namespace coopemit {

using cplx = std::complex<double>;

AmplitudeState initial_state(const AtomicCloud& cloud) {
  const int n = cloud.size();
  return {Eigen::VectorXcd::Constant(n, cplx(1.0 / std::sqrt(static_cast<double>(n)), 0.0)), 0.0, Frame::beta};
}

AmplitudeState to_alpha(const AmplitudeState& state, const AtomicCloud& cloud) {
  if (state.frame == Frame::alpha) return state;
  if (state.size() != cloud.size()) throw ParameterError("state and cloud sizes differ");
  AmplitudeState out = state;
  out.amplitudes = beta_gauge(cloud).conjugate().cwiseProduct(state.amplitudes);
  out.frame = Frame::alpha;
  return out;
}

AmplitudeState to_beta(const AmplitudeState& state, const AtomicCloud& cloud) {
  if (state.frame == Frame::beta) return state;
  if (state.size() != cloud.size()) throw ParameterError("state and cloud sizes differ");
  AmplitudeState out = state;
  out.amplitudes = beta_gauge(cloud).cwiseProduct(state.amplitudes);
  out.frame = Frame::beta;
  return out;
}

AmplitudeState evolve(const AmplitudeState& state, const DecayMatrix& dm, double t) {
  if (state.frame != Frame::beta) throw ParameterError("evolve: decay matrix is beta-frame but state is alpha-frame");
  if (state.size() != dm.size()) throw ParameterError("evolve: state and decay matrix sizes differ");
  if (!(t >= state.t)) throw ParameterError("evolve: target time precedes state time");
  AmplitudeState out = state;
  out.t = t;
  if (t > state.t) out.amplitudes = dm.propagate(state.amplitudes, t - state.t);
  return out;
}

namespace {

void check_sizes(const Eigen::MatrixXcd& gamma, const DickeBasis& basis) {
  if (gamma.rows() != basis.n_atoms() || gamma.cols() != basis.n_atoms())
    throw ParameterError("decay matrix size " + std::to_string(gamma.rows()) + " does not match basis size " +
                         std::to_string(basis.n_atoms()));
}

}  // namespace

// f^l = u - e_l for a shared offset u, so every double sum collapses to
// matrix-vector products with Gamma:
//   s_l  = (1/sqrt N) [u^T G 1 - (G 1)_l]
//   q_ll' = u^T G u - (u^T G)_l' - (G u)_l + G_ll'
PerturbativeModel build_symmetric_couplings(const Eigen::MatrixXcd& gamma, const DickeBasis& basis) {
  check_sizes(gamma, basis);
  const int n = basis.n_atoms();
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(n);
  const Eigen::VectorXcd u = basis.offset().cast<cplx>();
  const Eigen::VectorXcd row_sums = gamma * ones;

  PerturbativeModel m;
  const cplx total = ones.dot(row_sums) / static_cast<double>(n);
  m.gamma_col = total.real();
  m.gamma_col_imag = total.imag();
  const cplx u_g_1 = u.transpose() * row_sums;
  m.s = (Eigen::VectorXcd::Constant(n - 1, u_g_1) - row_sums.head(n - 1)) / std::sqrt(static_cast<double>(n));
  return m;
}

PerturbativeModel build_perturbative_model(const Eigen::MatrixXcd& gamma, const DickeBasis& basis) {
  PerturbativeModel m = build_symmetric_couplings(gamma, basis);
  const int n = basis.n_atoms();
  const Eigen::VectorXcd u = basis.offset().cast<cplx>();
  const Eigen::VectorXcd g_u = gamma * u;
  const Eigen::RowVectorXcd u_g = u.transpose() * gamma;
  const cplx u_g_u = u_g * u;
  m.q = gamma.topLeftCorner(n - 1, n - 1);
  m.q.array() += u_g_u;
  m.q.colwise() -= g_u.head(n - 1);
  m.q.rowwise() -= u_g.head(n - 1);
  return m;
}

PerturbativeModel build_perturbative_model(const AtomicCloud& cloud, const DickeBasis& basis) {
  return build_perturbative_model(assemble_decay_matrix(cloud), basis);
}

namespace {

// (1 - exp(-x)) / x, continuous through x = 0.
double saturating_ratio(double x) { return x == 0.0 ? 1.0 : -std::expm1(-x) / x; }

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) throw ParameterError("time grid entries must be finite and >= 0");
    if (i > 0 && times[i] < times[i - 1]) throw ParameterError("time grid must be nondecreasing");
  }
}

PerturbativeSeries first_order(const PerturbativeModel& m, const std::vector<double>& times) {
  PerturbativeSeries out;
  out.times = times;
  for (double t : times) {
    out.c_sym.emplace_back(std::exp(-m.gamma_col * t), 0.0);
    out.c_f.push_back(-m.s * (t * saturating_ratio(m.gamma_col * t)));
  }
  return out;
}

using RealState = std::vector<double>;

PerturbativeSeries full_system(const PerturbativeModel& m, const std::vector<double>& times) {
  namespace odeint = boost::numeric::odeint;
  const Eigen::Index nf = m.s.size();
  if (m.q.rows() != nf || m.q.cols() != nf) throw ParameterError("perturbative model has no q block; build it with build_perturbative_model");
  const Eigen::Index dim = nf + 1;

  // Generator in the {phi_sym, f^1..f^{N-1}} coordinates.
  Eigen::MatrixXcd gen(dim, dim);
  gen(0, 0) = m.gamma_col;
  gen.block(0, 1, 1, nf) = m.s.adjoint();
  gen.block(1, 0, nf, 1) = m.s;
  gen.block(1, 1, nf, nf) = m.q;

  auto rhs = [&](const RealState& x, RealState& dxdt, double) {
    Eigen::Map<const Eigen::VectorXcd> c(reinterpret_cast<const cplx*>(x.data()), dim);
    Eigen::Map<Eigen::VectorXcd> dc(reinterpret_cast<cplx*>(dxdt.data()), dim);
    dc.noalias() = -gen * c;
  };

  RealState x(static_cast<std::size_t>(2 * dim), 0.0);
  x[0] = 1.0;
  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<RealState>());

  PerturbativeSeries out;
  out.times = times;
  double t_now = 0.0;
  const double scale = std::max({m.gamma_col, m.q.cwiseAbs().maxCoeff(), m.s.cwiseAbs().maxCoeff(), 1e-300});
  for (double t : times) {
    if (t > t_now) {
      odeint::integrate_adaptive(stepper, rhs, x, t_now, t, 0.05 / scale);
      t_now = t;
    }
    Eigen::Map<const Eigen::VectorXcd> c(reinterpret_cast<const cplx*>(x.data()), dim);
    out.c_sym.push_back(c[0]);
    out.c_f.emplace_back(c.tail(nf));
  }
  return out;
}

}  // namespace

PerturbativeSeries solve_perturbative(const PerturbativeModel& model, const std::vector<double>& times,
                                      PerturbativeMethod method) {
  check_times(times);
  return method == PerturbativeMethod::first_order ? first_order(model, times) : full_system(model, times);
}

double analytic_gamma_col(const CloudParams& p) { return p.gamma1 * p.n_atoms / (p.k0r0() * p.k0r0()); }

double analytic_gamma_r(const CloudParams& p) {
  const double k2 = p.k0r0() * p.k0r0();
  return p.gamma1 * p.n_atoms / (2.0 * k2 * k2);
}

cplx analytic_mixing_amplitude(const AtomicCloud& cloud, int l, double t) {
  if (l < 0 || l >= cloud.size()) throw ParameterError("atom index out of range");
  const auto& p = cloud.params();
  const double kr = p.k0 * p.n0.dot(cloud.position(l));
  const double k2 = p.k0r0() * p.k0r0();
  const double growth = -std::expm1(-analytic_gamma_col(p) * t);
  return cplx(0.0, 2.0 * kr / (std::sqrt(static_cast<double>(p.n_atoms)) * k2) * growth);
}

AfterglowState afterglow_state(const AtomicCloud& cloud) {
  const int n = cloud.size();
  if (n < 2) throw ParameterError("afterglow state needs n_atoms >= 2");
  const Eigen::VectorXd x = cloud.forward_phases();
  const Eigen::VectorXd centered = x.array() - x.mean();
  const double norm = centered.norm();
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff()) * std::sqrt(static_cast<double>(n));
  if (!(norm > 1e-12 * scale)) throw NumericalError("afterglow normalization failed: all atoms share the same projection on n0");

  AfterglowState ag;
  ag.a_norm = 1.0 / norm;
  ag.h = centered.cast<cplx>() * cplx(0.0, ag.a_norm);
  const auto& p = cloud.params();
  ag.a_norm_analytic = std::sqrt(2.0 / (n * p.k0r0() * p.k0r0()));
  return ag;
}

AfterglowRate gamma_r(const AtomicCloud& cloud, const AfterglowState& ag, const Eigen::MatrixXcd& gamma) {
  if (ag.h.size() != gamma.rows() || gamma.rows() != cloud.size()) throw ParameterError("gamma_r: inconsistent sizes");
  AfterglowRate out;
  out.hermitian = ag.h.dot(gamma * ag.h).real();
  out.unconjugated = (ag.h.transpose() * gamma * ag.h)(0, 0);
  out.analytic = analytic_gamma_r(cloud.params());
  return out;
}

AfterglowRate gamma_r(const AtomicCloud& cloud, const AfterglowState& ag, const DecayMatrix& dm) {
  return gamma_r(cloud, ag, dm.gamma());
}

}  // namespace coopemit
