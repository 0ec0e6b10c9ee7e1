#include "cmf/observables.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <numbers>

#include "cmf/detail/rpa_mode.hpp"

namespace cmf {

namespace {

constexpr double kSpinBound = 0.25 + 1e-9;

// d ln C / d vt^mu_k for all modes (per-beta normalized at T = 0).
std::array<std::vector<double>, 3> coupling_derivatives(const MeanFieldSolution& mf,
                                                        const CouplingProfile& couplings, int n) {
  const detail::ModeState st = detail::make_state(mf);
  std::array<std::vector<double>, 3> d;
  for (auto& v : d) v.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto pk = detail::params_at(couplings, k);
    const auto vals = detail::compute_mode(st, pk);
    for (int mu = 0; mu < 3; ++mu)
      d[static_cast<size_t>(mu)][static_cast<size_t>(k)] =
          detail::mode_dcoupling(st, pk, vals, mu).dlnC;
  }
  return d;
}

}  // namespace

CorrelationSet correlations(const MeanFieldSolution& mf, const RpaSpectrum& rpa,
                            const CouplingProfile& couplings, const ChainSpec& chain) {
  const int n = chain.n;
  CorrelationSet out;
  out.n = n;
  out.critical = rpa.any_flagged;
  const auto mags = mf.mf_magnetizations();
  for (int mu = 0; mu < 3; ++mu)
    out.alpha_mf[static_cast<size_t>(mu)] = mags[static_cast<size_t>(mu)] * mags[static_cast<size_t>(mu)];

  const auto d = coupling_derivatives(mf, couplings, n);
  const double pref = chain.zero_temperature() ? 1.0 / n : chain.temperature / n;  // 1/(n beta)

  for (int mu = 0; mu < 3; ++mu) {
    auto& fluct = out.alpha_fluct[static_cast<size_t>(mu)];
    auto& alpha = out.alpha[static_cast<size_t>(mu)];
    fluct.assign(static_cast<size_t>(n), 0.0);
    alpha.assign(static_cast<size_t>(n), 0.0);
    double scale = 1.0;
    for (int k = 0; k < n; ++k) scale = std::max(scale, std::abs(d[static_cast<size_t>(mu)][static_cast<size_t>(k)]));
    for (int j = 1; j < n; ++j) {
      std::complex<double> acc = 0.0;
      for (int k = 0; k < n; ++k) {
        const double arg = 2.0 * std::numbers::pi * k * j / n;
        acc += d[static_cast<size_t>(mu)][static_cast<size_t>(k)] *
               std::complex<double>(std::cos(arg), std::sin(arg));
      }
      if (std::abs(acc.imag()) > 1e-10 * scale)
        throw Error("correlations: imaginary residue in the Fourier sum");
      fluct[static_cast<size_t>(j)] = pref * acc.real();
      alpha[static_cast<size_t>(j)] = out.alpha_mf[static_cast<size_t>(mu)] + fluct[static_cast<size_t>(j)];
      if (std::abs(alpha[static_cast<size_t>(j)]) > kSpinBound) out.spin_bound_violated = true;
    }
    alpha[0] = 0.25;
    fluct[0] = 0.25 - out.alpha_mf[static_cast<size_t>(mu)];
  }

  out.sz = sz_expectation(mf, rpa, couplings, chain);
  if (std::abs(out.sz) > 0.5 + 1e-9) out.spin_bound_violated = true;
  return out;
}

double sz_expectation(const MeanFieldSolution& mf, const RpaSpectrum&,
                      const CouplingProfile& couplings, const ChainSpec& chain) {
  if (chain.b == 0.0) return 0.0;  // S_z parity plus field-free spin-flip symmetry
  const detail::ModeState st = detail::make_state(mf);
  const int n = chain.n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto pk = detail::params_at(couplings, k);
    const auto vals = detail::compute_mode(st, pk);
    sum += detail::mode_dfield(st, pk, vals).dlnC;
  }
  const double pref = chain.zero_temperature() ? 1.0 / n : chain.temperature / n;
  return 0.5 * mf.gamma[2] * mf.f - pref * sum;
}

void verify_coupling_derivatives(const MeanFieldSolution& mf, const CouplingProfile& couplings,
                                 const ChainSpec& chain, double rel_tol) {
  const detail::ModeState st = detail::make_state(mf);
  const double step = 1e-6 * std::max(1.0, std::abs(couplings.v0(kX)));
  for (int k = 0; k < chain.n; ++k) {
    const auto pk = detail::params_at(couplings, k);
    const auto vals = detail::compute_mode(st, pk);
    for (int mu = 0; mu < 3; ++mu) {
      const double analytic = detail::mode_dcoupling(st, pk, vals, mu).dlnC;
      auto shifted = [&](double eps) {
        detail::ModeParams p = pk;
        (mu == 0 ? p.vx : mu == 1 ? p.vy : p.vz) += eps;
        return detail::compute_mode(st, p).ln_contrib;
      };
      const double fd = (shifted(step) - shifted(-step)) / (2.0 * step);
      const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-8});
      if (std::abs(analytic - fd) > rel_tol * scale)
        throw DerivativeMismatch("d ln C / d vt mismatch at k = " + std::to_string(k) +
                                 ", mu = " + std::to_string(mu) + ": analytic " +
                                 std::to_string(analytic) + " vs fd " + std::to_string(fd));
    }
  }
}

TwoSiteDensity two_site_rho(const CorrelationSet& corr, int j) {
  const double ax = corr.alpha[0][static_cast<size_t>(j)];
  const double ay = corr.alpha[1][static_cast<size_t>(j)];
  const double az = corr.alpha[2][static_cast<size_t>(j)];
  const double sz = corr.sz;

  TwoSiteDensity out;
  out.p_plus = 0.25 + az + sz;
  out.p_minus = 0.25 + az - sz;
  out.negative_probability = out.p_plus < -1e-9 || out.p_minus < -1e-9;
  out.rho.setZero();
  out.rho(0, 0) = out.p_plus;
  out.rho(3, 3) = out.p_minus;
  out.rho(1, 1) = out.rho(2, 2) = 0.25 - az;
  out.rho(0, 3) = out.rho(3, 0) = ax - ay;
  out.rho(1, 2) = out.rho(2, 1) = ax + ay;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(out.rho, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  return out;
}

ConcurrenceProfile concurrence_profile(const CorrelationSet& corr) {
  const int n = corr.n;
  ConcurrenceProfile out;
  out.n = n;
  out.critical = corr.critical;
  out.c_plus.assign(static_cast<size_t>(n), 0.0);
  out.c_minus.assign(static_cast<size_t>(n), 0.0);
  out.c.assign(static_cast<size_t>(n), 0.0);
  out.kind.assign(static_cast<size_t>(n), PairKind::Separable);
  for (int j = 1; j < n; ++j) {
    const double ax = corr.alpha[0][static_cast<size_t>(j)];
    const double ay = corr.alpha[1][static_cast<size_t>(j)];
    const double az = corr.alpha[2][static_cast<size_t>(j)];
    const double cp = 2.0 * (std::abs(ax - ay) + az - 0.25);
    const double arg = (0.25 + az) * (0.25 + az) - corr.sz * corr.sz;
    const double cm = 2.0 * (std::abs(ax + ay) - std::sqrt(std::max(0.0, arg)));
    out.c_plus[static_cast<size_t>(j)] = cp;
    out.c_minus[static_cast<size_t>(j)] = cm;
    const double c = std::max({cp, cm, 0.0});
    out.c[static_cast<size_t>(j)] = c;
    out.kind[static_cast<size_t>(j)] =
        c <= 0.0 ? PairKind::Separable : (cp >= cm ? PairKind::Parallel : PairKind::Antiparallel);
  }
  return out;
}

CmfSolution solve_cmf(const ChainSpec& chain, const CouplingProfile& couplings) {
  CmfSolution s;
  s.mf = solve_uniform_mf(chain, couplings);
  s.rpa = rpa_spectrum(s.mf, couplings, chain);
  s.corr = correlations(s.mf, s.rpa, couplings, chain);
  s.conc = concurrence_profile(s.corr);
  return s;
}

double limit_temperature_scan(int j, double b, const CouplingProfile& couplings, int n) {
  auto raw_c = [&](double T) {
    const ChainSpec chain{n, b, T};
    const CmfSolution s = solve_cmf(chain, couplings);
    return std::max(s.conc.c_plus[static_cast<size_t>(j)], s.conc.c_minus[static_cast<size_t>(j)]);
  };

  const double c0 = raw_c(0.0);
  if (c0 <= 0.0)
    throw NoPositiveConcurrence("C_" + std::to_string(j) + "(T = 0) = " + std::to_string(c0));

  const double lambda = std::abs(b) + couplings.v0(kZ);
  double hi = c0 < 2.0 ? lambda / std::log(2.0 / c0) : lambda;
  double lo = 0.0;
  int expand = 0;
  while (raw_c(hi) > 0.0) {
    lo = hi;
    hi *= 1.5;
    if (++expand > 120) throw NoConvergence("limit temperature bracket not found");
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (raw_c(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace cmf
