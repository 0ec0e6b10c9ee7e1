#include "cmf/rpa_core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cmf/detail/rpa_mode.hpp"

namespace cmf {

using detail::make_state;
using detail::params_at;

LocalSpectrum local_spectrum(const MeanFieldSolution& mf, double temperature) {
  LocalSpectrum spec;
  spec.lambda = mf.lambda;
  spec.gamma = mf.gamma;
  spec.zero_temperature = temperature == 0.0;
  spec.beta = spec.zero_temperature ? 0.0 : 1.0 / temperature;
  spec.energies = {-0.5 * mf.lambda, 0.5 * mf.lambda};
  if (spec.zero_temperature) {
    spec.f = 1.0;
    spec.p_ground = 1.0;
    spec.p_excited = 0.0;
    spec.fol = mf.lambda > 0.0 ? 1.0 / mf.lambda : 0.0;
  } else {
    spec.f = std::tanh(0.5 * spec.beta * mf.lambda);
    spec.p_ground = 0.5 * (1.0 + spec.f);
    spec.p_excited = 0.5 * (1.0 - spec.f);
    spec.fol = mf.f_over_lambda;
  }

  // Local Hamiltonian (b - phi).s = -lambda gamma.s in the sigma_z basis.
  Eigen::Matrix2cd h;
  const double gx = mf.gamma[0], gy = mf.gamma[1], gz = mf.gamma[2];
  h << -0.5 * mf.lambda * gz, -0.5 * mf.lambda * std::complex<double>(gx, -gy),
      -0.5 * mf.lambda * std::complex<double>(gx, gy), 0.5 * mf.lambda * gz;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
  const Eigen::Vector2cd g = es.eigenvectors().col(0);
  const Eigen::Vector2cd e = es.eigenvectors().col(1);

  const std::complex<double> I(0.0, 1.0);
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0.0, 0.5, 0.5, 0.0;
  sy << 0.0, -0.5 * I, 0.5 * I, 0.0;
  sz << 0.5, 0.0, 0.0, -0.5;
  spec.a = {g.dot(sx * e), g.dot(sy * e), g.dot(sz * e)};
  return spec;
}

Eigen::Matrix3cd local_response(const LocalSpectrum& spec, std::complex<double> omega) {
  const double tol = 1e-12 * std::max(1.0, spec.lambda);
  if (std::abs(omega - spec.lambda) < tol || std::abs(omega + spec.lambda) < tol)
    throw PoleHit("local response evaluated at a transition energy");
  Eigen::Matrix3cd r = Eigen::Matrix3cd::Zero();
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu) {
      const std::complex<double> m = spec.a[static_cast<size_t>(mu)] *
                                     std::conj(spec.a[static_cast<size_t>(nu)]);
      r(mu, nu) = spec.f * (m / (omega - spec.lambda) - std::conj(m) / (omega + spec.lambda));
    }
  return r;
}

Eigen::Matrix3d local_susceptibility(const LocalSpectrum& spec) {
  const Eigen::Vector3d g(spec.gamma[0], spec.gamma[1], spec.gamma[2]);
  const Eigen::Matrix3d gg = g * g.transpose();
  const double h = spec.zero_temperature
                       ? 0.0
                       : 0.5 * spec.beta * detail::sech2_half(spec.beta * spec.lambda);
  return -0.5 * (spec.fol * (Eigen::Matrix3d::Identity() - gg) + h * gg);
}

Eigen::Matrix3d rpa_coupling_matrix(const CouplingProfile& couplings, int k) {
  Eigen::Matrix3d v = Eigen::Matrix3d::Zero();
  for (int mu = 0; mu < 3; ++mu) v(mu, mu) = 2.0 * couplings.vt(mu, k);
  return v;
}

std::array<std::complex<double>, 2> rpa_energies_generic(const Eigen::Matrix3d& vk,
                                                         const LocalSpectrum& spec) {
  Eigen::Vector3cd a(spec.a[0], spec.a[1], spec.a[2]);
  const std::complex<double> w1 = a.adjoint() * vk * a;  // real for symmetric vk
  const std::complex<double> w2 = a.transpose() * vk * a;

  Eigen::Matrix2cd m;
  m << spec.lambda - spec.f * w1, -spec.f * w2,
      spec.f * std::conj(w2), -spec.lambda + spec.f * std::real(w1);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
  std::array<std::complex<double>, 2> ev{es.eigenvalues()(0), es.eigenvalues()(1)};
  if (ev[0].real() < ev[1].real()) std::swap(ev[0], ev[1]);

  const double scale = std::max(1.0, std::abs(ev[0]));
  if (std::abs(ev[0].imag()) > 1e-9 * scale || std::abs(ev[1].imag()) > 1e-9 * scale)
    throw ComplexEigenvalue("RPA matrix eigenvalues left the real axis (instability)");
  return ev;
}

double rpa_energy_closed(int k, const MeanFieldSolution& mf, const CouplingProfile& couplings) {
  const auto v = detail::compute_mode(make_state(mf), params_at(couplings, k), false);
  return v.omega;
}

double static_correction(int k, const MeanFieldSolution& mf, const CouplingProfile& couplings,
                         double temperature) {
  if (temperature == 0.0) return 1.0;
  detail::ModeState st = make_state(mf);
  if (temperature != mf.temperature) {
    st.zero_t = false;
    st.beta = 1.0 / temperature;
    st.f = std::tanh(0.5 * st.beta * mf.lambda);
    st.fol = detail::stable_f_over_lambda(mf.lambda, st.beta);
  }
  return detail::compute_mode(st, params_at(couplings, k)).c0;
}

double static_factor_determinant(int k, const MeanFieldSolution& mf,
                                 const CouplingProfile& couplings, double temperature) {
  const LocalSpectrum spec = local_spectrum(mf, temperature);
  const Eigen::Matrix3d vk = rpa_coupling_matrix(couplings, k);
  const double det = (Eigen::Matrix3d::Identity() + vk * local_susceptibility(spec)).determinant();
  if (det <= 0.0) throw StaticInstability("static RPA determinant non-positive");
  const double omega = rpa_energy_closed(k, mf, couplings);
  return omega / (mf.lambda * std::sqrt(det));
}

double static_factor_reformulated(int k, const MeanFieldSolution& mf,
                                  const CouplingProfile& couplings, double temperature) {
  if (temperature == 0.0)
    throw DomainError("reformulated static factor is a T > 0 cross-check");
  const LocalSpectrum spec = local_spectrum(mf, temperature);
  const Eigen::Matrix3d vk = rpa_coupling_matrix(couplings, k);
  const Eigen::Matrix3d r_dyn0 = local_response(spec, 0.0).real();
  const Eigen::Matrix3d r0 = local_susceptibility(spec);
  const Eigen::Matrix3d rp =
      (r0 - r_dyn0) * (Eigen::Matrix3d::Identity() + vk * r_dyn0).inverse();
  const double det = (Eigen::Matrix3d::Identity() + vk * rp).determinant();
  if (det <= 0.0) throw StaticInstability("reformulated static determinant non-positive");
  return 1.0 / std::sqrt(det);
}

RpaSpectrum rpa_spectrum(const MeanFieldSolution& mf, const CouplingProfile& couplings,
                         const ChainSpec& chain) {
  const detail::ModeState st = make_state(mf);
  RpaSpectrum spectrum;
  spectrum.omega.resize(static_cast<size_t>(chain.n));
  spectrum.c0.resize(static_cast<size_t>(chain.n));
  spectrum.flags.assign(static_cast<size_t>(chain.n), 0);
  for (int k = 0; k < chain.n; ++k) {
    const auto v = detail::compute_mode(st, params_at(couplings, k));
    spectrum.omega[static_cast<size_t>(k)] = v.omega;
    spectrum.c0[static_cast<size_t>(k)] = v.c0;
    std::uint8_t flag = 0;
    if (v.critical) flag |= kModeCritical;
    if (v.static_near_singular) flag |= kModeStaticNearSingular;
    spectrum.flags[static_cast<size_t>(k)] = flag;
    if (flag) spectrum.any_flagged = true;
  }
  return spectrum;
}

LogCorrection log_correction(const MeanFieldSolution& mf, const CouplingProfile& couplings,
                             const ChainSpec& chain) {
  const detail::ModeState st = make_state(mf);
  LogCorrection out;
  out.per_beta_normalized = chain.zero_temperature();
  out.per_mode.resize(static_cast<size_t>(chain.n));
  for (int k = 0; k < chain.n; ++k) {
    const auto v = detail::compute_mode(st, params_at(couplings, k));
    out.per_mode[static_cast<size_t>(k)] = v.ln_contrib;
    out.value += v.ln_contrib;
  }
  return out;
}

PartitionCmf partition_cmf(const MeanFieldSolution& mf, const CouplingProfile& couplings,
                           const ChainSpec& chain) {
  PartitionCmf out;
  out.zero_temperature = chain.zero_temperature();
  const LogCorrection corr = log_correction(mf, couplings, chain);
  const double n = static_cast<double>(chain.n);
  if (out.zero_temperature) {
    out.mf_part = n * mf.free_energy;   // free energy and energy coincide at T = 0
    out.correction = -corr.value;       // sum_k (omega_k - lambda)/2
    out.energy = out.mf_part + out.correction;
  } else {
    const double beta = chain.beta();
    out.mf_part = -n * beta * mf.free_energy;
    out.correction = corr.value;
    out.log_z = out.mf_part + out.correction;
  }
  return out;
}

}  // namespace cmf
