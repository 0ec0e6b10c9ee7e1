#include "cmf/meanfield.hpp"

#include <cmath>

#include "cmf/detail/rpa_mode.hpp"

namespace cmf {

namespace {

using detail::stable_f_over_lambda;

constexpr double kRelax = 0.5;
constexpr double kTol = 1e-12;
constexpr int kMaxIter = 100000;

double ln_2cosh(double x) {
  x = std::abs(x);
  return x + std::log1p(std::exp(-2.0 * x));
}

void check_treated_regime(const CouplingProfile& couplings) {
  const double wx = couplings.v0(kX);
  const double wy = couplings.v0(kY);
  const double wz = couplings.v0(kZ);
  const bool free_spins = wx == 0.0 && wy == 0.0 && wz == 0.0;
  if (free_spins) return;
  if (!(wx > std::abs(wy)) || wz < 0.0 || wx < wz)
    throw OutsideTreatedRegime("attractive anisotropic regime requires vt^x_0 > |vt^y_0|, "
                               "0 <= vt^z_0 <= vt^x_0");
}

// Solves x = base + w * tanh(beta x / 2) by damped iteration from x0.
double solve_gap(double base, double w, double beta, double x0) {
  double x = x0;
  for (int it = 0; it < kMaxIter; ++it) {
    const double next = (1.0 - kRelax) * x + kRelax * (base + w * std::tanh(0.5 * beta * x));
    if (std::abs(next - x) < kTol * std::max(1.0, std::abs(next))) return next;
    x = next;
  }
  throw NoConvergence("mean-field gap iteration stalled (base = " + std::to_string(base) + ")");
}

double free_energy_per_site(const std::array<double, 3>& phi, double lambda,
                            const CouplingProfile& couplings, double temperature) {
  double quad = 0.0;
  for (int mu = 0; mu < 3; ++mu) {
    const double w = couplings.v0(mu);
    if (w != 0.0) quad += phi[static_cast<size_t>(mu)] * phi[static_cast<size_t>(mu)] / (4.0 * w);
  }
  if (temperature == 0.0) return quad - 0.5 * lambda;
  return quad - temperature * ln_2cosh(0.5 * lambda / temperature);
}

MeanFieldSolution make_solution(MfBranch branch, const std::array<double, 3>& phi,
                                const ChainSpec& chain, const CouplingProfile& couplings) {
  MeanFieldSolution mf;
  mf.branch = branch;
  mf.phi = phi;
  mf.b = chain.b;
  mf.temperature = chain.temperature;
  const double dx = phi[0];
  const double dz = phi[2] - chain.b;
  mf.lambda = std::hypot(dx, dz);
  if (mf.lambda > 0.0) {
    mf.gamma = {dx / mf.lambda, 0.0, dz / mf.lambda};
  } else {
    mf.gamma = {0.0, 0.0, chain.b < 0.0 ? 1.0 : -1.0};
  }
  if (chain.zero_temperature()) {
    mf.f = 1.0;
    mf.f_over_lambda = mf.lambda > 0.0 ? 1.0 / mf.lambda : 0.0;
  } else {
    const double beta = chain.beta();
    mf.f = std::tanh(0.5 * beta * mf.lambda);
    mf.f_over_lambda = stable_f_over_lambda(mf.lambda, beta);
  }
  mf.free_energy = free_energy_per_site(phi, mf.lambda, couplings, chain.temperature);
  return mf;
}

MeanFieldSolution solve_normal(const ChainSpec& chain, const CouplingProfile& couplings) {
  const double wz = couplings.v0(kZ);
  const double ab = std::abs(chain.b);
  double lambda;
  if (chain.zero_temperature()) {
    lambda = ab + wz;
  } else if (wz == 0.0) {
    lambda = ab;
  } else {
    lambda = solve_gap(ab, wz, chain.beta(), ab + wz);
  }
  const double f = chain.zero_temperature() ? 1.0 : std::tanh(0.5 * lambda / chain.temperature);
  const double sign = chain.b < 0.0 ? 1.0 : -1.0;
  return make_solution(MfBranch::Normal, {0.0, 0.0, sign * wz * f}, chain, couplings);
}

std::optional<MeanFieldSolution> solve_broken(const ChainSpec& chain, const CouplingProfile& couplings) {
  const double wx = couplings.v0(kX);
  const double wz = couplings.v0(kZ);
  const double bc = wx - wz;
  if (bc <= 0.0 || std::abs(chain.b) >= bc) return std::nullopt;

  double lambda;
  if (chain.zero_temperature()) {
    lambda = wx;
  } else {
    if (0.5 * wx / chain.temperature <= 1.0) return std::nullopt;  // only the trivial root
    lambda = solve_gap(0.0, wx, chain.beta(), wx);
    if (lambda < 1e-10 * wx) return std::nullopt;
  }
  const double phi_z = -wz * chain.b / bc;
  const double dz = phi_z - chain.b;  // = -b wx / bc
  const double phix2 = lambda * lambda - dz * dz;
  if (phix2 <= 0.0) return std::nullopt;
  return make_solution(MfBranch::ParityBroken, {std::sqrt(phix2), 0.0, phi_z}, chain, couplings);
}

}  // namespace

double critical_field(const CouplingProfile& couplings) {
  check_treated_regime(couplings);
  return couplings.v0(kX) - couplings.v0(kZ);
}

std::optional<double> critical_temperature(double b, const CouplingProfile& couplings) {
  const double bc = critical_field(couplings);
  const double wx = couplings.v0(kX);
  const double ab = std::abs(b);
  if (ab >= bc) return std::nullopt;
  if (ab == 0.0) return 0.5 * wx;
  // The broken branch ends where tanh(beta lambda / 2) = |b|/b_c at
  // lambda = |b| wx / b_c; for vt^z_0 = 0 this is |b|/ln((b_c+|b|)/(b_c-|b|)).
  const double log_ratio = std::log1p(ab / bc) - std::log1p(-ab / bc);
  return ab * wx / (bc * log_ratio);
}

double factorizing_field(double vx, double vy, double vz) {
  if (!(vz <= vy) || !(vy < vx))
    throw NotFactorizable("factorizing field requires v^z <= v^y < v^x");
  return std::sqrt((vx - vz) * (vy - vz));
}

MeanFieldSolution solve_uniform_mf(const ChainSpec& chain, const CouplingProfile& couplings) {
  chain.validate();
  check_treated_regime(couplings);

  const MeanFieldSolution normal = solve_normal(chain, couplings);
  const std::optional<MeanFieldSolution> broken = solve_broken(chain, couplings);
  if (broken && broken->free_energy < normal.free_energy) return *broken;
  return normal;
}

double mf_residual(const MeanFieldSolution& mf, const CouplingProfile& couplings) {
  double res = 0.0;
  for (int mu = 0; mu < 3; ++mu) {
    const double target = couplings.v0(mu) * mf.gamma[static_cast<size_t>(mu)] * mf.f;
    res = std::max(res, std::abs(mf.phi[static_cast<size_t>(mu)] - target));
  }
  return res;
}

}  // namespace cmf
