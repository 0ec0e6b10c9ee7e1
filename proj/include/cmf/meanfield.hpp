#pragma once

#include <array>
#include <optional>

#include "cmf/model.hpp"

namespace cmf {

enum class MfBranch { Normal, ParityBroken };

/// Uniform mean-field solution of the self-consistency equations
/// phi^mu = vt^mu_0 (phi^mu - b^mu)/lambda * tanh(beta lambda / 2).
///
/// Treated regime: vt^x_0 > |vt^y_0|, vt^z_0 >= 0 and b_c > 0, where the
/// lowest solution has phi^y = 0. The parity-broken solutions come in a
/// +-phi^x pair; the representative with phi^x >= 0 is returned (observables
/// depend on even powers only).
struct MeanFieldSolution {
  std::array<double, 3> phi{0.0, 0.0, 0.0};
  double lambda = 0.0;  ///< |phi - b|, the local gap
  /// Direction cosines (phi^mu - b^mu)/lambda. At the lambda -> 0 point
  /// (b = 0 above T_c with vt^z_0 = 0) the b -> 0+ limit (0,0,-1) is stored.
  std::array<double, 3> gamma{0.0, 0.0, -1.0};
  double f = 0.0;              ///< tanh(beta lambda / 2); exactly 1 at T = 0
  double f_over_lambda = 0.0;  ///< f / lambda evaluated stably near lambda = 0
  MfBranch branch = MfBranch::Normal;
  double free_energy = 0.0;  ///< per site; at T = 0 this is the MF energy per site
  double b = 0.0;
  double temperature = 0.0;

  std::array<double, 3> mf_magnetizations() const {
    return {0.5 * gamma[0] * f, 0.5 * gamma[1] * f, 0.5 * gamma[2] * f};
  }
};

/// Critical field b_c = vt^x_0 - vt^z_0.
double critical_field(const CouplingProfile& couplings);

/// Temperature above which the parity-broken branch disappears at |b| < b_c;
/// std::nullopt for |b| >= b_c. Tends to vt^x_0 / 2 as b -> 0.
std::optional<double> critical_temperature(double b, const CouplingProfile& couplings);

/// Factorizing field b_s = sqrt((v^x - v^z)(v^y - v^z)) for common-range
/// couplings; requires v^z <= v^y < v^x (throws NotFactorizable otherwise).
double factorizing_field(double vx, double vy, double vz);

/// Solves the uniform mean field and returns the lowest-free-energy branch.
/// T = 0 uses the closed-form branch solutions directly.
MeanFieldSolution solve_uniform_mf(const ChainSpec& chain, const CouplingProfile& couplings);

/// Max over mu of the self-consistency residual |phi^mu - vt^mu_0 gamma_mu f|.
double mf_residual(const MeanFieldSolution& mf, const CouplingProfile& couplings);

}  // namespace cmf
