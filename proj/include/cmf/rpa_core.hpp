#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "cmf/meanfield.hpp"
#include "cmf/model.hpp"

namespace cmf {

/// Spectrum of the 2x2 local mean-field Hamiltonian (b^mu - phi^mu) s_mu,
/// with occupations and the transition amplitudes a_mu = <g|s_mu|e> between
/// the ground and excited local states. The gap equals the mean-field lambda.
struct LocalSpectrum {
  double lambda = 0.0;
  double f = 0.0;    ///< p_ground - p_excited = tanh(beta lambda / 2)
  double fol = 0.0;  ///< f / lambda, stable near lambda = 0
  std::array<double, 3> gamma{0.0, 0.0, -1.0};
  double beta = 0.0;
  bool zero_temperature = true;
  double p_ground = 1.0;
  double p_excited = 0.0;
  std::array<double, 2> energies{0.0, 0.0};  ///< {-lambda/2, +lambda/2}
  std::array<std::complex<double>, 3> a{};   ///< <g|s_mu|e>, defined up to a global phase
};

LocalSpectrum local_spectrum(const MeanFieldSolution& mf, double temperature);

/// Dynamic local response r_{mu nu}(omega) from the sum over level pairs.
/// Throws PoleHit when omega coincides with +-lambda.
Eigen::Matrix3cd local_response(const LocalSpectrum& spec, std::complex<double> omega);

/// Static susceptibility r^0_{mu nu} = -d<s_mu>/d phi^nu (the omega = 0
/// response plus the occupation-derivative term).
Eigen::Matrix3d local_susceptibility(const LocalSpectrum& spec);

/// Coupling matrix of mode k as it enters the quadratic form of the
/// Hamiltonian: twice the bare Fourier tables, diagonal in the axes.
Eigen::Matrix3d rpa_coupling_matrix(const CouplingProfile& couplings, int k);

/// Eigenvalues of the 2x2 RPA matrix a_{alpha alpha'} for one mode, built
/// from the quadratic-form coupling matrix vk (see rpa_coupling_matrix).
/// They come in a pair of opposite sign; sorted descending by real part.
/// Throws ComplexEigenvalue if the pair acquires an imaginary part.
std::array<std::complex<double>, 2> rpa_energies_generic(const Eigen::Matrix3d& vk,
                                                         const LocalSpectrum& spec);

/// Closed-form RPA energy of mode k. Throws RpaInstability when the radicand
/// turns negative (approaching b_c from the normal side).
double rpa_energy_closed(int k, const MeanFieldSolution& mf, const CouplingProfile& couplings);

/// Static correction factor c^0_k; exactly 1 at T = 0.
/// Throws StaticInstability when the square-root argument is non-positive.
double static_correction(int k, const MeanFieldSolution& mf, const CouplingProfile& couplings,
                         double temperature);

/// Static factor of one mode computed through the determinant route
/// (omega_k / lambda) * Det[1 + vk r0]^(-1/2); equals c^0_k.
double static_factor_determinant(int k, const MeanFieldSolution& mf,
                                 const CouplingProfile& couplings, double temperature);

/// Static factor through the reformulated kernel built from
/// r'0 = [r0 - r(0)][1 + vk r(0)]^(-1), which drops the omega/lambda
/// prefactor; T > 0 only. Cross-check path.
double static_factor_reformulated(int k, const MeanFieldSolution& mf,
                                  const CouplingProfile& couplings, double temperature);

inline constexpr std::uint8_t kModeCritical = 1;           ///< omega_k^2 < 1e-10 lambda^2
inline constexpr std::uint8_t kModeStaticNearSingular = 2; ///< |1 - S_k| < 1e-10

/// Per-mode RPA energies and static correction factors with stability flags.
struct RpaSpectrum {
  std::vector<double> omega;
  std::vector<double> c0;
  std::vector<std::uint8_t> flags;
  bool any_flagged = false;
};

RpaSpectrum rpa_spectrum(const MeanFieldSolution& mf, const CouplingProfile& couplings,
                         const ChainSpec& chain);

/// ln C(phi) and its per-mode contributions. At T = 0 the per-beta limit
/// beta^-1 ln C = sum_k (lambda - omega_k)/2 is returned instead (flagged by
/// per_beta_normalized).
struct LogCorrection {
  double value = 0.0;
  bool per_beta_normalized = false;
  std::vector<double> per_mode;
};

LogCorrection log_correction(const MeanFieldSolution& mf, const CouplingProfile& couplings,
                             const ChainSpec& chain);

/// ln Z_CMF (T > 0) or the CMF ground-state energy E = <H(phi)>_phi
/// + (1/2) sum_k (omega_k - lambda) (T = 0), with the mean-field and
/// correction parts reported separately.
struct PartitionCmf {
  bool zero_temperature = false;
  double log_z = 0.0;       ///< total ln Z_CMF; meaningful at T > 0
  double energy = 0.0;      ///< total E_CMF; meaningful at T = 0
  double mf_part = 0.0;     ///< ln Z_MF or E_MF
  double correction = 0.0;  ///< ln C or the RPA energy shift
};

PartitionCmf partition_cmf(const MeanFieldSolution& mf, const CouplingProfile& couplings,
                           const ChainSpec& chain);

}  // namespace cmf
