#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "cmf/rpa_core.hpp"

namespace cmf {

/// Per-separation correlators alpha_{mu j} = <S_{mu i} S_{mu, i+j}> split into
/// the mean-field part <s_mu>^2 and the fluctuation part alpha^c.
/// Tables are indexed by separation 0..n-1; slot 0 holds the identity value
/// <s_mu^2> = 1/4.
struct CorrelationSet {
  int n = 0;
  std::array<std::vector<double>, 3> alpha;
  std::array<double, 3> alpha_mf{};
  std::array<std::vector<double>, 3> alpha_fluct;
  double sz = 0.0;  ///< per-site <s_z> including the fluctuation correction
  bool critical = false;             ///< propagated RPA stability flags
  bool spin_bound_violated = false;  ///< |alpha| > 1/4 + 1e-9 somewhere (reported, never clamped)
};

/// Correlators from the analytic coupling derivatives of ln C at fixed phi.
CorrelationSet correlations(const MeanFieldSolution& mf, const RpaSpectrum& rpa,
                            const CouplingProfile& couplings, const ChainSpec& chain);

/// Per-site <s_z> = -(n beta)^-1 d ln Z_CMF / d b with the RPA part evaluated
/// analytically at fixed phi. Exactly 0 at b = 0.
double sz_expectation(const MeanFieldSolution& mf, const RpaSpectrum& rpa,
                      const CouplingProfile& couplings, const ChainSpec& chain);

/// Finite-difference self-test of the analytic d ln C / d vt^mu_k used by
/// correlations(); throws DerivativeMismatch beyond rel_tol.
void verify_coupling_derivatives(const MeanFieldSolution& mf, const CouplingProfile& couplings,
                                 const ChainSpec& chain, double rel_tol = 1e-6);

/// Two-site reduced density matrix in the standard basis (X-form).
struct TwoSiteDensity {
  Eigen::Matrix4d rho;
  double p_plus = 0.0;
  double p_minus = 0.0;
  double min_eigenvalue = 0.0;       ///< can be slightly negative (approximate correlators)
  bool negative_probability = false; ///< p^+- < -1e-9
};

TwoSiteDensity two_site_rho(const CorrelationSet& corr, int j);

enum class PairKind { Parallel, Antiparallel, Separable };

/// Parallel / antiparallel concurrence candidates and C_j = max(C+, C-, 0)
/// per separation; at most one candidate is positive.
struct ConcurrenceProfile {
  int n = 0;
  std::vector<double> c_plus, c_minus, c;
  std::vector<PairKind> kind;
  bool critical = false;
};

ConcurrenceProfile concurrence_profile(const CorrelationSet& corr);

/// Full CMF pipeline for one parameter point.
struct CmfSolution {
  MeanFieldSolution mf;
  RpaSpectrum rpa;
  CorrelationSet corr;
  ConcurrenceProfile conc;
};

CmfSolution solve_cmf(const ChainSpec& chain, const CouplingProfile& couplings);

/// Temperature at which C_j vanishes, located by bisection to 1e-6 absolute.
/// Requires C_j(T = 0) > 0 (throws NoPositiveConcurrence otherwise).
double limit_temperature_scan(int j, double b, const CouplingProfile& couplings, int n);

}  // namespace cmf
