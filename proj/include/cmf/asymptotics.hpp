#pragma once

#include <vector>

#include "cmf/model.hpp"

namespace cmf {

/// Inputs of the strong-field concurrence estimate: the symmetric-antisymmetric
/// combinations v_+-(j) = (v^x(j) +- v^y(j))/2 and the gap lambda = b + f vt^z_0.
struct StrongFieldInputs {
  int n = 0;
  std::vector<double> v_plus;   ///< index = separation, slot 0 = 0
  std::vector<double> v_minus;
  double lambda = 0.0;
  double b = 0.0;
};

StrongFieldInputs make_strong_field_inputs(const CouplingProfile& couplings, double b,
                                           double f = 1.0);

/// Second-order strong-field estimate of the parallel concurrence C+_j
/// (may be negative; valid for b well above b_c). Convolution indices are
/// cyclic and the tables carry no self-coupling slot.
double strong_field_concurrence(int j, const StrongFieldInputs& in, int n);

/// Leading thermal correction C+_j(T) = C+_j(0) - 2 exp(-lambda/T) (raw value,
/// not clipped at zero).
double thermal_corrected_concurrence(double c0, double lambda, double T);

/// Limit temperature estimate T+_j = lambda / ln(2 / C+_j(0)); requires
/// 0 < c0 < 2.
double limit_temperature_estimate(double c0, double lambda);

/// Slope coefficients gamma_j of the concurrence linearization around the
/// factorizing field, for a common range profile r(j) with sum_j r(j) = 1.
struct FactorizationSlope {
  std::vector<double> gamma;  ///< index = separation, slot 0 unused
  int order = 0;              ///< truncation order of the convolution-series cross-check
  double chi = 0.0;
};

/// gamma_j for all separations, computed by the closed k-sum and verified
/// against the truncated convolution series within its tail bound.
/// r_profile has length n with slot 0 = 0. Throws SeriesDivergence when
/// |chi| max_k r_k >= 1.
FactorizationSlope factorization_slopes(const std::vector<double>& r_profile, double chi, int order);

double factorization_slope(int j, const std::vector<double>& r_profile, double chi, int n, int order);

/// Linearized concurrence near b_s: C+-_j = +-gamma_j (b_s/b_c)(b - b_s)/v^x.
struct NearFactorization {
  double c_plus = 0.0;
  double c_minus = 0.0;
};

NearFactorization near_factorization_concurrence(int j, double b, double b_s, double b_c,
                                                 double vx, double gamma_j);

}  // namespace cmf
