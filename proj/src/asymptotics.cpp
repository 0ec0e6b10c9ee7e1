#include "cmf/asymptotics.hpp"

#include <cmath>
#include <numbers>

namespace cmf {

StrongFieldInputs make_strong_field_inputs(const CouplingProfile& couplings, double b, double f) {
  StrongFieldInputs in;
  in.n = couplings.n;
  in.b = b;
  in.lambda = b + f * couplings.v0(kZ);
  in.v_plus.resize(static_cast<size_t>(couplings.n), 0.0);
  in.v_minus.resize(static_cast<size_t>(couplings.n), 0.0);
  for (int j = 1; j < couplings.n; ++j) {
    in.v_plus[static_cast<size_t>(j)] = 0.5 * (couplings.v(kX, j) + couplings.v(kY, j));
    in.v_minus[static_cast<size_t>(j)] = 0.5 * (couplings.v(kX, j) - couplings.v(kY, j));
  }
  return in;
}

double strong_field_concurrence(int j, const StrongFieldInputs& in, int n) {
  const double lam = in.lambda;
  double conv = 0.0;
  double sum_m2 = 0.0;
  for (int i = 1; i < n; ++i) {
    const int d = ((j - i) % n + n) % n;
    conv += in.v_plus[static_cast<size_t>(d)] * in.v_minus[static_cast<size_t>(i)];
    sum_m2 += in.v_minus[static_cast<size_t>(i)] * in.v_minus[static_cast<size_t>(i)];
  }
  return std::abs(in.v_minus[static_cast<size_t>(j)] / lam + conv / (lam * lam)) -
         0.5 * sum_m2 / (lam * lam);
}

double thermal_corrected_concurrence(double c0, double lambda, double T) {
  if (T == 0.0) return c0;
  return c0 - 2.0 * std::exp(-lambda / T);
}

double limit_temperature_estimate(double c0, double lambda) {
  if (!(c0 > 0.0) || !(c0 < 2.0))
    throw DomainError("limit temperature estimate needs 0 < C(0) < 2, got " + std::to_string(c0));
  return lambda / std::log(2.0 / c0);
}

FactorizationSlope factorization_slopes(const std::vector<double>& r_profile, double chi,
                                        int order) {
  const int n = static_cast<int>(r_profile.size());
  if (order < 1) throw DomainError("series truncation order must be >= 1");

  const std::vector<double> rk = fourier_couplings(r_profile);
  double rmax = 0.0;
  for (double r : rk) rmax = std::max(rmax, std::abs(r));
  const double q = std::abs(chi) * rmax;
  if (q >= 1.0)
    throw SeriesDivergence("factorization slope series diverges: |chi| max_k r_k = " +
                           std::to_string(q));

  FactorizationSlope out;
  out.chi = chi;
  out.order = order;
  out.gamma.assign(static_cast<size_t>(n), 0.0);

  // closed k-sum
  for (int j = 1; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
      acc += std::cos(2.0 * std::numbers::pi * k * j / n) * rk[static_cast<size_t>(k)] /
             (1.0 - chi * rk[static_cast<size_t>(k)]);
    out.gamma[static_cast<size_t>(j)] = acc / n;
  }

  // truncated convolution series, checked against the k-sum within the tail bound
  std::vector<double> conv = r_profile;  // r^(m+1), starting at m = 0
  std::vector<double> series(static_cast<size_t>(n), 0.0);
  double chi_pow = 1.0;
  for (int m = 0; m <= order; ++m) {
    for (int j = 0; j < n; ++j) series[static_cast<size_t>(j)] += chi_pow * conv[static_cast<size_t>(j)];
    if (m == order) break;
    std::vector<double> next(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += r_profile[static_cast<size_t>(((j - i) % n + n) % n)] * conv[static_cast<size_t>(i)];
      next[static_cast<size_t>(j)] = acc;
    }
    conv = std::move(next);
    chi_pow *= chi;
  }
  const double tail = rmax * std::pow(q, order + 1) / (1.0 - q);
  for (int j = 1; j < n; ++j) {
    if (std::abs(series[static_cast<size_t>(j)] - out.gamma[static_cast<size_t>(j)]) > tail + 1e-12)
      throw Error("factorization slope: series and k-sum disagree beyond the tail bound at j = " +
                  std::to_string(j));
  }
  return out;
}

double factorization_slope(int j, const std::vector<double>& r_profile, double chi, int n,
                           int order) {
  if (static_cast<int>(r_profile.size()) != n)
    throw DomainError("factorization_slope: profile length must equal n");
  return factorization_slopes(r_profile, chi, order).gamma[static_cast<size_t>(j)];
}

NearFactorization near_factorization_concurrence(int j, double b, double b_s, double b_c,
                                                 double vx, double gamma_j) {
  (void)j;
  NearFactorization out;
  out.c_plus = gamma_j * (b_s / b_c) * (b - b_s) / vx;
  out.c_minus = -out.c_plus;
  return out;
}

}  // namespace cmf
