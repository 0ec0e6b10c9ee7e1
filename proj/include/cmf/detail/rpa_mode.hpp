#pragma once

// Per-mode scalar machinery shared by rpa_core and observables.
//
// Everything here works with the bare Fourier couplings vt^mu_k (the tables'
// transforms). The quadratic-form coupling matrices of the generic RPA routes
// are twice these values; the closed forms below already absorb that factor.
//
// To stay finite at the lambda -> 0 point (b = 0 in the high-temperature
// phase) the mode quantities are factored through f/lambda:
//   A = 1 - (f/lambda) vt^y_k              (omega_k^2 = lambda^2 A B)
//   B = 1 - (f/lambda) (gz2 vt^x_k + gx2 vt^z_k)
//   Ntil = gz2 vt^z_k + gx2 vt^x_k - (f/lambda) vt^x_k vt^z_k
//   h = beta (1 - f^2) / 2,  S = h Ntil / B,  c0 = 1/sqrt(1 - S)
// Derivatives are hand-derived and locked by finite-difference tests.

#include <cmath>

#include "cmf/errors.hpp"
#include "cmf/meanfield.hpp"

namespace cmf::detail {

struct ModeState {
  double lambda = 0.0;
  double f = 0.0;
  double fol = 0.0;  // f / lambda, stable near lambda = 0
  double gx2 = 0.0;  // gamma_x^2
  double gz2 = 1.0;  // gamma_z^2
  double gz = -1.0;  // gamma_z with sign
  double beta = 0.0;
  bool zero_t = true;
};

struct ModeParams {
  double vx = 0.0, vy = 0.0, vz = 0.0;  // bare vt^mu_k
};

inline ModeState make_state(const MeanFieldSolution& mf) {
  ModeState st;
  st.lambda = mf.lambda;
  st.f = mf.f;
  st.fol = mf.f_over_lambda;
  st.gx2 = mf.gamma[0] * mf.gamma[0];
  st.gz2 = mf.gamma[2] * mf.gamma[2];
  st.gz = mf.gamma[2];
  st.zero_t = mf.temperature == 0.0;
  st.beta = st.zero_t ? 0.0 : 1.0 / mf.temperature;
  return st;
}

inline ModeParams params_at(const CouplingProfile& couplings, int k) {
  return {couplings.vt(0, k), couplings.vt(1, k), couplings.vt(2, k)};
}

struct ModeValues {
  double A = 1.0, B = 1.0;
  double omega = 0.0;
  double Ntil = 0.0, h = 0.0, S = 0.0, c0 = 1.0, lnc0 = 0.0;
  // ln[c0 sinh(beta lambda/2)/sinh(beta omega/2)] at T > 0;
  // (lambda - omega)/2 at T = 0 (per-beta normalized limit).
  double ln_contrib = 0.0;
  bool critical = false;
  bool static_near_singular = false;
};

inline double sech2_half(double x) {
  // 1 - tanh(x/2)^2, stable for large x
  const double e = std::exp(-0.5 * std::abs(x));
  const double s = 2.0 * e / (1.0 + e * e);
  return s * s;
}

// tanh(beta lambda / 2) / lambda, stable as lambda -> 0.
inline double stable_f_over_lambda(double lambda, double beta) {
  const double x = 0.5 * beta * lambda;
  if (x < 1e-4) {
    const double x2 = x * x;
    return 0.5 * beta * (1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0);
  }
  return std::tanh(x) / lambda;
}

// ln sinh(x) - ln sinh(y) for x, y > 0, overflow-safe.
inline double ln_sinh_ratio(double x, double y) {
  return (x - y) + std::log1p(-std::exp(-2.0 * x)) - std::log1p(-std::exp(-2.0 * y));
}

inline ModeValues compute_mode(const ModeState& st, const ModeParams& pk, bool need_c0 = true) {
  ModeValues v;
  v.A = 1.0 - st.fol * pk.vy;
  v.B = 1.0 - st.fol * (st.gz2 * pk.vx + st.gx2 * pk.vz);
  const double ab = v.A * v.B;
  if (ab < 0.0)
    throw RpaInstability("negative RPA radicand at mode with vt^x = " + std::to_string(pk.vx) +
                         ", vt^y = " + std::to_string(pk.vy));
  v.omega = st.lambda * std::sqrt(ab);
  v.critical = ab < 1e-10;
  if (!st.zero_t && v.omega == 0.0 && st.lambda > 0.0)
    throw RpaInstability("RPA energy vanished at T > 0 (mean-field critical point)");

  if (st.zero_t) {
    v.ln_contrib = 0.5 * (st.lambda - v.omega);
    return v;
  }

  if (need_c0) {
    v.Ntil = st.gz2 * pk.vz + st.gx2 * pk.vx - st.fol * pk.vx * pk.vz;
    v.h = 0.5 * st.beta * sech2_half(st.beta * st.lambda);
    v.S = v.h * v.Ntil / v.B;
    if (1.0 - v.S <= 0.0)
      throw StaticInstability("static correction argument non-positive (S = " + std::to_string(v.S) + ")");
    v.static_near_singular = std::abs(1.0 - v.S) < 1e-10;
    v.c0 = 1.0 / std::sqrt(1.0 - v.S);
    v.lnc0 = -0.5 * std::log1p(-v.S);
  }

  const double x = 0.5 * st.beta * st.lambda;
  if (x < 1e-6) {
    // sinh ratio tends to lambda/omega = 1/sqrt(A B)
    v.ln_contrib = v.lnc0 - 0.5 * std::log(ab);
  } else {
    v.ln_contrib = v.lnc0 + ln_sinh_ratio(x, 0.5 * st.beta * v.omega);
  }
  return v;
}

struct ModeDerivs {
  double domega = 0.0;
  double dlnc0 = 0.0;
  double dlnC = 0.0;  // of the mode's ln_contrib (per-beta normalized at T = 0)
};

// Derivative with respect to the bare vt^mu_k (mu: 0 = x, 1 = y, 2 = z) at
// fixed phi and b.
inline ModeDerivs mode_dcoupling(const ModeState& st, const ModeParams& pk, const ModeValues& v,
                                 int mu) {
  double dA = 0.0, dB = 0.0, dN = 0.0;
  switch (mu) {
    case 0:
      dB = -st.fol * st.gz2;
      dN = st.gx2 - st.fol * pk.vz;
      break;
    case 1:
      dA = -st.fol;
      break;
    default:
      dB = -st.fol * st.gx2;
      dN = st.gz2 - st.fol * pk.vx;
      break;
  }
  const double ab = v.A * v.B;
  const double dab = dA * v.B + v.A * dB;

  ModeDerivs d;
  d.domega = 0.5 * st.lambda * dab / std::sqrt(ab);
  if (st.zero_t) {
    d.dlnC = -0.5 * d.domega;
    return d;
  }
  const double dS = v.h * (dN * v.B - v.Ntil * dB) / (v.B * v.B);
  d.dlnc0 = dS / (2.0 * (1.0 - v.S));

  const double y = 0.5 * st.beta * v.omega;
  double sinh_term;  // (beta/2) coth(beta omega/2) domega
  if (y < 1e-6) {
    sinh_term = 0.5 * dab / ab + st.beta * st.beta * st.lambda * st.lambda * dab / 24.0;
  } else {
    sinh_term = 0.5 * st.beta * d.domega / std::tanh(y);
  }
  d.dlnC = d.dlnc0 - sinh_term;
  return d;
}

// Derivative of the mode contribution with respect to the field b at fixed
// phi; lambda, f and the direction cosines all move with b. Requires
// lambda > 0 (the caller special-cases b = 0, where <s_z> vanishes by
// symmetry).
inline ModeDerivs mode_dfield(const ModeState& st, const ModeParams& pk, const ModeValues& v) {
  const double dlambda = -st.gz;
  const double h = st.zero_t ? 0.0 : 0.5 * st.beta * sech2_half(st.beta * st.lambda);
  // d(f/lambda)/dlambda, with the small-argument series of tanh(x)/x
  const double x = 0.5 * st.beta * st.lambda;
  const double xi = (st.zero_t || x > 1e-4) ? (h - st.fol) / st.lambda
                                            : -st.beta * st.beta * st.beta * st.lambda / 12.0;
  const double dfol = xi * dlambda;
  const double dgz2 = st.gx2 == 0.0 ? 0.0 : -2.0 * st.gz * st.gx2 / st.lambda;
  const double dgx2 = -dgz2;

  const double dA = -dfol * pk.vy;
  const double dB = -dfol * (st.gz2 * pk.vx + st.gx2 * pk.vz) -
                    st.fol * (dgz2 * pk.vx + dgx2 * pk.vz);
  const double ab = v.A * v.B;
  const double dab = dA * v.B + v.A * dB;
  const double sqrt_ab = std::sqrt(ab);

  ModeDerivs d;
  d.domega = dlambda * sqrt_ab + 0.5 * st.lambda * dab / sqrt_ab;
  if (st.zero_t) {
    d.dlnC = 0.5 * (dlambda - d.domega);
    return d;
  }
  const double dN = dgz2 * pk.vz + dgx2 * pk.vx - dfol * pk.vx * pk.vz;
  const double dh = -st.beta * st.f * h * dlambda;
  const double dS = dh * v.Ntil / v.B + v.h * (dN * v.B - v.Ntil * dB) / (v.B * v.B);
  d.dlnc0 = dS / (2.0 * (1.0 - v.S));
  const double coth_l = 1.0 / st.f;
  const double coth_w = 1.0 / std::tanh(0.5 * st.beta * v.omega);
  d.dlnC = d.dlnc0 + 0.5 * st.beta * (coth_l * dlambda - coth_w * d.domega);
  return d;
}

}  // namespace cmf::detail
