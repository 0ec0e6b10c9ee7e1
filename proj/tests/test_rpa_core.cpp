#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cmf/observables.hpp"
#include "cmf/rpa_core.hpp"

using namespace cmf;

namespace {

CouplingProfile nn_profile(double chi, double vz = 0.0, int n = 10) {
  return build_couplings(CouplingFamily::nearest_neighbor(1.0, chi, vz), n);
}

CouplingProfile zero_profile(int n) {
  return build_couplings(CouplingFamily::nearest_neighbor(0.0, 0.0, 0.0), n);
}

// finite-difference susceptibility oracle: -d<s_mu>/d phi^nu on the bare map
// <s>(phi) = (1/2) tanh(beta |phi - b| / 2) (phi - b)/|phi - b|
Eigen::Matrix3d fd_susceptibility(const std::array<double, 3>& phi, double b, double T) {
  auto mag = [&](const std::array<double, 3>& p) {
    const Eigen::Vector3d d(p[0], p[1], p[2] - b);
    const double lam = d.norm();
    const double f = T == 0.0 ? 1.0 : std::tanh(0.5 * lam / T);
    return Eigen::Vector3d(0.5 * f * d / lam);
  };
  Eigen::Matrix3d out;
  const double eps = 1e-6;
  for (int nu = 0; nu < 3; ++nu) {
    auto hi = phi, lo = phi;
    hi[static_cast<size_t>(nu)] += eps;
    lo[static_cast<size_t>(nu)] -= eps;
    out.col(nu) = -(mag(hi) - mag(lo)) / (2.0 * eps);
  }
  return out;
}

MeanFieldSolution random_mf(std::mt19937& rng, CouplingProfile& profile_out, ChainSpec& chain_out) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const int n = 4 + static_cast<int>(uni(rng) * 9);
    const double chi = -0.5 + 1.4 * uni(rng);
    const double vz = 0.6 * uni(rng);
    const double b = 2.5 * uni(rng);
    const double T = std::array<double, 3>{0.0, 0.2, 1.0}[static_cast<size_t>(uni(rng) * 3)];
    CouplingProfile p;
    switch (static_cast<int>(uni(rng) * 3)) {
      case 0: p = build_couplings(CouplingFamily::nearest_neighbor(1.0, chi, vz), n); break;
      case 1: p = build_couplings(CouplingFamily::power_law(1.0 + uni(rng), 1.0, chi, vz), n); break;
      default: p = build_couplings(CouplingFamily::lipkin(1.0, chi, vz), n); break;
    }
    const double bc = critical_field(p);
    if (std::abs(b - bc) < 0.08 * bc) continue;  // stay away from the critical field
    const ChainSpec chain{n, b, T};
    try {
      const MeanFieldSolution mf = solve_uniform_mf(chain, p);
      rpa_spectrum(mf, p, chain);  // reject unstable draws
      profile_out = p;
      chain_out = chain;
      return mf;
    } catch (const Error&) {
      continue;
    }
  }
  throw std::runtime_error("no stable random draw found");
}

}  // namespace

TEST_CASE("local spectrum basics") {
  const auto p = nn_profile(0.5);
  const auto mf = solve_uniform_mf({10, 2.0, 0.0}, p);
  const auto spec = local_spectrum(mf, 0.0);
  CHECK(spec.energies[0] == doctest::Approx(-1.0));
  CHECK(spec.energies[1] == doctest::Approx(1.0));
  CHECK(spec.p_ground == 1.0);
  CHECK(spec.p_excited == 0.0);

  const auto hot = solve_uniform_mf({10, 2.0, 2000.0}, p);
  const auto spec_hot = local_spectrum(hot, 2000.0);
  CHECK(spec_hot.p_ground == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(std::abs(spec_hot.f) < 1e-3);

  const auto mfn = solve_uniform_mf({10, 1.3, 0.5}, p);
  const auto specn = local_spectrum(mfn, 0.5);
  CHECK(specn.f == doctest::Approx(std::tanh(mfn.lambda)).epsilon(1e-12));
}

TEST_CASE("transition amplitudes close the algebra") {
  // sum_mu |a_mu|^2 = 1/2 for spin-1/2 and a.gamma = 0
  std::mt19937 rng(11);
  CouplingProfile p;
  ChainSpec chain;
  for (int t = 0; t < 20; ++t) {
    const auto mf = random_mf(rng, p, chain);
    const auto spec = local_spectrum(mf, chain.temperature);
    std::complex<double> along = 0.0;
    double norm = 0.0;
    for (int mu = 0; mu < 3; ++mu) {
      along += spec.a[static_cast<size_t>(mu)] * mf.gamma[static_cast<size_t>(mu)];
      norm += std::norm(spec.a[static_cast<size_t>(mu)]);
    }
    CHECK(std::abs(along) < 1e-12);
    CHECK(norm == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("local response symmetry and susceptibility") {
  std::mt19937 rng(23);
  CouplingProfile p;
  ChainSpec chain;
  for (int t = 0; t < 15; ++t) {
    const auto mf = random_mf(rng, p, chain);
    const auto spec = local_spectrum(mf, chain.temperature);

    // r_{mu nu}(omega) = r_{nu mu}(-omega)
    const std::complex<double> w(0.37, 0.11);
    const auto r1 = local_response(spec, w);
    const auto r2 = local_response(spec, -w);
    CHECK((r1 - r2.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    // susceptibility against the finite-difference oracle
    if (mf.lambda > 1e-3) {
      const auto chi = local_susceptibility(spec);
      const auto fd = fd_susceptibility(mf.phi, chain.b, chain.temperature);
      CHECK((chi - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("normal branch static response value") {
  // gamma = (0,0,-1): r_xx(0) = r_yy(0) = -f/(2 lambda) = -d<s_x>/d phi^x
  const auto p = nn_profile(0.5);
  const ChainSpec chain{10, 1.6, 0.3};
  const auto mf = solve_uniform_mf(chain, p);
  REQUIRE(mf.branch == MfBranch::Normal);
  const auto spec = local_spectrum(mf, chain.temperature);
  const auto r0 = local_response(spec, 0.0);
  const double expected = -0.5 * mf.f / mf.lambda;
  CHECK(r0(0, 0).real() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(r0(1, 1).real() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(r0(0, 0).imag()) < 1e-14);
  const auto fd = fd_susceptibility(mf.phi, chain.b, chain.temperature);
  CHECK(fd(0, 0) == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("dynamic response vanishes at infinite temperature") {
  const auto p = nn_profile(0.5);
  const auto mf = solve_uniform_mf({10, 1.5, 1e6}, p);
  const auto spec = local_spectrum(mf, 1e6);
  CHECK(local_response(spec, 0.1).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("pole hit is detected") {
  const auto p = nn_profile(0.5);
  const auto mf = solve_uniform_mf({10, 2.0, 0.0}, p);
  const auto spec = local_spectrum(mf, 0.0);
  CHECK_THROWS_AS(local_response(spec, spec.lambda), PoleHit);
}

TEST_CASE("free limit of the generic RPA matrix") {
  const auto p = nn_profile(0.5);
  const auto mf = solve_uniform_mf({10, 2.0, 0.0}, p);
  const auto spec = local_spectrum(mf, 0.0);
  const auto ev = rpa_energies_generic(Eigen::Matrix3d::Zero(), spec);
  CHECK(ev[0].real() == doctest::Approx(mf.lambda).epsilon(1e-14));
  CHECK(ev[1].real() == doctest::Approx(-mf.lambda).epsilon(1e-14));
}

TEST_CASE("generic RPA eigenvalues match the closed form") {
  std::mt19937 rng(101);
  CouplingProfile p;
  ChainSpec chain;
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const auto mf = random_mf(rng, p, chain);
    const auto spec = local_spectrum(mf, chain.temperature);
    for (int k = 0; k < chain.n; ++k) {
      const double closed = rpa_energy_closed(k, mf, p);
      const auto ev = rpa_energies_generic(rpa_coupling_matrix(p, k), spec);
      CHECK(ev[0].real() == doctest::Approx(closed).epsilon(1e-10));
      CHECK(ev[0].real() + ev[1].real() == doctest::Approx(0.0).epsilon(1e-10));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("determinant route vanishes at the RPA energies") {
  std::mt19937 rng(77);
  CouplingProfile p;
  ChainSpec chain;
  for (int t = 0; t < 15; ++t) {
    const auto mf = random_mf(rng, p, chain);
    const auto spec = local_spectrum(mf, chain.temperature);
    for (int k = 0; k < chain.n; ++k) {
      const double wk = rpa_energy_closed(k, mf, p);
      if (std::abs(wk - mf.lambda) < 1e-6) continue;  // response pole sits there
      const Eigen::Matrix3cd m = Eigen::Matrix3cd::Identity() +
                                 rpa_coupling_matrix(p, k) * local_response(spec, wk);
      CHECK(std::abs(m.determinant()) < 1e-8);
    }
  }
}

TEST_CASE("closed form examples") {
  // normal branch, T = 0, vz = 0: omega_k = sqrt((b - vt^y_k)(b - vt^x_k))
  const auto p = nn_profile(0.5);
  const double b = 2.0;
  const auto mf = solve_uniform_mf({10, b, 0.0}, p);
  for (int k = 0; k < 10; ++k) {
    const double expected = std::sqrt((b - p.vt(kY, k)) * (b - p.vt(kX, k)));
    CHECK(rpa_energy_closed(k, mf, p) == doctest::Approx(expected).epsilon(1e-12));
  }

  // at b = b_c the k = 0 energy vanishes
  const auto mfc = solve_uniform_mf({10, 1.0, 0.0}, p);
  CHECK(rpa_energy_closed(0, mfc, p) < 1e-7);
  const ChainSpec chainc{10, 1.0, 0.0};
  CHECK(rpa_spectrum(mfc, p, chainc).any_flagged);
}

TEST_CASE("static corrections") {
  const auto p = nn_profile(0.5, 0.2, 8);
  const ChainSpec cold{8, 1.5, 0.0};
  const auto mf_cold = solve_uniform_mf(cold, p);
  CHECK(static_correction(3, mf_cold, p, 0.0) == 1.0);

  const ChainSpec warm{8, 1.5, 0.4};
  const auto mf = solve_uniform_mf(warm, p);
  for (int k = 0; k < 8; ++k) {
    const double c0 = static_correction(k, mf, p, warm.temperature);
    CHECK(std::isfinite(c0));
    CHECK(c0 == doctest::Approx(static_factor_determinant(k, mf, p, warm.temperature)).epsilon(1e-10));
    CHECK(c0 == doctest::Approx(static_factor_reformulated(k, mf, p, warm.temperature)).epsilon(1e-9));
  }

  // normal branch with vz = 0 has no static renormalization at any T
  const auto pz = nn_profile(0.5, 0.0, 8);
  const auto mfz = solve_uniform_mf({8, 1.5, 0.4}, pz);
  for (int k = 0; k < 8; ++k)
    CHECK(static_correction(k, mfz, pz, 0.4) == doctest::Approx(1.0).epsilon(1e-13));

  // broken branch T > 0 against the determinant route
  const ChainSpec broken{8, 0.4, 0.25};
  const auto mfb = solve_uniform_mf(broken, p);
  REQUIRE(mfb.branch == MfBranch::ParityBroken);
  for (int k = 0; k < 8; ++k) {
    const double c0 = static_correction(k, mfb, p, broken.temperature);
    CHECK(c0 == doctest::Approx(static_factor_determinant(k, mfb, p, broken.temperature)).epsilon(1e-10));
    CHECK(c0 == doctest::Approx(static_factor_reformulated(k, mfb, p, broken.temperature)).epsilon(1e-9));
  }
}

TEST_CASE("zero coupling mode leaves the static factor at one") {
  const auto p = nn_profile(0.5, 0.3, 4);  // vt_k = cos(pi k / 2): the k = 1 mode vanishes
  const ChainSpec chain{4, 1.6, 0.5};
  const auto mf = solve_uniform_mf(chain, p);
  CHECK(p.vt(kX, 1) == doctest::Approx(0.0));
  CHECK(static_correction(1, mf, p, chain.temperature) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rpa_energy_closed(1, mf, p) == doctest::Approx(mf.lambda).epsilon(1e-13));
}

TEST_CASE("mode symmetry of the spectrum") {
  const auto p = build_couplings(CouplingFamily::power_law(1.5, 1.0, 0.5, 0.2), 12);
  const ChainSpec chain{12, 1.7, 0.3};
  const auto mf = solve_uniform_mf(chain, p);
  const auto spec = rpa_spectrum(mf, p, chain);
  for (int k = 1; k < 12; ++k) {
    CHECK(spec.omega[static_cast<size_t>(k)] ==
          doctest::Approx(spec.omega[static_cast<size_t>(12 - k)]).epsilon(1e-12));
    CHECK(spec.c0[static_cast<size_t>(k)] ==
          doctest::Approx(spec.c0[static_cast<size_t>(12 - k)]).epsilon(1e-12));
  }
}

TEST_CASE("log correction free limit and scaling") {
  const int n = 8;
  const auto zero = zero_profile(n);
  const ChainSpec chain{n, 1.5, 0.3};
  const auto mf0 = solve_uniform_mf(chain, zero);
  CHECK(log_correction(mf0, zero, chain).value == doctest::Approx(0.0));

  double prev = 0.0;
  for (int s = 0; s < 2; ++s) {
    const double scale = s == 0 ? 1e-3 : 5e-4;
    const auto p = build_couplings(CouplingFamily::nearest_neighbor(scale, 0.5 * scale), n);
    const auto mf = solve_uniform_mf(chain, p);
    const double lc = std::abs(log_correction(mf, p, chain).value);
    if (s == 1) CHECK(lc == doctest::Approx(0.5 * prev).epsilon(0.05));
    prev = lc;
  }
}

TEST_CASE("log correction against a raw reimplementation") {
  const auto p = nn_profile(0.5, 0.2, 4);
  const ChainSpec chain{4, 2.0, 0.5};
  const auto mf = solve_uniform_mf(chain, p);
  const double beta = 1.0 / chain.temperature;
  // direct evaluation of the printed closed forms, no shared code
  double expected = 0.0;
  const double gz2 = mf.gamma[2] * mf.gamma[2];
  const double gx2 = mf.gamma[0] * mf.gamma[0];
  for (int k = 0; k < 4; ++k) {
    const double wk =
        mf.lambda * std::sqrt((1.0 - mf.f * p.vt(kY, k) / mf.lambda) *
                              (1.0 - mf.f * (gz2 * p.vt(kX, k) + gx2 * p.vt(kZ, k)) / mf.lambda));
    const double num =
        mf.lambda * (gz2 * p.vt(kZ, k) + gx2 * p.vt(kX, k)) - mf.f * p.vt(kX, k) * p.vt(kZ, k);
    const double den = mf.lambda - mf.f * (gz2 * p.vt(kX, k) + gx2 * p.vt(kZ, k));
    const double c0 = 1.0 / std::sqrt(1.0 - 0.5 * beta * (1.0 - mf.f * mf.f) * num / den);
    expected += std::log(c0) + std::log(std::sinh(0.5 * beta * mf.lambda) / std::sinh(0.5 * beta * wk));
  }
  const auto lc = log_correction(mf, p, chain);
  CHECK_FALSE(lc.per_beta_normalized);
  CHECK(lc.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("partition function of free spins") {
  const int n = 6;
  const auto zero = zero_profile(n);
  const ChainSpec chain{n, 1.2, 0.7};
  const auto mf = solve_uniform_mf(chain, zero);
  const auto z = partition_cmf(mf, zero, chain);
  CHECK_FALSE(z.zero_temperature);
  const double beta = 1.0 / chain.temperature;
  CHECK(z.log_z == doctest::Approx(n * std::log(2.0 * std::cosh(0.5 * beta * 1.2))).epsilon(1e-12));

  const ChainSpec cold{n, 1.2, 0.0};
  const auto mf0 = solve_uniform_mf(cold, zero);
  const auto e = partition_cmf(mf0, zero, cold);
  CHECK(e.zero_temperature);
  CHECK(e.energy == doctest::Approx(-0.5 * n * 1.2));
}

TEST_CASE("zero temperature log correction is the energy shift") {
  const auto p = nn_profile(0.5, 0.0, 6);
  const ChainSpec chain{6, 2.0, 0.0};
  const auto mf = solve_uniform_mf(chain, p);
  const auto lc = log_correction(mf, p, chain);
  CHECK(lc.per_beta_normalized);
  double expected = 0.0;
  for (int k = 0; k < 6; ++k) expected += 0.5 * (mf.lambda - rpa_energy_closed(k, mf, p));
  CHECK(lc.value == doctest::Approx(expected).epsilon(1e-13));
  const auto z = partition_cmf(mf, p, chain);
  CHECK(z.energy == doctest::Approx(z.mf_part - expected).epsilon(1e-13));
}
