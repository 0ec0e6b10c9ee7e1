#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <random>

#include "cmf/ed_oracle.hpp"
#include "cmf/jw_oracle.hpp"
#include "cmf/meanfield.hpp"

using namespace cmf;
using cmf::ed::Hamiltonian;

namespace {

CouplingProfile nn_profile(double chi, int n, double vz = 0.0) {
  return build_couplings(CouplingFamily::nearest_neighbor(1.0, chi, vz), n);
}

Eigen::MatrixXd dense_hamiltonian(int n, const CouplingProfile& p, double b) {
  const Hamiltonian h(n, p, b);
  const Eigen::Index dim = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXd m(dim, dim);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(dim), out;
  for (Eigen::Index i = 0; i < dim; ++i) {
    unit.setZero();
    unit[i] = 1.0;
    h.apply(unit, out);
    m.col(i) = out;
  }
  return m;
}

// independent partial trace: explicit sum over the remaining sites
Eigen::Matrix4d brute_force_rho2(const Eigen::VectorXd& state, int n, int i, int j) {
  Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
  std::vector<int> rest;
  for (int s = 0; s < n; ++s)
    if (s != i && s != j) rest.push_back(s);
  const int rest_dim = 1 << rest.size();
  for (int r = 0; r < rest_dim; ++r) {
    std::uint32_t base = 0;
    for (std::size_t s = 0; s < rest.size(); ++s)
      if ((r >> s) & 1) base |= std::uint32_t{1} << rest[s];
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 4; ++c) {
        // two-site basis |uu>,|ud>,|du>,|dd>; bit set = up
        std::uint32_t ma = base, mc = base;
        if ((a & 2) == 0) ma |= std::uint32_t{1} << i;
        if ((a & 1) == 0) ma |= std::uint32_t{1} << j;
        if ((c & 2) == 0) mc |= std::uint32_t{1} << i;
        if ((c & 1) == 0) mc |= std::uint32_t{1} << j;
        rho(a, c) += state[ma] * state[mc];
      }
    }
  }
  return rho;
}

}  // namespace

TEST_CASE("two spin chain matches the analytic spectrum") {
  const double chi = 0.5, b = 0.8;
  const auto p = nn_profile(chi, 2);
  const Eigen::MatrixXd h = dense_hamiltonian(2, p, b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const double vm = 0.5 * (1.0 - chi), vp = 0.5 * (1.0 + chi);
  std::array<double, 4> expected{-std::sqrt(b * b + vm * vm), -vp, vp,
                                 std::sqrt(b * b + vm * vm)};
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 4; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expected[static_cast<size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("free spins") {
  const auto p = build_couplings(CouplingFamily::nearest_neighbor(0.0, 0.0), 2);
  const Eigen::MatrixXd h = dense_hamiltonian(2, p, 1.3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.3));
  CHECK(es.eigenvalues()(1) == doctest::Approx(0.0));
  CHECK(es.eigenvalues()(2) == doctest::Approx(0.0));
  CHECK(es.eigenvalues()(3) == doctest::Approx(1.3));
}

TEST_CASE("hermiticity and parity commutation") {
  const int n = 6;
  const auto p = build_couplings(CouplingFamily::power_law(1.3, 1.0, 0.4, 0.2), n);
  const Hamiltonian h(n, p, 0.9);
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss;
  const Eigen::Index dim = static_cast<Eigen::Index>(h.dim());
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd u(dim), w(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      u[i] = gauss(rng);
      w[i] = gauss(rng);
    }
    CHECK(u.dot(h.apply(w)) == doctest::Approx(w.dot(h.apply(u))).epsilon(1e-12));

    // P_z = (-1)^(number of up spins) commutes with H
    Eigen::VectorXd pu = u;
    for (Eigen::Index m = 0; m < dim; ++m)
      if (std::popcount(static_cast<std::uint32_t>(m)) & 1) pu[m] = -pu[m];
    Eigen::VectorXd hpu = h.apply(pu);
    Eigen::VectorXd phu = h.apply(u);
    for (Eigen::Index m = 0; m < dim; ++m)
      if (std::popcount(static_cast<std::uint32_t>(m)) & 1) phu[m] = -phu[m];
    CHECK((hpu - phu).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("aligned limit at strong field") {
  const int n = 8;
  const auto p = nn_profile(0.5, n);
  const auto res = ed::ground_state(n, p, 20.0);
  CHECK(std::abs(res.ground_state[0]) > 0.999);  // all spins down is basis state 0
  CHECK(res.sz == doctest::Approx(-0.5).epsilon(1e-4));
  // concurrence at the Eq.-type first-order scale |v_-|/(2b)
  const double scale = 0.25 / (2.0 * 20.0);
  CHECK(res.concurrence[1] == doctest::Approx(scale).epsilon(0.1));
  for (int j = 2; j <= n / 2; ++j) CHECK(res.concurrence[static_cast<size_t>(j)] < 2e-3);
}

TEST_CASE("partial trace against the brute force oracle") {
  const int n = 4;
  std::mt19937 rng(42);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd state(16);
  for (int i = 0; i < 16; ++i) state[i] = gauss(rng);
  state.normalize();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Eigen::Matrix4d a = ed::reduced_two_spin(state, n, i, j);
      const Eigen::Matrix4d o = brute_force_rho2(state, n, i, j);
      CHECK((a - o).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(a.trace() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("partial trace limits") {
  // product state: rank one reduced matrix
  Eigen::VectorXd prod = Eigen::VectorXd::Zero(16);
  prod[0b0101] = 1.0;
  const Eigen::Matrix4d r = ed::reduced_two_spin(prod, 4, 0, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(r);
  CHECK(es.eigenvalues()(3) == doctest::Approx(1.0));
  CHECK(es.eigenvalues()(2) == doctest::Approx(0.0));

  // GHZ of 4 spins reduces to a rank-2 mixture with I/4 on sites (0, 2)? no:
  // equal mixture of |uu> and |dd>
  Eigen::VectorXd ghz = Eigen::VectorXd::Zero(16);
  ghz[0b0000] = ghz[0b1111] = 1.0 / std::sqrt(2.0);
  const Eigen::Matrix4d g = ed::reduced_two_spin(ghz, 4, 1, 3);
  CHECK(g(0, 0) == doctest::Approx(0.5));
  CHECK(g(3, 3) == doctest::Approx(0.5));
  CHECK(std::abs(g(0, 3)) < 1e-14);
}

TEST_CASE("wootters concurrence reference values") {
  // Bell state
  Eigen::Matrix4d bell = Eigen::Matrix4d::Zero();
  bell(0, 0) = bell(3, 3) = bell(0, 3) = bell(3, 0) = 0.5;
  CHECK(ed::wootters_concurrence(bell) == doctest::Approx(1.0).epsilon(1e-10));

  // product state
  Eigen::Matrix4d prod = Eigen::Matrix4d::Zero();
  prod(1, 1) = 1.0;
  CHECK(ed::wootters_concurrence(prod) == doctest::Approx(0.0));

  // Werner state, p = 0.8: C = (3p - 1)/2
  const double pw = 0.8;
  const Eigen::Matrix4d werner = pw * bell + (1.0 - pw) * 0.25 * Eigen::Matrix4d::Identity();
  CHECK(ed::wootters_concurrence(werner) == doctest::Approx((3.0 * pw - 1.0) / 2.0).epsilon(1e-12));

  Eigen::Matrix4d bad = bell;
  bad(1, 2) = 0.4;  // asymmetric
  bad(2, 1) = -0.4;
  CHECK_THROWS_AS(ed::wootters_concurrence(bad), InvalidDensityMatrix);
}

TEST_CASE("wootters equals the X form expressions on ED states") {
  const int n = 8;
  const auto p = build_couplings(CouplingFamily::finite_range(2, 1.0, 0.5), n);
  for (double b : {0.4, 0.9, 1.6}) {
    const auto res = ed::ground_state(n, p, b);
    for (int j = 1; j <= n / 2; ++j) {
      const auto& r = res.rho2[static_cast<size_t>(j)];
      const double ax = res.alpha[0][static_cast<size_t>(j)];
      const double ay = res.alpha[1][static_cast<size_t>(j)];
      const double az = res.alpha[2][static_cast<size_t>(j)];
      const double cp = 2.0 * (std::abs(ax - ay) + az - 0.25);
      const double cm = 2.0 * (std::abs(ax + ay) -
                               std::sqrt(std::max(0.0, (0.25 + az) * (0.25 + az) - res.sz * res.sz)));
      CHECK(res.concurrence[static_cast<size_t>(j)] ==
            doctest::Approx(std::max({cp, cm, 0.0})).epsilon(1e-10));
      // X form: forbidden entries vanish in definite parity states
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c)
          if ((a == c) || (a + c == 3)) continue;
          else CHECK(std::abs(r(a, c)) < 1e-10);
    }
  }
}

TEST_CASE("translation invariance and cyclic symmetry of correlators") {
  const int n = 8;
  const auto p = build_couplings(CouplingFamily::power_law(2.0, 1.0, 0.5), n);
  const auto res = ed::ground_state(n, p, 1.4);
  for (int j = 1; j < n; ++j) {
    const Eigen::Matrix4d a = ed::reduced_two_spin(res.ground_state, n, 0, j);
    const Eigen::Matrix4d b = ed::reduced_two_spin(res.ground_state, n, 3, (3 + j) % n);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    for (int mu = 0; mu < 3; ++mu)
      CHECK(res.alpha[static_cast<size_t>(mu)][static_cast<size_t>(j)] ==
            doctest::Approx(res.alpha[static_cast<size_t>(mu)][static_cast<size_t>(n - j)]).epsilon(1e-10));
  }
}

TEST_CASE("parity selection rules") {
  const int n = 8;
  const auto p = nn_profile(0.5, n);
  const auto res = ed::ground_state(n, p, 0.5);  // below b_c, definite parity still holds
  const auto& r = res.rho2[2];
  // <S_x> = <S_y> = 0 and <S_x S_z> = 0 follow from the X form zeros
  CHECK(std::abs(r(0, 1)) < 1e-10);
  CHECK(std::abs(r(0, 2)) < 1e-10);
  CHECK(std::abs(r(1, 3)) < 1e-10);
  CHECK(std::abs(r(2, 3)) < 1e-10);
}

TEST_CASE("thermal state limits") {
  const int n = 6;
  const auto p = nn_profile(0.5, n);
  const ed::ThermalSolver solver(n, p, 1.5);

  const auto cold = solver.at(1e-4);
  const auto ground = ed::ground_state(n, p, 1.5);
  for (int j = 1; j <= n / 2; ++j) {
    CHECK(cold.concurrence[static_cast<size_t>(j)] ==
          doctest::Approx(ground.concurrence[static_cast<size_t>(j)]).epsilon(1e-8));
    for (int mu = 0; mu < 3; ++mu)
      CHECK(cold.alpha[static_cast<size_t>(mu)][static_cast<size_t>(j)] ==
            doctest::Approx(ground.alpha[static_cast<size_t>(mu)][static_cast<size_t>(j)]).epsilon(1e-8));
  }

  const auto hot = solver.at(1e5);
  for (int j = 1; j <= n / 2; ++j) {
    CHECK(hot.concurrence[static_cast<size_t>(j)] == 0.0);
    CHECK((hot.rho2[static_cast<size_t>(j)] - 0.25 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("strong field ordering of the exact concurrence") {
  const int n = 8;
  const auto p = nn_profile(0.5, n);
  const double vm = 0.25, vp = 0.75;
  double prev1 = 0.0, prev2 = 0.0;
  for (double b : {4.0, 8.0, 16.0}) {
    const auto res = ed::ground_state(n, p, b);
    const double r1 = res.concurrence[1] * 2.0 * b / vm;
    const double r2 = res.concurrence[2] * 4.0 * b * b / (vm * (vp - vm));
    if (prev1 != 0.0) {
      CHECK(std::abs(r1 - 1.0) < std::abs(prev1 - 1.0));
      CHECK(std::abs(r2 - 1.0) < std::abs(prev2 - 1.0));
    }
    prev1 = r1;
    prev2 = r2;
  }
  CHECK(prev1 == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(prev2 == doctest::Approx(1.0).epsilon(5e-2));
}

TEST_CASE("thermal limit temperature grows with the field") {
  const int n = 8;
  const auto p = nn_profile(0.5, n);
  const ed::ThermalSolver lo(n, p, 2.0);
  const ed::ThermalSolver hi(n, p, 4.0);
  const double t_lo = lo.limit_temperature(1);
  const double t_hi = hi.limit_temperature(1);
  CHECK(t_hi > t_lo);
}

TEST_CASE("lanczos path agrees with the free fermion solution") {
  const int n = 14;
  const auto p = nn_profile(0.6, n);
  const auto res = ed::ground_state(n, p, 1.3);
  const auto spec = jw::jw_ground(p, 1.3);
  CHECK(res.ground_energy == doctest::Approx(spec.ground_energy()).epsilon(1e-10));
  CHECK(res.gap == doctest::Approx(spec.gap).epsilon(1e-6));
}

TEST_CASE("resource guards") {
  const auto p = nn_profile(0.5, 10);
  CHECK_THROWS_AS(ed::thermal_state(13, build_couplings(CouplingFamily::nearest_neighbor(1.0, 0.5), 13), 1.0, 0.5),
                  ResourceLimit);
  CHECK_THROWS_AS(ed::ground_state(19, build_couplings(CouplingFamily::nearest_neighbor(1.0, 0.5), 19), 1.0),
                  ResourceLimit);
}
