#include "cmf/jw_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace cmf::jw {

namespace {

void solve_sector(Sector& sec, int n, double v_plus, double v_minus, double b, int parity_bit) {
  const double offset = parity_bit == 0 ? 0.5 : 0.0;  // even sector: antiperiodic momenta
  sec.parity = parity_bit == 0 ? +1 : -1;
  sec.momenta.resize(static_cast<size_t>(n));
  sec.xi.resize(static_cast<size_t>(n));
  sec.delta.resize(static_cast<size_t>(n));
  sec.lambda.resize(static_cast<size_t>(n));
  sec.occupation.assign(static_cast<size_t>(n), 0.0);
  sec.pair_phi.assign(static_cast<size_t>(n), 0.0);

  for (int m = 0; m < n; ++m) {
    const double k = 2.0 * std::numbers::pi * (m + offset) / n;
    sec.momenta[static_cast<size_t>(m)] = k;
    sec.xi[static_cast<size_t>(m)] = b - v_plus * std::cos(k);
    sec.delta[static_cast<size_t>(m)] = v_minus * std::sin(k);
    sec.lambda[static_cast<size_t>(m)] =
        std::hypot(sec.xi[static_cast<size_t>(m)], sec.delta[static_cast<size_t>(m)]);
  }

  // partner index with momentum -k (mod 2 pi)
  auto partner = [&](int m) {
    return parity_bit == 0 ? n - 1 - m : (n - m) % n;
  };

  double energy = -0.5 * n * b;
  int occupied_unpaired = 0;
  std::vector<int> unpaired;
  for (int m = 0; m < n; ++m) {
    const int pm = partner(m);
    if (pm == m) {
      unpaired.push_back(m);
      if (sec.xi[static_cast<size_t>(m)] < 0.0) {
        energy += sec.xi[static_cast<size_t>(m)];
        sec.occupation[static_cast<size_t>(m)] = 1.0;
        ++occupied_unpaired;
      }
      continue;
    }
    if (pm < m) continue;  // handle each pair once
    const double xi = sec.xi[static_cast<size_t>(m)];
    const double lam = sec.lambda[static_cast<size_t>(m)];
    if (lam < 1e-14)
      throw NoConvergence("gapless fermion mode; sector ground state undefined");
    energy += xi - lam;
    const double occ = 0.5 * (1.0 - xi / lam);
    sec.occupation[static_cast<size_t>(m)] = occ;
    sec.occupation[static_cast<size_t>(pm)] = occ;
    sec.pair_phi[static_cast<size_t>(m)] = sec.delta[static_cast<size_t>(m)] / (2.0 * lam);
    sec.pair_phi[static_cast<size_t>(pm)] = sec.delta[static_cast<size_t>(pm)] / (2.0 * lam);
  }

  const int required = parity_bit;
  sec.projected = (occupied_unpaired & 1) != required;
  if (sec.projected) {
    // flip the cheapest number-conserving mode; pair vacua carry even parity
    int best = -1;
    double cost = 0.0;
    for (int m : unpaired) {
      const double c = std::abs(sec.xi[static_cast<size_t>(m)]);
      if (best < 0 || c < cost) {
        best = m;
        cost = c;
      }
    }
    if (best < 0)
      throw NoConvergence("parity projection has no number-conserving mode to toggle");
    energy += cost;
    sec.occupation[static_cast<size_t>(best)] = 1.0 - sec.occupation[static_cast<size_t>(best)];
  }
  sec.energy = energy;

  // contraction table G(r) = 2<c+_0 c_r> - 2<c_0 c_r> - delta_{r0}
  sec.g.assign(static_cast<size_t>(2 * n + 1), 0.0);
  for (int r = -n; r <= n; ++r) {
    double rho = 0.0, f = 0.0;
    for (int m = 0; m < n; ++m) {
      rho += sec.occupation[static_cast<size_t>(m)] * std::cos(sec.momenta[static_cast<size_t>(m)] * r);
      f -= sec.pair_phi[static_cast<size_t>(m)] * std::sin(sec.momenta[static_cast<size_t>(m)] * r);
    }
    sec.g[static_cast<size_t>(r + n)] = (2.0 * rho - 2.0 * f) / n - (r == 0 ? 1.0 : 0.0);
  }
}

double g_at(const Sector& sec, int n, int r) { return sec.g[static_cast<size_t>(r + n)]; }

}  // namespace

FermionSpectrum jw_ground(int n, double v_plus, double v_minus, double b) {
  if (n < 2) throw InvalidFamilyParameter("jw_ground: n must be >= 2");
  FermionSpectrum spec;
  spec.n = n;
  spec.v_plus = v_plus;
  spec.v_minus = v_minus;
  spec.b = b;
  solve_sector(spec.sector[0], n, v_plus, v_minus, b, 0);
  solve_sector(spec.sector[1], n, v_plus, v_minus, b, 1);
  spec.ground_sector = spec.sector[0].energy <= spec.sector[1].energy ? 0 : 1;
  spec.gap = std::abs(spec.sector[0].energy - spec.sector[1].energy);
  return spec;
}

FermionSpectrum jw_ground(const CouplingProfile& couplings, double b) {
  const int n = couplings.n;
  for (int j = 2; j < n - 1; ++j)
    if (couplings.v(kX, j) != 0.0 || couplings.v(kY, j) != 0.0 || couplings.v(kZ, j) != 0.0)
      throw NotNearestNeighbor("JW solver requires strictly nearest-neighbor couplings");
  for (int j = 1; j < n; ++j)
    if (couplings.v(kZ, j) != 0.0)
      throw NotNearestNeighbor("JW solver requires v^z = 0");
  const double vx = couplings.v(kX, 1) + couplings.v(kX, (n - 1) % n);
  const double vy = couplings.v(kY, 1) + couplings.v(kY, (n - 1) % n);
  return jw_ground(n, 0.5 * (vx + vy), 0.5 * (vx - vy), b);
}

JwCorrelations jw_correlations_sector(const FermionSpectrum& spec, int sector_index, int j) {
  const int n = spec.n;
  if (j < 1 || j >= n) throw InvalidFamilyParameter("jw_correlations: separation out of range");
  const Sector& sec = spec.sector[static_cast<size_t>(sector_index)];

  Eigen::MatrixXd mx(j, j), my(j, j);
  for (int a = 0; a < j; ++a)
    for (int c = 0; c < j; ++c) {
      mx(a, c) = g_at(sec, n, c - a + 1);
      my(a, c) = g_at(sec, n, c - a - 1);
    }
  JwCorrelations out;
  out.alpha_x = 0.25 * mx.determinant();
  out.alpha_y = 0.25 * my.determinant();
  const double g0 = g_at(sec, n, 0);
  out.alpha_z = 0.25 * (g0 * g0 - g_at(sec, n, j) * g_at(sec, n, -j));
  out.sz = 0.5 * g0;
  return out;
}

JwCorrelations jw_correlations(const FermionSpectrum& spec, int j) {
  return jw_correlations_sector(spec, spec.ground_sector, j);
}

}  // namespace cmf::jw
