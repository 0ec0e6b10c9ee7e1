#include "cmf/ed_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace cmf::ed {

namespace {

struct SectorBasis {
  std::vector<std::uint32_t> states;
  std::vector<std::int32_t> pos;  // full index -> sector index, -1 outside
};

SectorBasis parity_sector(int n, int parity_bit) {
  const std::size_t dim = std::size_t{1} << n;
  SectorBasis s;
  s.pos.assign(dim, -1);
  s.states.reserve(dim / 2);
  for (std::uint32_t m = 0; m < dim; ++m) {
    if ((std::popcount(m) & 1) == parity_bit) {
      s.pos[m] = static_cast<std::int32_t>(s.states.size());
      s.states.push_back(m);
    }
  }
  return s;
}

int two_site_index(int bit_i, int bit_j) {
  // basis ordering |uu>, |ud>, |du>, |dd> with bit value 1 = up
  return ((1 - bit_i) << 1) | (1 - bit_j);
}

}  // namespace

Hamiltonian::Hamiltonian(int n, const CouplingProfile& couplings, double b) : n_(n) {
  if (n < 2 || n > kMaxApplyN)
    throw ResourceLimit("ED Hamiltonian supports 2 <= n <= " + std::to_string(kMaxApplyN));
  if (couplings.n != n) throw InvalidFamilyParameter("coupling profile size does not match n");

  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> wz_pair;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int d1 = j - i;
      const int d2 = n - d1;
      const double wx = couplings.v(kX, d1) + couplings.v(kX, d2 % n);
      const double wy = couplings.v(kY, d1) + couplings.v(kY, d2 % n);
      const double wmz = couplings.v(kZ, d1) + couplings.v(kZ, d2 % n);
      Bond bond;
      bond.mask = (std::uint32_t{1} << i) | (std::uint32_t{1} << j);
      bond.flip_equal = -0.25 * (wx - wy);
      bond.flip_differ = -0.25 * (wx + wy);
      bonds_.push_back(bond);
      wz_pair.push_back(wmz);
    }
  }

  diag_.assign(dim, 0.0);
  for (std::uint32_t m = 0; m < dim; ++m) {
    double e = b * (std::popcount(m) - 0.5 * n);
    std::size_t p = 0;
    for (int i = 0; i < n; ++i) {
      const int bi = (m >> i) & 1;
      for (int j = i + 1; j < n; ++j, ++p) {
        const int bj = (m >> j) & 1;
        e += (bi == bj ? -0.25 : 0.25) * wz_pair[p];
      }
    }
    diag_[m] = e;
  }
}

void Hamiltonian::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
  const std::size_t dim = this->dim();
  out.resize(static_cast<Eigen::Index>(dim));
  for (std::uint32_t m = 0; m < dim; ++m) out[m] = diag_[m] * in[m];
  for (const Bond& bond : bonds_) {
    const std::uint32_t lo = bond.mask & (~bond.mask + 1);
    const std::uint32_t hi = bond.mask ^ lo;
    for (std::uint32_t m = 0; m < dim; ++m) {
      const bool same = (((m & lo) != 0) == ((m & hi) != 0));
      out[m ^ bond.mask] += (same ? bond.flip_equal : bond.flip_differ) * in[m];
    }
  }
}

Eigen::VectorXd Hamiltonian::apply(const Eigen::VectorXd& in) const {
  Eigen::VectorXd out;
  apply(in, out);
  return out;
}

Eigen::VectorXd apply_hamiltonian(const Eigen::VectorXd& state, int n,
                                  const CouplingProfile& couplings, double b) {
  if (state.size() != static_cast<Eigen::Index>(std::size_t{1} << n))
    throw InvalidFamilyParameter("state dimension must be 2^n");
  return Hamiltonian(n, couplings, b).apply(state);
}

namespace {

void sector_apply(const Hamiltonian& h, const SectorBasis& sec, const Eigen::VectorXd& in,
                  Eigen::VectorXd& out, Eigen::VectorXd& full_in, Eigen::VectorXd& full_out) {
  full_in.setZero(static_cast<Eigen::Index>(h.dim()));
  for (std::size_t s = 0; s < sec.states.size(); ++s) full_in[sec.states[s]] = in[static_cast<Eigen::Index>(s)];
  h.apply(full_in, full_out);
  out.resize(static_cast<Eigen::Index>(sec.states.size()));
  for (std::size_t s = 0; s < sec.states.size(); ++s) out[static_cast<Eigen::Index>(s)] = full_out[sec.states[s]];
}

Eigen::MatrixXd sector_matrix(const Hamiltonian& h, const SectorBasis& sec) {
  const std::size_t dim = sec.states.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  Eigen::VectorXd unit(static_cast<Eigen::Index>(dim)), col, fi, fo;
  for (std::size_t s = 0; s < dim; ++s) {
    unit.setZero();
    unit[static_cast<Eigen::Index>(s)] = 1.0;
    sector_apply(h, sec, unit, col, fi, fo);
    m.col(static_cast<Eigen::Index>(s)) = col;
  }
  return m;
}

// Lowest eigenpair by Lanczos with full reorthogonalization and thick
// restarts; deterministic start vector.
double lanczos_lowest(const Hamiltonian& h, const SectorBasis& sec, Eigen::VectorXd& evec) {
  const Eigen::Index dim = static_cast<Eigen::Index>(sec.states.size());
  constexpr int kMaxBasis = 160;
  constexpr int kMaxRestart = 30;
  constexpr double kTol = 1e-10;

  std::mt19937_64 rng(0x2545F4914F6CDD1DULL ^ (static_cast<std::uint64_t>(dim) << 8) ^
                      sec.states.front());
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v0(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v0[i] = gauss(rng);
  v0.normalize();

  Eigen::VectorXd full_in, full_out, w;
  std::vector<Eigen::VectorXd> basis;
  std::vector<double> a, bb;

  for (int restart = 0; restart < kMaxRestart; ++restart) {
    basis.clear();
    a.clear();
    bb.clear();
    basis.push_back(v0);
    for (int j = 0; j < kMaxBasis; ++j) {
      sector_apply(h, sec, basis.back(), w, full_in, full_out);
      if (j > 0) w -= bb[static_cast<size_t>(j - 1)] * basis[static_cast<size_t>(j - 1)];
      const double aj = basis.back().dot(w);
      w -= aj * basis.back();
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& u : basis) w -= u.dot(w) * u;
      a.push_back(aj);
      const double beta = w.norm();

      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
      Eigen::VectorXd sub(static_cast<Eigen::Index>(bb.size()));
      for (std::size_t i = 0; i < bb.size(); ++i) sub[static_cast<Eigen::Index>(i)] = bb[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub);
      const Eigen::Index m = diag.size();
      const double theta = tri.eigenvalues()(0);
      const Eigen::VectorXd s = tri.eigenvectors().col(0);
      const double residual = beta * std::abs(s(m - 1));

      if (residual < kTol * std::max(1.0, std::abs(theta)) || beta < 1e-13) {
        evec.setZero(dim);
        for (Eigen::Index i = 0; i < m; ++i) evec += s(i) * basis[static_cast<size_t>(i)];
        evec.normalize();
        return theta;
      }
      bb.push_back(beta);
      basis.push_back(w / beta);
      if (j == kMaxBasis - 1) {
        v0.setZero(dim);
        for (Eigen::Index i = 0; i < m; ++i) v0 += s(i) * basis[static_cast<size_t>(i)];
        v0.normalize();
      }
    }
  }
  throw NoConvergence("Lanczos did not converge");
}

Eigen::VectorXd expand_to_full(const Eigen::VectorXd& compact, const SectorBasis& sec, int n) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  for (std::size_t s = 0; s < sec.states.size(); ++s) full[sec.states[s]] = compact[static_cast<Eigen::Index>(s)];
  return full;
}

struct PairObservables {
  double ax, ay, az, sz;
};

PairObservables pair_observables(const Eigen::Matrix4d& r) {
  PairObservables o;
  o.ax = 0.25 * (r(0, 3) + r(1, 2) + r(2, 1) + r(3, 0));
  o.ay = 0.25 * (-r(0, 3) + r(1, 2) + r(2, 1) - r(3, 0));
  o.az = 0.25 * (r(0, 0) - r(1, 1) - r(2, 2) + r(3, 3));
  o.sz = 0.5 * (r(0, 0) + r(1, 1) - r(2, 2) - r(3, 3));
  return o;
}

void fill_observables(EdResult& res, const std::vector<Eigen::Matrix4d>& rho2) {
  const int n = res.n;
  res.rho2 = rho2;
  res.concurrence.assign(static_cast<size_t>(n), 0.0);
  for (auto& v : res.alpha) v.assign(static_cast<size_t>(n), 0.0);
  for (int j = 1; j < n; ++j) {
    const auto o = pair_observables(rho2[static_cast<size_t>(j)]);
    res.alpha[0][static_cast<size_t>(j)] = o.ax;
    res.alpha[1][static_cast<size_t>(j)] = o.ay;
    res.alpha[2][static_cast<size_t>(j)] = o.az;
    res.concurrence[static_cast<size_t>(j)] = wootters_concurrence(rho2[static_cast<size_t>(j)]);
  }
  res.sz = pair_observables(rho2[1]).sz;
  for (auto& v : res.alpha) v[0] = 0.25;
}

}  // namespace

Eigen::Matrix4d reduced_two_spin(const Eigen::VectorXd& state, int n, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw InvalidFamilyParameter("reduced_two_spin: sites must be distinct and in range");
  const std::size_t dim = std::size_t{1} << n;
  if (state.size() != static_cast<Eigen::Index>(dim))
    throw InvalidFamilyParameter("reduced_two_spin: state dimension must be 2^n");

  Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
  const std::uint32_t bi = std::uint32_t{1} << i;
  const std::uint32_t bj = std::uint32_t{1} << j;
  for (std::uint32_t m = 0; m < dim; ++m) {
    const double amp = state[m];
    if (amp == 0.0) continue;
    const int row = two_site_index((m & bi) != 0, (m & bj) != 0);
    for (int a = 0; a < 2; ++a) {
      for (int c = 0; c < 2; ++c) {
        std::uint32_t mp = m & ~(bi | bj);
        if (a) mp |= bi;
        if (c) mp |= bj;
        rho(row, two_site_index(a, c)) += amp * state[mp];
      }
    }
  }
  return rho;
}

double wootters_concurrence(const Eigen::Matrix4d& rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-8 || (rho - rho.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw InvalidDensityMatrix("two-qubit density matrix must be symmetric with unit trace");
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
      throw InvalidDensityMatrix("two-qubit density matrix has a negative eigenvalue");
  }
  Eigen::Matrix4d y = Eigen::Matrix4d::Zero();
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  const Eigen::Matrix4d r = rho * y * rho * y;
  Eigen::EigenSolver<Eigen::Matrix4d> es(r);
  std::array<double, 4> s{};
  for (int i = 0; i < 4; ++i) s[static_cast<size_t>(i)] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(s.begin(), s.end(), std::greater<>());
  return std::max(0.0, s[0] - s[1] - s[2] - s[3]);
}

EdResult ground_state(int n, const CouplingProfile& couplings, double b) {
  if (n < 2 || n > kMaxGroundN)
    throw ResourceLimit("ED ground state supports 2 <= n <= " + std::to_string(kMaxGroundN));

  const Hamiltonian h(n, couplings, b);
  EdResult res;
  res.n = n;

  std::array<Eigen::VectorXd, 2> sector_state;
  for (int p = 0; p < 2; ++p) {
    const SectorBasis sec = parity_sector(n, p);
    if (n <= kMaxDenseN) {
      const Eigen::MatrixXd hm = sector_matrix(h, sec);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm);
      res.sector_energy[static_cast<size_t>(p)] = es.eigenvalues()(0);
      sector_state[static_cast<size_t>(p)] = expand_to_full(es.eigenvectors().col(0), sec, n);
    } else {
      Eigen::VectorXd compact;
      res.sector_energy[static_cast<size_t>(p)] = lanczos_lowest(h, sec, compact);
      sector_state[static_cast<size_t>(p)] = expand_to_full(compact, sec, n);
    }
  }

  const int best = res.sector_energy[0] <= res.sector_energy[1] ? 0 : 1;
  res.ground_energy = res.sector_energy[static_cast<size_t>(best)];
  res.gap = std::abs(res.sector_energy[0] - res.sector_energy[1]);
  res.near_degenerate = res.gap < 1e-10 * std::max(1.0, std::abs(res.ground_energy));
  res.parity = best == 0 ? +1 : -1;
  res.ground_state = sector_state[static_cast<size_t>(best)];

  std::vector<Eigen::Matrix4d> rho2(static_cast<size_t>(n), Eigen::Matrix4d::Zero());
  for (int j = 1; j < n; ++j) rho2[static_cast<size_t>(j)] = reduced_two_spin(res.ground_state, n, 0, j);
  fill_observables(res, rho2);
  return res;
}

struct ThermalSolver::Impl {
  int n = 0;
  double b = 0.0;
  std::vector<double> energies;                      // all sector eigenvalues, concatenated
  std::vector<int> parity;                           // per eigenstate
  std::vector<std::vector<Eigen::Matrix4d>> rho2;    // per eigenstate, per separation
  std::array<double, 2> sector_min{0.0, 0.0};
};

ThermalSolver::ThermalSolver(int n, const CouplingProfile& couplings, double b)
    : impl_(std::make_unique<Impl>()) {
  if (n < 2 || n > kMaxThermalN)
    throw ResourceLimit("ED thermal solver supports 2 <= n <= " + std::to_string(kMaxThermalN));
  impl_->n = n;
  impl_->b = b;
  const Hamiltonian h(n, couplings, b);
  for (int p = 0; p < 2; ++p) {
    const SectorBasis sec = parity_sector(n, p);
    const Eigen::MatrixXd hm = sector_matrix(h, sec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm);
    impl_->sector_min[static_cast<size_t>(p)] = es.eigenvalues()(0);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      impl_->energies.push_back(es.eigenvalues()(i));
      impl_->parity.push_back(p == 0 ? +1 : -1);
      const Eigen::VectorXd full = expand_to_full(es.eigenvectors().col(i), sec, n);
      std::vector<Eigen::Matrix4d> r(static_cast<size_t>(n), Eigen::Matrix4d::Zero());
      for (int j = 1; j < n; ++j) r[static_cast<size_t>(j)] = reduced_two_spin(full, n, 0, j);
      impl_->rho2.push_back(std::move(r));
    }
  }
}

ThermalSolver::~ThermalSolver() = default;
ThermalSolver::ThermalSolver(ThermalSolver&&) noexcept = default;

Eigen::Matrix4d ThermalSolver::rho2_at(double T, int j) const {
  if (T <= 0.0) throw InvalidFamilyParameter("thermal solver requires T > 0");
  const double beta = 1.0 / T;
  const double e0 = *std::min_element(impl_->energies.begin(), impl_->energies.end());
  double z = 0.0;
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  for (std::size_t i = 0; i < impl_->energies.size(); ++i) {
    const double w = std::exp(-beta * (impl_->energies[i] - e0));
    z += w;
    acc += w * impl_->rho2[i][static_cast<size_t>(j)];
  }
  return acc / z;
}

EdResult ThermalSolver::at(double T) const {
  EdResult res;
  res.n = impl_->n;
  res.sector_energy = impl_->sector_min;
  const int best = impl_->sector_min[0] <= impl_->sector_min[1] ? 0 : 1;
  res.ground_energy = impl_->sector_min[static_cast<size_t>(best)];
  res.gap = std::abs(impl_->sector_min[0] - impl_->sector_min[1]);
  res.near_degenerate = res.gap < 1e-10 * std::max(1.0, std::abs(res.ground_energy));
  res.parity = best == 0 ? +1 : -1;

  std::vector<Eigen::Matrix4d> rho2(static_cast<size_t>(impl_->n), Eigen::Matrix4d::Zero());
  for (int j = 1; j < impl_->n; ++j) rho2[static_cast<size_t>(j)] = rho2_at(T, j);
  fill_observables(res, rho2);
  return res;
}

double ThermalSolver::limit_temperature(int j, double tol) const {
  auto conc = [&](double T) { return wootters_concurrence(rho2_at(T, j)); };
  const double c0 = conc(1e-8);
  if (c0 <= 1e-13)
    throw NoPositiveConcurrence("ED C_" + std::to_string(j) + " vanishes already at T = 0");

  double lo = 1e-8;
  double hi = std::max(std::abs(impl_->b), 1.0);
  int expand = 0;
  while (conc(hi) > 1e-13) {
    lo = hi;
    hi *= 1.5;
    if (++expand > 120) throw NoConvergence("ED limit temperature bracket not found");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (conc(mid) > 1e-13 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

EdResult thermal_state(int n, const CouplingProfile& couplings, double b, double T) {
  if (T <= 0.0) throw InvalidFamilyParameter("thermal_state requires T > 0");
  return ThermalSolver(n, couplings, b).at(T);
}

}  // namespace cmf::ed
