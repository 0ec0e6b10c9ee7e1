#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "cmf/model.hpp"

// Exact-diagonalization reference, independent of every CMF code path.
// Basis states are n-bit integers, bit i = 1 meaning spin i up; the two-site
// basis ordering is |uu>, |ud>, |du>, |dd>.

namespace cmf::ed {

inline constexpr int kMaxApplyN = 20;
inline constexpr int kMaxGroundN = 18;
inline constexpr int kMaxDenseN = 12;
inline constexpr int kMaxThermalN = 12;

/// Matrix-free action of H = b sum_i S_zi - sum_{mu, i != j} v^mu(i-j) S_mui S_muj.
/// The unordered bond (i, i+d) carries weight v^mu(d) + v^mu(n-d) (= 2 v^mu(d)
/// for symmetric tables); asymmetric tables are supported for derivative
/// probes.
class Hamiltonian {
 public:
  Hamiltonian(int n, const CouplingProfile& couplings, double b);

  int n() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& in) const;
  double diagonal(std::uint32_t state) const { return diag_[state]; }

 private:
  struct Bond {
    std::uint32_t mask;
    double flip_equal;   // amplitude when the two bits agree
    double flip_differ;  // amplitude when they differ
  };
  int n_;
  std::vector<Bond> bonds_;
  std::vector<double> diag_;
};

Eigen::VectorXd apply_hamiltonian(const Eigen::VectorXd& state, int n,
                                  const CouplingProfile& couplings, double b);

/// Exact eigenstate or Gibbs-state observables.
struct EdResult {
  int n = 0;
  double ground_energy = 0.0;
  std::array<double, 2> sector_energy{0.0, 0.0};  ///< lowest energy in the even/odd parity sector
  double gap = 0.0;                               ///< |even - odd| splitting
  int parity = +1;                                ///< sector of the reported state (+1 even, -1 odd)
  bool near_degenerate = false;                   ///< gap below 1e-10
  Eigen::VectorXd ground_state;                   ///< full 2^n vector (empty for thermal results)
  std::vector<Eigen::Matrix4d> rho2;              ///< per separation, slot 0 unused
  std::vector<double> concurrence;
  std::array<std::vector<double>, 3> alpha;
  double sz = 0.0;
};

/// Lowest definite-parity eigenstate (dense for n <= 12, Lanczos above).
EdResult ground_state(int n, const CouplingProfile& couplings, double b);

/// Gibbs-state observables from the full spectrum (n <= 12, T > 0).
EdResult thermal_state(int n, const CouplingProfile& couplings, double b, double T);

/// Partial trace onto sites (i, j) of a pure state on n spins.
Eigen::Matrix4d reduced_two_spin(const Eigen::VectorXd& state, int n, int i, int j);

/// Wootters concurrence of a (real, symmetric) two-qubit density matrix.
double wootters_concurrence(const Eigen::Matrix4d& rho);

/// Full-spectrum thermal solver reused across temperatures (one
/// diagonalization per parameter set; observables are reweighted sums).
class ThermalSolver {
 public:
  ThermalSolver(int n, const CouplingProfile& couplings, double b);
  ~ThermalSolver();
  ThermalSolver(ThermalSolver&&) noexcept;

  EdResult at(double T) const;
  Eigen::Matrix4d rho2_at(double T, int j) const;
  /// Temperature where C_j(T) vanishes, bisected to `tol` absolute.
  double limit_temperature(int j, double tol = 1e-6) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cmf::ed
