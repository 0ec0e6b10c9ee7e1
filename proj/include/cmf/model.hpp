#pragma once

#include <array>
#include <string>
#include <vector>

#include "cmf/errors.hpp"

namespace cmf {

/// Axis indices used throughout: 0 = x, 1 = y, 2 = z.
inline constexpr int kX = 0;
inline constexpr int kY = 1;
inline constexpr int kZ = 2;

/// Geometry and thermodynamic state of a cyclic spin-1/2 chain.
/// Energy units are set by the coupling amplitudes (k_B = 1).
struct ChainSpec {
  int n = 2;                 ///< site count, n >= 2
  double b = 0.0;            ///< transverse field along z
  double temperature = 0.0;  ///< T >= 0; T == 0 is an exact limit, not a small number

  bool zero_temperature() const { return temperature == 0.0; }
  double beta() const { return 1.0 / temperature; }
  void validate() const;
};

enum class FamilyKind { PowerLaw, FiniteRangeConstant, Lipkin, NearestNeighbor, Custom };

std::string family_name(FamilyKind kind);

/// One coupling shape shared by the three axes, scaled per axis by v^x, v^y, v^z.
struct CouplingFamily {
  FamilyKind kind = FamilyKind::NearestNeighbor;
  double alpha = 0.0;  ///< PowerLaw decay exponent (alpha >= 0; 0 gives the fully connected limit)
  int range = 1;       ///< FiniteRangeConstant interaction range L
  std::array<double, 3> amplitude{1.0, 0.0, 0.0};
  std::vector<double> shape;  ///< Custom only: r(j) for j = 1..n-1, must satisfy r(j) = r(n-j)

  static CouplingFamily power_law(double alpha, double vx, double vy, double vz = 0.0);
  static CouplingFamily finite_range(int L, double vx, double vy, double vz = 0.0);
  static CouplingFamily lipkin(double vx, double vy, double vz = 0.0);
  static CouplingFamily nearest_neighbor(double vx, double vy, double vz = 0.0);
  static CouplingFamily custom(std::vector<double> shape, double vx, double vy, double vz = 0.0);
};

/// Real-space coupling tables v^mu(j) and their discrete Fourier transforms.
///
/// Tables are stored with the separation as index (slot 0 is always zero: no
/// self coupling). Symmetry v(j) = v(n-j) makes every Fourier coefficient real
/// and symmetric in k. Note the bond between a fixed pair at separation j
/// carries total strength 2 v^mu(j): both ordered terms of the Hamiltonian
/// sum contribute.
struct CouplingProfile {
  int n = 0;
  std::array<std::vector<double>, 3> real_space;  ///< v^mu(j), j = 0..n-1
  std::array<std::vector<double>, 3> fourier;     ///< vt^mu_k, k = 0..n-1
  std::array<double, 3> amplitude{};              ///< nominal amplitudes (= vt^mu_0 for generated families)
  std::vector<double> common_shape;               ///< normalized shared shape r(j), sum_j r(j) = 1 (all-zero if v = 0)

  double v(int mu, int j) const { return real_space[static_cast<size_t>(mu)][static_cast<size_t>(j)]; }
  double vt(int mu, int k) const { return fourier[static_cast<size_t>(mu)][static_cast<size_t>(k)]; }
  /// Total coupling vt^mu_0 = sum_j v^mu(j).
  double v0(int mu) const { return fourier[static_cast<size_t>(mu)][0]; }
};

/// Builds the real-space and Fourier tables for a family on an n-site ring.
/// Generated families are normalized so that vt^mu_0 = v^mu; Custom tables are
/// taken as given. PowerLaw distances are cyclic, d(j) = min(j, n-j).
CouplingProfile build_couplings(const CouplingFamily& family, int n);

/// Discrete Fourier transform of a symmetric real-space table (length n,
/// slot 0 included). The imaginary residue is asserted below 1e-12 and
/// discarded; an asymmetric input throws SymmetryViolation.
std::vector<double> fourier_couplings(const std::vector<double>& real_space);

}  // namespace cmf
