#pragma once

#include <array>
#include <vector>

#include "cmf/model.hpp"

// Exact free-fermion solver for the nearest-neighbor XY ring at T = 0, with
// parity projection: the even/odd fermion-number sectors see antiperiodic/
// periodic boundary conditions, and the occupation pattern of each sector is
// constrained to the matching number parity.

namespace cmf::jw {

struct Sector {
  int parity = +1;       ///< +1 even fermion number, -1 odd
  double energy = 0.0;   ///< constrained ground energy of the sector
  bool projected = false;  ///< an occupation had to be toggled to satisfy parity
  std::vector<double> momenta;
  std::vector<double> xi;          ///< b - v_+ cos k
  std::vector<double> delta;       ///< v_- sin k
  std::vector<double> lambda;      ///< quasiparticle energies sqrt(xi^2 + delta^2)
  std::vector<double> occupation;  ///< <n_k> in the sector ground state
  std::vector<double> pair_phi;    ///< Im<c_-k c_k> = delta/(2 lambda) for paired modes
  std::vector<double> g;           ///< contraction G(r), r = -n..n stored at index r + n
};

struct FermionSpectrum {
  int n = 0;
  double v_plus = 0.0, v_minus = 0.0, b = 0.0;
  std::array<Sector, 2> sector;  ///< [0] even, [1] odd
  int ground_sector = 0;
  double gap = 0.0;  ///< |E_even - E_odd|

  double ground_energy() const { return sector[static_cast<size_t>(ground_sector)].energy; }
};

/// Solves both parity sectors; amplitudes are the full bond strengths,
/// v_+- = (v^x +- v^y)/2.
FermionSpectrum jw_ground(int n, double v_plus, double v_minus, double b);

/// Same, reading the amplitudes off a NearestNeighbor profile
/// (throws NotNearestNeighbor for anything else, including v^z != 0).
FermionSpectrum jw_ground(const CouplingProfile& couplings, double b);

struct JwCorrelations {
  double alpha_x = 0.0, alpha_y = 0.0, alpha_z = 0.0, sz = 0.0;
};

/// Correlators at separation j in the global ground state, from determinants
/// of the fermionic contraction matrices.
JwCorrelations jw_correlations(const FermionSpectrum& spec, int j);

/// Correlators evaluated in one specific sector.
JwCorrelations jw_correlations_sector(const FermionSpectrum& spec, int sector_index, int j);

}  // namespace cmf::jw
