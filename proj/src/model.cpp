#include "cmf/model.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace cmf {

void ChainSpec::validate() const {
  if (n < 2) throw InvalidFamilyParameter("ChainSpec: n must be >= 2, got " + std::to_string(n));
  if (!std::isfinite(b) || !std::isfinite(temperature))
    throw InvalidFamilyParameter("ChainSpec: b and temperature must be finite");
  if (temperature < 0.0) throw InvalidFamilyParameter("ChainSpec: temperature must be >= 0");
}

std::string family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::PowerLaw: return "powerlaw";
    case FamilyKind::FiniteRangeConstant: return "finiterange";
    case FamilyKind::Lipkin: return "lipkin";
    case FamilyKind::NearestNeighbor: return "nn";
    case FamilyKind::Custom: return "custom";
  }
  return "unknown";
}

CouplingFamily CouplingFamily::power_law(double alpha, double vx, double vy, double vz) {
  CouplingFamily f;
  f.kind = FamilyKind::PowerLaw;
  f.alpha = alpha;
  f.amplitude = {vx, vy, vz};
  return f;
}

CouplingFamily CouplingFamily::finite_range(int L, double vx, double vy, double vz) {
  CouplingFamily f;
  f.kind = FamilyKind::FiniteRangeConstant;
  f.range = L;
  f.amplitude = {vx, vy, vz};
  return f;
}

CouplingFamily CouplingFamily::lipkin(double vx, double vy, double vz) {
  CouplingFamily f;
  f.kind = FamilyKind::Lipkin;
  f.amplitude = {vx, vy, vz};
  return f;
}

CouplingFamily CouplingFamily::nearest_neighbor(double vx, double vy, double vz) {
  CouplingFamily f;
  f.kind = FamilyKind::NearestNeighbor;
  f.amplitude = {vx, vy, vz};
  return f;
}

CouplingFamily CouplingFamily::custom(std::vector<double> shape, double vx, double vy, double vz) {
  CouplingFamily f;
  f.kind = FamilyKind::Custom;
  f.shape = std::move(shape);
  f.amplitude = {vx, vy, vz};
  return f;
}

namespace {

// Unnormalized shape of a generated family; index = separation, slot 0 = 0.
std::vector<double> raw_shape(const CouplingFamily& family, int n) {
  std::vector<double> r(static_cast<size_t>(n), 0.0);
  switch (family.kind) {
    case FamilyKind::PowerLaw: {
      if (family.alpha < 0.0)
        throw InvalidFamilyParameter("PowerLaw: alpha must be >= 0, got " + std::to_string(family.alpha));
      for (int j = 1; j < n; ++j) {
        const int d = std::min(j, n - j);
        r[static_cast<size_t>(j)] = std::pow(static_cast<double>(d), -family.alpha);
      }
      break;
    }
    case FamilyKind::FiniteRangeConstant: {
      const int L = family.range;
      if (L < 1 || 2 * L > n)
        throw InvalidFamilyParameter("FiniteRangeConstant: need 1 <= L <= n/2, got L = " +
                                     std::to_string(L) + ", n = " + std::to_string(n));
      for (int j = 1; j < n; ++j)
        if (std::min(j, n - j) <= L) r[static_cast<size_t>(j)] = 1.0;
      break;
    }
    case FamilyKind::Lipkin: {
      for (int j = 1; j < n; ++j) r[static_cast<size_t>(j)] = 1.0;
      break;
    }
    case FamilyKind::NearestNeighbor: {
      r[1] += 1.0;
      r[static_cast<size_t>(n - 1)] += 1.0;  // n = 2: both deltas land on j = 1
      break;
    }
    case FamilyKind::Custom: {
      if (static_cast<int>(family.shape.size()) != n - 1)
        throw InvalidFamilyParameter("Custom: shape table must have length n-1 = " +
                                     std::to_string(n - 1) + ", got " +
                                     std::to_string(family.shape.size()));
      for (int j = 1; j < n; ++j) r[static_cast<size_t>(j)] = family.shape[static_cast<size_t>(j - 1)];
      break;
    }
  }
  return r;
}

void check_symmetric(const std::vector<double>& table) {
  const int n = static_cast<int>(table.size());
  double scale = 0.0;
  for (double v : table) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int j = 1; j < n; ++j) {
    if (std::abs(table[static_cast<size_t>(j)] - table[static_cast<size_t>(n - j)]) > tol)
      throw SymmetryViolation("coupling table violates v(j) = v(n-j) at j = " + std::to_string(j));
  }
}

}  // namespace

std::vector<double> fourier_couplings(const std::vector<double>& real_space) {
  const int n = static_cast<int>(real_space.size());
  if (n < 2) throw InvalidFamilyParameter("fourier_couplings: table must have length n >= 2");
  check_symmetric(real_space);

  double scale = 0.0;
  for (double v : real_space) scale += std::abs(v);

  std::vector<double> out(static_cast<size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double arg = -2.0 * std::numbers::pi * k * j / n;
      acc += real_space[static_cast<size_t>(j)] * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, scale))
      throw SymmetryViolation("fourier_couplings: imaginary residue " + std::to_string(acc.imag()) +
                              " at k = " + std::to_string(k));
    out[static_cast<size_t>(k)] = acc.real();
  }
  return out;
}

CouplingProfile build_couplings(const CouplingFamily& family, int n) {
  if (n < 2) throw InvalidFamilyParameter("build_couplings: n must be >= 2, got " + std::to_string(n));

  std::vector<double> shape = raw_shape(family, n);
  if (family.kind == FamilyKind::Custom) check_symmetric(shape);

  double total = 0.0;
  for (double r : shape) total += r;

  // Generated families are rescaled so vt^mu_0 = v^mu; Custom is taken as given.
  std::vector<double> norm_shape(static_cast<size_t>(n), 0.0);
  if (total != 0.0)
    for (int j = 0; j < n; ++j) norm_shape[static_cast<size_t>(j)] = shape[static_cast<size_t>(j)] / total;

  CouplingProfile profile;
  profile.n = n;
  profile.common_shape = norm_shape;
  for (int mu = 0; mu < 3; ++mu) {
    const double amp = family.amplitude[static_cast<size_t>(mu)];
    const double slot_scale = (family.kind == FamilyKind::Custom) ? amp : 0.0;
    std::vector<double> table(static_cast<size_t>(n), 0.0);
    for (int j = 1; j < n; ++j) {
      table[static_cast<size_t>(j)] = (family.kind == FamilyKind::Custom)
                                          ? slot_scale * shape[static_cast<size_t>(j)]
                                          : amp * norm_shape[static_cast<size_t>(j)];
    }
    profile.fourier[static_cast<size_t>(mu)] = fourier_couplings(table);
    profile.real_space[static_cast<size_t>(mu)] = std::move(table);
    profile.amplitude[static_cast<size_t>(mu)] = amp;
  }
  return profile;
}

}  // namespace cmf
