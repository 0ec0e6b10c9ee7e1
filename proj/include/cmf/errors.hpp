#pragma once

#include <stdexcept>
#include <string>

namespace cmf {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// model
class InvalidFamilyParameter : public Error { using Error::Error; };
class SymmetryViolation : public Error { using Error::Error; };

// meanfield
class NoConvergence : public Error { using Error::Error; };
class OutsideTreatedRegime : public Error { using Error::Error; };
class NotFactorizable : public Error { using Error::Error; };

// rpa_core
class PoleHit : public Error { using Error::Error; };
class ComplexEigenvalue : public Error { using Error::Error; };
class RpaInstability : public Error { using Error::Error; };
class StaticInstability : public Error { using Error::Error; };

// observables
class DerivativeMismatch : public Error { using Error::Error; };
class NoPositiveConcurrence : public Error { using Error::Error; };
class NegativeProbability : public Error { using Error::Error; };

// asymptotics
class SeriesDivergence : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };

// oracles
class ResourceLimit : public Error { using Error::Error; };
class NotNearestNeighbor : public Error { using Error::Error; };
class InvalidDensityMatrix : public Error { using Error::Error; };

// cli
class ConfigError : public Error { using Error::Error; };

}  // namespace cmf
