#pragma once

#include <stdexcept>
#include <string>

namespace recon {

/// Base of every error raised by the library.
class ReconError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input or parameters: dimension mismatch, bad pattern budget,
/// asymmetric pattern where symmetry is required, unsupported file format.
class ConfigError : public ReconError {
 public:
  using ReconError::ReconError;
};

/// Least-squares calibration has fewer equations than unknowns.
class InsufficientCalibration : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Iteration diverged, produced NaN, or violated a proven bound.
class NumericalError : public ReconError {
 public:
  using ReconError::ReconError;
};

}  // namespace recon
