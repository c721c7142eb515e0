#pragma once

#include <optional>
#include <string>
#include <vector>

#include "recon/fourier.hpp"

namespace recon {

struct Offset {
  int j1 = 0;
  int j2 = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Centered neighborhood {-p1..p1} x {-p2..p2}.
struct NeighborhoodWindow {
  int p1 = 5;
  int p2 = 5;

  int height() const { return 2 * p1 + 1; }
  int width() const { return 2 * p2 + 1; }
  int size() const { return height() * width(); }
  /// Row-major offsets, (-p1, -p2) first.
  std::vector<Offset> offsets() const;
  /// Position of offset j in offsets().
  int index_of(Offset j) const { return (j.j1 + p1) * width() + (j.j2 + p2); }
};

/// Inclusive centered index box; calibration equations live inside it.
struct CalibrationRegion {
  int row_lo = 0;
  int row_hi = -1;
  int col_lo = 0;
  int col_hi = -1;

  bool contains(int nu1, int nu2) const { return nu1 >= row_lo && nu1 <= row_hi && nu2 >= col_lo && nu2 <= col_hi; }
  bool empty() const { return row_hi < row_lo || col_hi < col_lo; }

  /// Lambda_L x Lambda_M.
  static CalibrationRegion lowpass(int lowpass, int m);
  /// Largest fully acquired block of contiguous rows and columns around the origin.
  static CalibrationRegion from_mask(const Mask& mask);
};

/// Acquired-offset patterns of the unacquired positions of a mask. Neighbor
/// indices are taken periodically.
struct PatternSet {
  static constexpr int kAcquired = -1;
  static constexpr int kEmpty = -2;  // no acquired neighbor; stays zero

  NeighborhoodWindow window;
  std::vector<std::vector<Offset>> patterns;
  /// Per position: pattern id, kAcquired or kEmpty.
  Grid<int> assignment;

  long empty_count() const;
};

PatternSet enumerate_patterns(const Mask& mask, const NeighborhoodWindow& window);

/// Least-squares weights g minimizing sum |s(nu) - sum_j g_j s(nu + j)|^2 over
/// all nu with nu and nu + P inside the calibration region. Throws
/// InsufficientCalibration when there are fewer equations than offsets.
std::vector<Complex> fit_grappa_weights(const Spectrum& s, const CalibrationRegion& region,
                                        const std::vector<Offset>& pattern);

struct GrappaOptions {
  NeighborhoodWindow window;
  /// Defaults to CalibrationRegion::from_mask.
  std::optional<CalibrationRegion> region;
  /// Rethrow InsufficientCalibration instead of leaving the positions zero.
  bool strict = false;
};

struct GrappaResult {
  Image image;
  Spectrum spectrum;
  int pattern_count = 0;
  int unfittable_patterns = 0;
  long zero_filled_positions = 0;  // empty or unfittable patterns
};

GrappaResult grappa_reconstruct(const Spectrum& s_masked, const Mask& mask, const GrappaOptions& options = {});

/// Self-consistency kernel on the punctured window; g at the center is zero.
struct SpiritKernel {
  NeighborhoodWindow window;
  std::vector<Complex> g;  // indexed like window.offsets()

  Complex at(Offset j) const { return g[static_cast<std::size_t>(window.index_of(j))]; }
};

SpiritKernel fit_spirit_kernel(const Spectrum& s, const CalibrationRegion& region, const NeighborhoodWindow& window);

/// (G S)(nu) = sum_j g_j S(nu + j), indices periodic. Direct evaluation.
Spectrum spirit_apply_G(const Spectrum& s, const SpiritKernel& kernel);

/// Image-domain multiplier c with G = dft2 o diag(c) o idft2:
/// c(k) = sum_j g_j w_N^(k1 j1) w_M^(k2 j2).
ComplexImage spirit_multiplier(const SpiritKernel& kernel, int n, int m);

struct SpiritParams {
  double lambda = 1.0;
  /// Step size. Unset: min(0.5, 1 / (1 + lambda ||G - I||^2)).
  std::optional<double> mu;
  int iterations = 100;
};

struct SpiritResult {
  Image image;
  Spectrum spectrum;
  double mu = 0.0;
  std::vector<double> objective;  // after each iteration
};

/// Gradient iteration x <- x - mu (P o (x - S) + lambda (G - I)^H (G - I) x)
/// started at the masked data. Throws NumericalError when the objective grows
/// for 10 consecutive steps.
SpiritResult spirit_reconstruct(const Spectrum& s_masked, const Mask& mask, const SpiritKernel& kernel,
                                const SpiritParams& params = {});

}  // namespace recon
