#pragma once

#include <vector>

#include "recon/fourier.hpp"

namespace recon {

/// Real window over Lambda_N, zero outside [support_lo, support_hi].
struct WindowVector {
  std::vector<double> weights;  // storage order: weights[k + N/2]
  int support_lo = 0;
  int support_hi = -1;

  int size() const { return static_cast<int>(weights.size()); }
  double at(int k) const { return weights[static_cast<std::size_t>(k + size() / 2)]; }
  double& at(int k) { return weights[static_cast<std::size_t>(k + size() / 2)]; }
};

/// Indicator of Lambda_L (the Dirichlet window).
WindowVector dirichlet_window(int lowpass, int n);

/// 0.54 + 0.46 cos(2 pi k / (2 l)) on -l..l, zero elsewhere. Requires 1 <= l <= N/2.
WindowVector hamming_window(int half_width, int n);

/// Inverse DFT after replacing unacquired coefficients by zero.
ComplexImage zero_refill(const Spectrum& s_masked, const Mask& mask);

/// Column-wise filtering of the acquired spectrum: F^-1 ((w 1^T) o S) F^-1.
/// The window support must be inside the acquired rows.
ComplexImage window_recon(const Spectrum& s_masked, const Mask& mask, const WindowVector& w);

/// Which half of the rows is acquired in the L = 0, r = 2 interpolation setting.
enum class AcquiredRows { kOdd, kEven };

/// Complex n x M interpolation weights indexed by Lambda_n x Lambda_M, extended
/// periodically.
struct InterpWeights {
  ComplexImage w;

  /// sqrt(Mn) F_n^-1 W F_M^-1, the scaled inverse DFT of the weights.
  ComplexImage check() const;
};

/// Fills the missing half of the rows by the global convolution scheme
///   a~(2nu1, nu2) = sum_l w(nu1 - l1, nu2 - l2) a(2 l1 + 1, l2)
/// (roles of even and odd swapped for AcquiredRows::kEven) and returns the
/// inverse DFT of the completed spectrum. Entries in the unacquired rows must
/// be zero.
ComplexImage interpolate_half_rows(const Spectrum& s_half, const InterpWeights& w,
                                  AcquiredRows acquired = AcquiredRows::kOdd);

/// Closed form of the same reconstruction:
///   odd rows:  a~(k) = 1/2 (1 + w^(k) w_N^k1) (a(k1, k2) - a(k1 - n, k2))
///   even rows: a~(k) = 1/2 (1 + w_N^-k1 w^(k)) (a(k1, k2) + a(k1 - n, k2))
/// for every k1 in Lambda_N (indices taken periodically).
ComplexImage interpolate_half_rows_closed_form(const ComplexImage& a, const InterpWeights& w,
                              AcquiredRows acquired = AcquiredRows::kOdd);

}  // namespace recon
