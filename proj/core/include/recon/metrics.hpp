#pragma once

#include <limits>

#include "recon/fourier.hpp"

namespace recon {

/// Returned by psnr() when the reconstruction is exact.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// 10 log10(NM / ||rec - ref||_F^2) for images normalized to [0, 1]. An error
/// at round-off level (relative Frobenius error below 1e-13) counts as exact.
double psnr(const Image& reference, const Image& reconstruction);

/// Isotropic discrete total variation ||grad A||_1 with forward differences.
double discrete_tv(const Image& a);

/// Sum of |S(nu)|^2 over unacquired nu; equals the squared zero-refill error.
double missing_energy(const Spectrum& s_full, const Mask& mask);

/// ||P o (dft2(rec) - S)||_F.
double data_fidelity(const Image& reconstruction, const Spectrum& s_masked, const Mask& mask);

struct QualityReport {
  double psnr_db = 0.0;
  double frobenius_error = 0.0;
  double tv_value = 0.0;
  double data_fidelity = 0.0;
};

QualityReport evaluate(const Image& reference, const Image& reconstruction, const Spectrum& s_masked,
                       const Mask& mask);

}  // namespace recon
