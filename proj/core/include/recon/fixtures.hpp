#pragma once

#include <cstdint>

#include "recon/grid.hpp"

namespace recon {

/// Synthetic test images with values in [0, 1], for runs without downloads.

/// Modified Shepp-Logan head phantom (ten ellipses).
Image shepp_logan(int n);

/// Piecewise-smooth scene with shaded shapes, thin structures, a textured
/// ground region and fine 1/f texture. Deterministic in the seed.
Image natural_surrogate(int n, std::uint64_t seed = 1);

/// Zero-mean, unit-variance random field with spectral amplitude |f|^-exponent.
Image fractal_texture(int n, double exponent, std::uint64_t seed);

/// Linear ramp from 0 (top-left) to 1 (bottom-right).
Image gradient_image(int n, int m);

Image checkerboard(int n, int m, int cell);

/// Disk of value 1 on 0 background; radius in the normalized [-1, 1] coordinates.
Image disk_image(int n, double radius);

/// Uniform noise in [0, 1].
Image random_image(int n, int m, std::uint64_t seed);

}  // namespace recon
