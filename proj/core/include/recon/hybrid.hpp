#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "recon/fourier.hpp"

namespace recon {

enum class Axis { kVertical, kHorizontal };

/// N_s passes of the 3-tap filter (1, 2, 1)/4 along one axis; edge pixels use
/// (3a + a')/4 with their single neighbor a'.
Image smooth_vertical(const Image& a, int passes);
Image smooth_horizontal(const Image& a, int passes);

/// Local total variation over a 5 x 3 neighborhood: horizontal differences of
/// the pixel with its row neighbors plus the vertical differences in rows
/// k1-2 .. k1+2 and columns k2-1 .. k2+1. Terms reaching outside the image are
/// dropped.
Image local_tv_map(const Image& a);

/// Median of the map over [k1-g1, k1+g1] x [k2-g2, k2+g2], truncated at the
/// boundary. Even sample counts use the mean of the two central values.
Image mtv_map(const Image& tv, int gamma1, int gamma2);

/// Weights for the aliased partner pairs (k1, k1 + n) (vertical) or
/// (k2, k2 + m/2) (horizontal):
///   1 - eps  if mtv > 1.5 mtv(partner)
///   eps      if mtv(partner) > 1.5 mtv
///   mtv / (mtv + mtv(partner)) clamped to [eps, 1 - eps] otherwise
///   (0.5 when the sum is below 1e-14).
Image weight_matrix(const Image& mtv, double eps, Axis axis = Axis::kVertical);

/// idft2(P o (S - dft2(A))); A + R is consistent with the data on the mask.
ComplexImage residual(const Spectrum& s_masked, const Mask& mask, const ComplexImage& a);
ComplexImage residual(const Spectrum& s_masked, const Mask& mask, const Image& a);

struct HybridParams {
  double mu = 1.6;        // in [1, 2)
  double epsilon = 0.05;  // in (0, 0.5)
  int gamma1 = 3;
  int gamma2 = 3;
  int smoothing = 3;      // N_s
  int iterations = 10;    // N_I
  /// Stop once ||R_j|| / ||R_0|| drops below this value.
  std::optional<double> stop_tol;
  /// Recompute MTV and weights from the current iterate at every step.
  bool refresh_mtv = false;

  void validate() const;
};

struct HybridProgress {
  int iteration = 0;
  double residual_norm = 0.0;
  std::optional<double> psnr_db;
};

using HybridCallback = std::function<void(const HybridProgress&)>;

struct HybridResult {
  Image image;
  /// ||R_j||_F for j = 0 .. number of updates.
  std::vector<double> residual_norms;
  Image weights;
};

/// One update A + mu (W o R(A)).
ComplexImage hybrid_step(const ComplexImage& a, const Spectrum& s_masked, const Mask& mask, const Image& w, double mu);

/// Residual feedback with MTV-based weights for Hermitian-symmetric row masks.
/// Throws NumericalError if a step violates ||R_j+1|| <= (1 - eps) ||R_j||.
HybridResult hybrid_reconstruct(const Image& a_init, const Spectrum& s_masked, const Mask& mask,
                                const HybridParams& params, const HybridCallback& progress = {},
                                const Image* reference = nullptr);

/// Two-axis variant for box patterns: smoothing along both axes, vertical and
/// horizontal weights from a symmetrized local TV, update with their average.
HybridResult hybrid_reconstruct_box(const Image& a_init, const Spectrum& s_masked, const Mask& mask,
                                    const HybridParams& params, const HybridCallback& progress = {},
                                    const Image* reference = nullptr);

}  // namespace recon
