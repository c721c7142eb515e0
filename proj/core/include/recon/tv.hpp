#pragma once

#include <functional>

#include "recon/fourier.hpp"

namespace recon {

/// Vertical (x1 = D_N A) and horizontal (x2 = A D_M^T) forward differences.
/// The last difference along each axis is zero.
struct GradientField {
  ComplexImage x1;
  ComplexImage x2;
};

GradientField grad(const ComplexImage& a);
GradientField grad(const Image& a);

/// Adjoint of grad: D_N^T X1 + X2 D_M, so that <grad A, X> = <A, div_adjoint X>.
ComplexImage div_adjoint(const GradientField& x);

/// sum_k sqrt(|x1(k)|^2 + |x2(k)|^2).
double tv_norm(const GradientField& x);
/// max_k sqrt(|x1(k)|^2 + |x2(k)|^2).
double sup_norm(const GradientField& x);

/// Pixelwise projection onto the unit disc, the resolvent of the dual of the
/// isotropic l1 norm.
GradientField prox_dual(const GradientField& x);

/// Data-proximity resolvent in the Fourier domain:
/// (S~ + tl P o S) / (E + tl P), componentwise.
Spectrum prox_data(const Spectrum& s_tilde, const Spectrum& s_masked, const Mask& mask, double tau_lambda);

enum class DualNormalization {
  kPixelwise,  // true resolvent
  kGlobal,     // divide the whole field by max(1, sup norm)
};

struct TvParams {
  double tau = 0.03;
  double sigma = 0.01 + 1.0 / (8.0 * 0.03);
  double theta = 1.0;
  double lambda = 100.0;
  int iterations = 250;
  DualNormalization normalization = DualNormalization::kPixelwise;

  /// sigma = 0.01 + 1/(8 tau); slightly violates 8 tau sigma < 1 and is
  /// accepted with a warning.
  static double default_sigma(double tau) { return 0.01 + 1.0 / (8.0 * tau); }
};

struct TvProgress {
  int iteration = 0;
  double objective = 0.0;
  double data_fidelity = 0.0;
};

using TvCallback = std::function<void(const TvProgress&)>;

struct TvResult {
  Image image;
  /// ||Im(A)||_F / ||A||_F of the final iterate before the real part is taken.
  double imag_ratio = 0.0;
  /// 8 tau sigma >= 1 was accepted for the default sigma.
  bool step_warning = false;
};

/// lambda/2 ||P o (dft2(A) - S)||^2 + ||grad A||_1.
double tv_objective(const Image& a, const Spectrum& s_masked, const Mask& mask, double lambda);

/// Primal-dual minimization of lambda/2 ||P o (A^ - S)||^2 + ||grad A||_1,
/// started from the zero-refill image. For Hermitian-symmetric masks the
/// imaginary part of the result must stay below 1e-9 ||A||; for other masks
/// the real part of the complex iterate is returned.
TvResult tv_minimize(const Spectrum& s_masked, const Mask& mask, const TvParams& params,
                     const TvCallback& progress = {});

}  // namespace recon
