#include "recon/linear.hpp"

#include <cmath>
#include <numbers>

namespace recon {

namespace {

void check_weights_shape(const InterpWeights& w, int n_rows, int m_cols) {
  if (n_rows % 4 != 0) throw ConfigError("interpolation scheme requires N divisible by 4");
  if (w.w.rows() != n_rows / 2 || w.w.cols() != m_cols)
    throw ConfigError("dimension mismatch: interpolation weights must be (N/2) x M");
}

Complex unit_root(int exponent, int n) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(exponent) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

WindowVector dirichlet_window(int lowpass, int n) {
  if (lowpass < 1 || lowpass % 2 == 0 || lowpass > n) throw ConfigError("Dirichlet window needs odd 1 <= L <= N");
  WindowVector w;
  w.weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = lowpass / 2;
  for (int k = -half; k <= half; ++k) w.at(k) = 1.0;
  w.support_lo = -half;
  w.support_hi = half;
  return w;
}

WindowVector hamming_window(int half_width, int n) {
  if (half_width < 1) throw ConfigError("Hamming window half-width must be >= 1");
  if (half_width > n / 2 - 1 + (n % 2)) throw ConfigError("Hamming window half-width exceeds Lambda_N");
  WindowVector w;
  w.weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = -half_width; k <= half_width; ++k)
    w.at(k) = 0.54 + 0.46 * std::cos(2.0 * std::numbers::pi * k / (2.0 * half_width));
  w.support_lo = -half_width;
  w.support_hi = half_width;
  return w;
}

ComplexImage zero_refill(const Spectrum& s_masked, const Mask& mask) {
  require_same_shape(s_masked, mask, "zero_refill");
  return idft2_centered(apply_mask(s_masked, mask));
}

ComplexImage window_recon(const Spectrum& s_masked, const Mask& mask, const WindowVector& w) {
  require_same_shape(s_masked, mask, "window_recon");
  if (w.size() != s_masked.rows()) throw ConfigError("dimension mismatch: window length must equal N");
  for (int k = w.support_lo; k <= w.support_hi; ++k) {
    if (w.at(k) == 0.0) continue;
    for (int c = -(mask.cols() / 2); c < mask.cols() - mask.cols() / 2; ++c)
      if (!mask.acquired(k, c)) throw ConfigError("invalid window: support reaches unacquired rows");
  }
  Spectrum filtered(s_masked.rows(), s_masked.cols());
  const int hr = s_masked.rows() / 2;
  for (int i = 0; i < s_masked.rows(); ++i) {
    const double wk = w.at(i - hr);
    if (wk == 0.0) continue;
    for (int j = 0; j < s_masked.cols(); ++j) filtered(i, j) = wk * s_masked(i, j);
  }
  return idft2_centered(filtered);
}

ComplexImage InterpWeights::check() const {
  const int n = w.rows();
  const int m = w.cols();
  if (n % 2 != 0 || m % 2 != 0) throw ConfigError("interpolation weights need even dimensions");
  ComplexImage out = idft2_centered(w);
  const double scale = std::sqrt(static_cast<double>(n) * m);
  for (Complex& v : out.values()) v *= scale;
  return out;
}

ComplexImage interpolate_half_rows(const Spectrum& s_half, const InterpWeights& w, AcquiredRows acquired) {
  const int big_n = s_half.rows();
  const int m = s_half.cols();
  check_weights_shape(w, big_n, m);
  const int n = big_n / 2;
  const int offset_known = acquired == AcquiredRows::kOdd ? 1 : 0;
  const int offset_missing = 1 - offset_known;

  for (int nu1 = -n; nu1 < n; ++nu1) {
    if (((nu1 % 2) + 2) % 2 == offset_known) continue;
    for (int nu2 = -m / 2; nu2 < m / 2; ++nu2)
      if (s_half.at(nu1, nu2) != Complex{})
        throw ConfigError("precondition: spectrum has data in rows that should be unacquired");
  }

  Spectrum completed = s_half;
  // a~(2 nu1 + off_missing, nu2) = sum_l w(nu1 - l1, nu2 - l2) a(2 l1 + off_known, l2)
  for (int nu1 = -n / 2; nu1 < n / 2; ++nu1) {
    for (int nu2 = -m / 2; nu2 < m / 2; ++nu2) {
      Complex acc{};
      for (int l1 = -n / 2; l1 < n / 2; ++l1)
        for (int l2 = -m / 2; l2 < m / 2; ++l2)
          acc += w.w.wrapped(nu1 - l1, nu2 - l2) * s_half.at(2 * l1 + offset_known, l2);
      completed.at(2 * nu1 + offset_missing, nu2) = acc;
    }
  }
  return idft2_centered(completed);
}

ComplexImage interpolate_half_rows_closed_form(const ComplexImage& a, const InterpWeights& w, AcquiredRows acquired) {
  const int big_n = a.rows();
  const int m = a.cols();
  check_weights_shape(w, big_n, m);
  const int n = big_n / 2;
  const ComplexImage wc = w.check();
  ComplexImage out(big_n, m);
  for (int k1 = -n; k1 < n; ++k1) {
    for (int k2 = -m / 2; k2 < m / 2; ++k2) {
      const Complex partner = a.wrapped(k1 - n, k2);
      if (acquired == AcquiredRows::kOdd) {
        const Complex factor = 0.5 * (1.0 + wc.wrapped(k1, k2) * unit_root(k1, big_n));
        out.at(k1, k2) = factor * (a.at(k1, k2) - partner);
      } else {
        const Complex factor = 0.5 * (1.0 + unit_root(-k1, big_n) * wc.wrapped(k1, k2));
        out.at(k1, k2) = factor * (a.at(k1, k2) + partner);
      }
    }
  }
  return out;
}

}  // namespace recon
