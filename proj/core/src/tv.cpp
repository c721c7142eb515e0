#include "recon/tv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "recon/linear.hpp"

namespace recon {

GradientField grad(const ComplexImage& a) {
  const int n = a.rows();
  const int m = a.cols();
  GradientField g{ComplexImage(n, m), ComplexImage(n, m)};
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j < m; ++j) g.x1(i, j) = a(i + 1, j) - a(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < m; ++j) g.x2(i, j) = a(i, j + 1) - a(i, j);
  return g;
}

GradientField grad(const Image& a) { return grad(to_complex(a)); }

ComplexImage div_adjoint(const GradientField& x) {
  require_same_shape(x.x1, x.x2, "div_adjoint");
  const int n = x.x1.rows();
  const int m = x.x1.cols();
  ComplexImage out(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      Complex v{};
      if (i >= 1) v += x.x1(i - 1, j);
      if (i <= n - 2) v -= x.x1(i, j);
      if (j >= 1) v += x.x2(i, j - 1);
      if (j <= m - 2) v -= x.x2(i, j);
      out(i, j) = v;
    }
  }
  return out;
}

double tv_norm(const GradientField& x) {
  auto a = x.x1.values();
  auto b = x.x2.values();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::sqrt(std::norm(a[i]) + std::norm(b[i]));
  return s;
}

double sup_norm(const GradientField& x) {
  auto a = x.x1.values();
  auto b = x.x2.values();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::sqrt(std::norm(a[i]) + std::norm(b[i])));
  return s;
}

GradientField prox_dual(const GradientField& x) {
  GradientField y = x;
  auto a = y.x1.values();
  auto b = y.x2.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double mag = std::sqrt(std::norm(a[i]) + std::norm(b[i]));
    if (mag > 1.0) {
      a[i] /= mag;
      b[i] /= mag;
    }
  }
  return y;
}

Spectrum prox_data(const Spectrum& s_tilde, const Spectrum& s_masked, const Mask& mask, double tau_lambda) {
  require_same_shape(s_tilde, mask, "prox_data");
  require_same_shape(s_masked, mask, "prox_data");
  if (!(tau_lambda > 0.0)) throw ConfigError("prox_data needs tau * lambda > 0");
  Spectrum out = s_tilde;
  auto z = out.values();
  auto s = s_masked.values();
  auto p = mask.values();
  const double denom = 1.0 + tau_lambda;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (p[i] != 0.0) z[i] = (z[i] + tau_lambda * s[i]) / denom;
  return out;
}

double tv_objective(const Image& a, const Spectrum& s_masked, const Mask& mask, double lambda) {
  const Spectrum s = dft2_centered(a);
  auto r = s.values();
  auto d = s_masked.values();
  auto p = mask.values();
  double fid = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (p[i] != 0.0) fid += std::norm(r[i] - d[i]);
  return 0.5 * lambda * fid + tv_norm(grad(a));
}

namespace {

void validate(const TvParams& p, TvResult& result) {
  if (!(p.tau > 0.0) || !(p.sigma > 0.0)) throw ConfigError("TV step sizes tau and sigma must be positive");
  if (p.theta < 0.0 || p.theta > 1.0) throw ConfigError("TV extrapolation theta must lie in [0, 1]");
  if (!(p.lambda > 0.0)) throw ConfigError("TV data weight lambda must be positive");
  if (p.iterations < 0) throw ConfigError("TV iteration count must be nonnegative");
  if (8.0 * p.tau * p.sigma >= 1.0) {
    if (std::abs(p.sigma - TvParams::default_sigma(p.tau)) <= 1e-12 * p.sigma) {
      result.step_warning = true;
    } else {
      std::ostringstream os;
      os << "TV step sizes violate 8 tau sigma < 1 (8 tau sigma = " << 8.0 * p.tau * p.sigma << ")";
      throw ConfigError(os.str());
    }
  }
}

void dual_ascent(GradientField& x, const GradientField& g, double sigma, DualNormalization mode) {
  auto x1 = x.x1.values();
  auto x2 = x.x2.values();
  auto g1 = g.x1.values();
  auto g2 = g.x2.values();
  for (std::size_t i = 0; i < x1.size(); ++i) {
    x1[i] += sigma * g1[i];
    x2[i] += sigma * g2[i];
  }
  if (mode == DualNormalization::kPixelwise) {
    x = prox_dual(x);
  } else {
    const double s = std::max(1.0, sup_norm(x));
    for (std::size_t i = 0; i < x1.size(); ++i) {
      x1[i] /= s;
      x2[i] /= s;
    }
  }
}

}  // namespace

TvResult tv_minimize(const Spectrum& s_masked, const Mask& mask, const TvParams& params,
                     const TvCallback& progress) {
  require_same_shape(s_masked, mask, "tv_minimize");
  TvResult result;
  validate(params, result);

  const Spectrum data = apply_mask(s_masked, mask);
  const double tau_lambda = params.tau * params.lambda;

  ComplexImage a = idft2_centered(data);
  ComplexImage a_bar = a;
  GradientField x = grad(a);

  for (int it = 0; it < params.iterations; ++it) {
    dual_ascent(x, grad(a_bar), params.sigma, params.normalization);

    ComplexImage a_tilde = div_adjoint(x);
    {
      auto t = a_tilde.values();
      auto cur = a.values();
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = cur[i] - params.tau * t[i];
    }
    const Spectrum a_hat = prox_data(dft2_centered(a_tilde), data, mask, tau_lambda);
    ComplexImage a_next = idft2_centered(a_hat);

    auto nxt = a_next.values();
    auto cur = a.values();
    auto bar = a_bar.values();
    for (std::size_t i = 0; i < nxt.size(); ++i) {
      if (!std::isfinite(nxt[i].real()) || !std::isfinite(nxt[i].imag()))
        throw NumericalError("TV minimization produced a non-finite value");
      bar[i] = nxt[i] + params.theta * (nxt[i] - cur[i]);
    }
    a = std::move(a_next);

    if (progress) {
      auto h = a_hat.values();
      auto d = data.values();
      auto p = mask.values();
      double fid = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i)
        if (p[i] != 0.0) fid += std::norm(h[i] - d[i]);
      progress({it + 1, 0.5 * params.lambda * fid + tv_norm(grad(a)), std::sqrt(fid)});
    }
  }

  const double total = frobenius_norm(a);
  const double imag = frobenius_norm(imag_part(a));
  result.imag_ratio = total > 0.0 ? imag / total : 0.0;
  if (mask.is_hermitian_symmetric() && result.imag_ratio > 1e-9)
    throw NumericalError("TV iterate left the real subspace despite a symmetric mask");
  result.image = real_part(a);
  return result;
}

}  // namespace recon
