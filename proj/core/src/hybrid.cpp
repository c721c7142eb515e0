#include "recon/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "recon/metrics.hpp"

namespace recon {

namespace {

Image transpose(const Image& a) {
  Image t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

bool is_row_mask(const Mask& mask) {
  for (int i = 0; i < mask.rows(); ++i) {
    const auto r = mask.row(i);
    if (std::any_of(r.begin(), r.end(), [&](double v) { return v != r[0]; })) return false;
  }
  return true;
}

bool is_product_mask(const Mask& mask) {
  std::vector<bool> rows(static_cast<std::size_t>(mask.rows())), cols(static_cast<std::size_t>(mask.cols()));
  for (int i = 0; i < mask.rows(); ++i)
    for (int j = 0; j < mask.cols(); ++j)
      if (mask(i, j) != 0.0) rows[static_cast<std::size_t>(i)] = cols[static_cast<std::size_t>(j)] = true;
  for (int i = 0; i < mask.rows(); ++i)
    for (int j = 0; j < mask.cols(); ++j)
      if ((mask(i, j) != 0.0) != (rows[static_cast<std::size_t>(i)] && cols[static_cast<std::size_t>(j)])) return false;
  return true;
}

Image mtv_weights(const Image& a, const HybridParams& p) {
  return weight_matrix(mtv_map(local_tv_map(a), p.gamma1, p.gamma2), p.epsilon, Axis::kVertical);
}

Image box_weights(const Image& a, const HybridParams& p) {
  Image tv = local_tv_map(a);
  const Image tv_t = transpose(local_tv_map(transpose(a)));
  for (std::size_t i = 0; i < tv.size(); ++i) tv.values()[i] = 0.5 * (tv.values()[i] + tv_t.values()[i]);
  const Image mtv = mtv_map(tv, p.gamma1, p.gamma2);
  Image w = weight_matrix(mtv, p.epsilon, Axis::kVertical);
  const Image w2 = weight_matrix(mtv, p.epsilon, Axis::kHorizontal);
  for (std::size_t i = 0; i < w.size(); ++i) w.values()[i] = 0.5 * (w.values()[i] + w2.values()[i]);
  return w;
}

void check_weights(const Image& w, double eps) {
  for (double v : w.values())
    if (v < eps - 1e-15 || v > 1.0 - eps + 1e-15) throw NumericalError("hybrid weight outside [eps, 1 - eps]");
}

using WeightFn = Image (*)(const Image&, const HybridParams&);

HybridResult run(const Image& a0, const Spectrum& s_masked, const Mask& mask, const HybridParams& params,
                 WeightFn weights_of, const HybridCallback& progress, const Image* reference) {
  HybridResult result;
  result.weights = weights_of(a0, params);
  check_weights(result.weights, params.epsilon);

  const Spectrum data = apply_mask(s_masked, mask);
  const double scale = frobenius_norm(data);
  ComplexImage a = to_complex(a0);
  ComplexImage r = residual(data, mask, a);
  result.residual_norms.push_back(frobenius_norm(r));

  auto report = [&](int it) {
    if (!progress) return;
    HybridProgress hp{it, result.residual_norms.back(), std::nullopt};
    if (reference != nullptr) hp.psnr_db = psnr(*reference, real_part(a));
    progress(hp);
  };
  report(0);

  for (int it = 0; it < params.iterations; ++it) {
    const double r0 = result.residual_norms.front();
    if (params.stop_tol && r0 > 0.0 && result.residual_norms.back() / r0 < *params.stop_tol) break;
    if (params.refresh_mtv && it > 0) {
      result.weights = weights_of(real_part(a), params);
      check_weights(result.weights, params.epsilon);
    }
    auto av = a.values();
    auto rv = r.values();
    auto wv = result.weights.values();
    for (std::size_t i = 0; i < av.size(); ++i) av[i] += params.mu * wv[i] * rv[i];
    for (const Complex& v : av)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("hybrid iterate is not finite");
    r = residual(data, mask, a);
    const double prev = result.residual_norms.back();
    const double now = frobenius_norm(r);
    if (now > (1.0 - params.epsilon) * prev * (1.0 + 1e-10) + 1e-13 * (1.0 + scale)) {
      std::ostringstream os;
      os << "hybrid residual contraction violated at step " << it + 1 << ": " << now << " > (1 - eps) * " << prev;
      throw NumericalError(os.str());
    }
    result.residual_norms.push_back(now);
    report(it + 1);
  }
  result.image = real_part(a);
  return result;
}

}  // namespace

Image smooth_vertical(const Image& a, int passes) {
  if (passes < 0) throw ConfigError("smoothing pass count must be nonnegative");
  Image cur = a;
  const int n = a.rows();
  const int m = a.cols();
  if (n < 2) return cur;
  for (int p = 0; p < passes; ++p) {
    Image next(n, m);
    for (int j = 0; j < m; ++j) {
      next(0, j) = 0.25 * (3.0 * cur(0, j) + cur(1, j));
      next(n - 1, j) = 0.25 * (3.0 * cur(n - 1, j) + cur(n - 2, j));
    }
    for (int i = 1; i + 1 < n; ++i)
      for (int j = 0; j < m; ++j) next(i, j) = 0.25 * (cur(i - 1, j) + 2.0 * cur(i, j) + cur(i + 1, j));
    cur = std::move(next);
  }
  return cur;
}

Image smooth_horizontal(const Image& a, int passes) { return transpose(smooth_vertical(transpose(a), passes)); }

Image local_tv_map(const Image& a) {
  const int n = a.rows();
  const int m = a.cols();
  Image out(n, m);
  auto inside = [&](int i, int j) { return i >= 0 && i < n && j >= 0 && j < m; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int j2 = -1; j2 <= 1; ++j2)
        if (inside(i, j - j2)) s += std::abs(a(i, j) - a(i, j - j2));
      for (int j1 = -1; j1 <= 2; ++j1) {
        for (int j2 = -1; j2 <= 1; ++j2) {
          const int hi = i - j1 + 1;
          const int lo = i - j1;
          const int c = j - j2;
          if (inside(hi, c) && inside(lo, c)) s += std::abs(a(hi, c) - a(lo, c));
        }
      }
      out(i, j) = s;
    }
  }
  return out;
}

Image mtv_map(const Image& tv, int gamma1, int gamma2) {
  if (gamma1 < 0 || gamma2 < 0) throw ConfigError("MTV window half-widths must be nonnegative");
  const int n = tv.rows();
  const int m = tv.cols();
  Image out(n, m);
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>((2 * gamma1 + 1) * (2 * gamma2 + 1)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      buf.clear();
      for (int a = std::max(0, i - gamma1); a <= std::min(n - 1, i + gamma1); ++a)
        for (int b = std::max(0, j - gamma2); b <= std::min(m - 1, j + gamma2); ++b) buf.push_back(tv(a, b));
      const std::size_t half = buf.size() / 2;
      std::nth_element(buf.begin(), buf.begin() + static_cast<long>(half), buf.end());
      double med = buf[half];
      if (buf.size() % 2 == 0) med = 0.5 * (med + *std::max_element(buf.begin(), buf.begin() + static_cast<long>(half)));
      out(i, j) = med;
    }
  }
  return out;
}

Image weight_matrix(const Image& mtv, double eps, Axis axis) {
  if (!(eps > 0.0 && eps < 0.5)) throw ConfigError("weight floor eps must lie in (0, 0.5)");
  const int n = mtv.rows();
  const int m = mtv.cols();
  if ((axis == Axis::kVertical && n % 2 != 0) || (axis == Axis::kHorizontal && m % 2 != 0))
    throw ConfigError("weight matrix needs an even extent along the aliasing axis");
  Image w(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      // centered k < 0 pairs with k + half, k >= 0 with k - half
      int pi = i, pj = j;
      if (axis == Axis::kVertical)
        pi = i < n / 2 ? i + n / 2 : i - n / 2;
      else
        pj = j < m / 2 ? j + m / 2 : j - m / 2;
      const double self = mtv(i, j);
      const double other = mtv(pi, pj);
      double v;
      if (self > 1.5 * other)
        v = 1.0 - eps;
      else if (other > 1.5 * self)
        v = eps;
      else if (self + other < 1e-14)
        v = 0.5;
      else
        v = std::clamp(self / (self + other), eps, 1.0 - eps);
      w(i, j) = v;
    }
  }
  return w;
}

ComplexImage residual(const Spectrum& s_masked, const Mask& mask, const ComplexImage& a) {
  require_same_shape(s_masked, mask, "residual");
  require_same_shape(a, mask, "residual");
  Spectrum diff = dft2_centered(a);
  auto dv = diff.values();
  auto sv = s_masked.values();
  auto p = mask.values();
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = p[i] != 0.0 ? sv[i] - dv[i] : Complex{};
  return idft2_centered(diff);
}

ComplexImage residual(const Spectrum& s_masked, const Mask& mask, const Image& a) {
  return residual(s_masked, mask, to_complex(a));
}

void HybridParams::validate() const {
  if (!(mu >= 1.0 && mu < 2.0)) throw ConfigError("hybrid amplification mu must lie in [1, 2)");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("hybrid weight floor eps must lie in (0, 0.5)");
  if (gamma1 < 0 || gamma2 < 0) throw ConfigError("MTV window half-widths must be nonnegative");
  if (smoothing < 0) throw ConfigError("smoothing pass count must be nonnegative");
  if (iterations < 0) throw ConfigError("hybrid iteration count must be nonnegative");
  if (stop_tol && !(*stop_tol > 0.0)) throw ConfigError("stop tolerance must be positive");
}

ComplexImage hybrid_step(const ComplexImage& a, const Spectrum& s_masked, const Mask& mask, const Image& w, double mu) {
  require_same_shape(w, mask, "hybrid_step");
  const ComplexImage r = residual(s_masked, mask, a);
  ComplexImage out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] += mu * w.values()[i] * r.values()[i];
  return out;
}

HybridResult hybrid_reconstruct(const Image& a_init, const Spectrum& s_masked, const Mask& mask,
                                const HybridParams& params, const HybridCallback& progress, const Image* reference) {
  params.validate();
  require_same_shape(a_init, mask, "hybrid_reconstruct");
  require_same_shape(s_masked, mask, "hybrid_reconstruct");
  if (!is_row_mask(mask)) throw ConfigError("hybrid reconstruction needs a row mask");
  if (!mask.is_hermitian_symmetric()) throw ConfigError("symmetry violation: hybrid reconstruction needs a symmetric mask");
  return run(smooth_vertical(a_init, params.smoothing), s_masked, mask, params, &mtv_weights, progress, reference);
}

HybridResult hybrid_reconstruct_box(const Image& a_init, const Spectrum& s_masked, const Mask& mask,
                                    const HybridParams& params, const HybridCallback& progress,
                                    const Image* reference) {
  params.validate();
  require_same_shape(a_init, mask, "hybrid_reconstruct_box");
  require_same_shape(s_masked, mask, "hybrid_reconstruct_box");
  if (!is_product_mask(mask)) throw ConfigError("box hybrid reconstruction needs a product (box) mask");
  if (!mask.is_hermitian_symmetric()) throw ConfigError("symmetry violation: hybrid reconstruction needs a symmetric mask");
  const Image a0 = smooth_horizontal(smooth_vertical(a_init, params.smoothing), params.smoothing);
  return run(a0, s_masked, mask, params, &box_weights, progress, reference);
}

}  // namespace recon
