#include "recon/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "recon/tv.hpp"

namespace recon {

double psnr(const Image& reference, const Image& reconstruction) {
  require_same_shape(reference, reconstruction, "psnr");
  const double err = squared_distance(reference, reconstruction);
  // transforms of an exactly recoverable image still leave ~1e-16 per pixel
  const double scale = std::max(1.0, squared_distance(reference, Image(reference.rows(), reference.cols())));
  if (err <= 1e-26 * scale) return kInfinitePsnr;
  return 10.0 * std::log10(static_cast<double>(reference.size()) / err);
}

double discrete_tv(const Image& a) { return tv_norm(grad(to_complex(a))); }

double missing_energy(const Spectrum& s_full, const Mask& mask) {
  require_same_shape(s_full, mask, "missing_energy");
  auto s = s_full.values();
  auto p = mask.values();
  double e = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (p[i] == 0.0) e += std::norm(s[i]);
  return e;
}

double data_fidelity(const Image& reconstruction, const Spectrum& s_masked, const Mask& mask) {
  require_same_shape(reconstruction, mask, "data_fidelity");
  const Spectrum rec = dft2_centered(reconstruction);
  auto r = rec.values();
  auto s = s_masked.values();
  auto p = mask.values();
  double e = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (p[i] != 0.0) e += std::norm(r[i] - s[i]);
  return std::sqrt(e);
}

QualityReport evaluate(const Image& reference, const Image& reconstruction, const Spectrum& s_masked,
                       const Mask& mask) {
  QualityReport q;
  q.psnr_db = psnr(reference, reconstruction);
  q.frobenius_error = std::sqrt(squared_distance(reference, reconstruction));
  q.tv_value = discrete_tv(reconstruction);
  q.data_fidelity = data_fidelity(reconstruction, s_masked, mask);
  return q;
}

}  // namespace recon
