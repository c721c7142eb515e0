#include "recon/kspace_interp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>

namespace recon {

std::vector<Offset> NeighborhoodWindow::offsets() const {
  if (p1 < 0 || p2 < 0) throw ConfigError("window half-widths must be nonnegative");
  std::vector<Offset> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int j1 = -p1; j1 <= p1; ++j1)
    for (int j2 = -p2; j2 <= p2; ++j2) out.push_back({j1, j2});
  return out;
}

CalibrationRegion CalibrationRegion::lowpass(int lowpass, int m) {
  if (lowpass < 1 || lowpass % 2 == 0) throw ConfigError("calibration low-pass size must be odd and positive");
  return {-(lowpass / 2), lowpass / 2, -(m / 2), m - m / 2 - 1};
}

CalibrationRegion CalibrationRegion::from_mask(const Mask& mask) {
  const int n = mask.rows();
  const int m = mask.cols();
  if (mask.empty() || !mask.acquired(0, 0)) return {0, -1, 0, -1};
  int c_lo = 0, c_hi = 0;
  while (c_lo - 1 >= -(m / 2) && mask.acquired(0, c_lo - 1)) --c_lo;
  while (c_hi + 1 <= m - m / 2 - 1 && mask.acquired(0, c_hi + 1)) ++c_hi;
  auto row_full = [&](int nu1) {
    for (int nu2 = c_lo; nu2 <= c_hi; ++nu2)
      if (!mask.acquired(nu1, nu2)) return false;
    return true;
  };
  int r_lo = 0, r_hi = 0;
  while (r_lo - 1 >= -(n / 2) && row_full(r_lo - 1)) --r_lo;
  while (r_hi + 1 <= n - n / 2 - 1 && row_full(r_hi + 1)) ++r_hi;
  return {r_lo, r_hi, c_lo, c_hi};
}

long PatternSet::empty_count() const {
  return static_cast<long>(std::count(assignment.values().begin(), assignment.values().end(), kEmpty));
}

PatternSet enumerate_patterns(const Mask& mask, const NeighborhoodWindow& window) {
  PatternSet set;
  set.window = window;
  set.assignment = Grid<int>(mask.rows(), mask.cols(), PatternSet::kAcquired);
  const std::vector<Offset> offs = window.offsets();
  const std::size_t words = (offs.size() + 63) / 64;
  std::map<std::vector<std::uint64_t>, int> ids;
  std::vector<std::uint64_t> key(words);

  const int hn = mask.rows() / 2;
  const int hm = mask.cols() / 2;
  for (int i = 0; i < mask.rows(); ++i) {
    for (int j = 0; j < mask.cols(); ++j) {
      if (mask(i, j) != 0.0) continue;
      std::fill(key.begin(), key.end(), 0);
      bool any = false;
      for (std::size_t t = 0; t < offs.size(); ++t) {
        if (mask.acquired_wrapped(i - hn + offs[t].j1, j - hm + offs[t].j2)) {
          key[t / 64] |= std::uint64_t{1} << (t % 64);
          any = true;
        }
      }
      if (!any) {
        set.assignment(i, j) = PatternSet::kEmpty;
        continue;
      }
      auto it = ids.find(key);
      if (it == ids.end()) {
        std::vector<Offset> p;
        for (std::size_t t = 0; t < offs.size(); ++t)
          if (key[t / 64] >> (t % 64) & 1U) p.push_back(offs[t]);
        it = ids.emplace(key, static_cast<int>(set.patterns.size())).first;
        set.patterns.push_back(std::move(p));
      }
      set.assignment(i, j) = it->second;
    }
  }
  return set;
}

namespace {

using Box = std::array<int, 4>;  // min j1, max j1, min j2, max j2 (always containing 0)

Box bounding_box(const std::vector<Offset>& pattern) {
  Box b{0, 0, 0, 0};
  for (const Offset& o : pattern) {
    b[0] = std::min(b[0], o.j1);
    b[1] = std::max(b[1], o.j1);
    b[2] = std::min(b[2], o.j2);
    b[3] = std::max(b[3], o.j2);
  }
  return b;
}

std::string describe(const std::vector<Offset>& pattern) {
  const Box b = bounding_box(pattern);
  std::ostringstream os;
  os << "pattern with " << pattern.size() << " offsets spanning rows [" << b[0] << ", " << b[1] << "] and columns ["
     << b[2] << ", " << b[3] << "]";
  return os.str();
}

/// Gram matrices X^H X of calibration neighborhoods, cached per bounding box.
class Calibration {
 public:
  Calibration(const Spectrum& s, const CalibrationRegion& region) : s_(s), region_(region) {}

  std::vector<Complex> fit(const std::vector<Offset>& pattern) {
    const Box box = bounding_box(pattern);
    const Entry& e = entry(box);
    const long p = static_cast<long>(pattern.size());
    if (e.equations < p) {
      std::ostringstream os;
      os << "insufficient calibration: " << describe(pattern) << " has " << e.equations
         << " calibration equations for " << p << " unknowns";
      throw InsufficientCalibration(os.str());
    }
    const int width = box[3] - box[2] + 1;
    auto local = [&](Offset o) { return (o.j1 - box[0]) * width + (o.j2 - box[2]); };
    const int center = local({0, 0});
    Eigen::MatrixXcd h(p, p);
    Eigen::VectorXcd rhs(p);
    for (long a = 0; a < p; ++a) {
      const int ia = local(pattern[static_cast<std::size_t>(a)]);
      rhs(a) = e.gram(ia, center);
      for (long b = 0; b < p; ++b) h(a, b) = e.gram(ia, local(pattern[static_cast<std::size_t>(b)]));
    }
    const Eigen::VectorXcd g = solve(h, rhs);
    return {g.data(), g.data() + g.size()};
  }

 private:
  struct Entry {
    Eigen::MatrixXcd gram;
    long equations = 0;
  };

  const Entry& entry(const Box& box) {
    auto it = cache_.find(box);
    if (it != cache_.end()) return it->second;
    const int lo1 = region_.row_lo - box[0];
    const int hi1 = region_.row_hi - box[1];
    const int lo2 = region_.col_lo - box[2];
    const int hi2 = region_.col_hi - box[3];
    const int height = box[1] - box[0] + 1;
    const int width = box[3] - box[2] + 1;
    Entry e;
    e.equations = (hi1 >= lo1 && hi2 >= lo2) ? static_cast<long>(hi1 - lo1 + 1) * (hi2 - lo2 + 1) : 0;
    e.gram = Eigen::MatrixXcd::Zero(height * width, height * width);
    if (e.equations > 0) {
      Eigen::MatrixXcd x(e.equations, height * width);
      long row = 0;
      for (int nu1 = lo1; nu1 <= hi1; ++nu1)
        for (int nu2 = lo2; nu2 <= hi2; ++nu2, ++row)
          for (int a = 0; a < height; ++a)
            for (int b = 0; b < width; ++b) x(row, a * width + b) = s_.at(nu1 + box[0] + a, nu2 + box[2] + b);
      e.gram.noalias() = x.adjoint() * x;
    }
    return cache_.emplace(box, std::move(e)).first->second;
  }

  static Eigen::VectorXcd solve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& rhs) {
    const long p = h.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (!(lmax > 0.0)) return Eigen::VectorXcd::Zero(p);
    if (lmin > 0.0 && lmax / lmin <= 1e12) return h.llt().solve(rhs);
    const double ridge = 1e-10 * h.trace().real() / static_cast<double>(p);
    Eigen::MatrixXcd reg = h;
    reg.diagonal().array() += ridge;
    return reg.ldlt().solve(rhs);
  }

  const Spectrum& s_;
  CalibrationRegion region_;
  std::map<Box, Entry> cache_;
};

Complex unit_root(long exponent, int n) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(exponent % n) / n;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

std::vector<Complex> fit_grappa_weights(const Spectrum& s, const CalibrationRegion& region,
                                        const std::vector<Offset>& pattern) {
  if (pattern.empty()) throw ConfigError("GRAPPA pattern must be nonempty");
  for (const Offset& o : pattern)
    if (o.j1 == 0 && o.j2 == 0) throw ConfigError("GRAPPA pattern must not contain the target offset");
  Calibration cal(s, region);
  return cal.fit(pattern);
}

GrappaResult grappa_reconstruct(const Spectrum& s_masked, const Mask& mask, const GrappaOptions& options) {
  require_same_shape(s_masked, mask, "grappa_reconstruct");
  const CalibrationRegion region = options.region.value_or(CalibrationRegion::from_mask(mask));
  const Spectrum data = apply_mask(s_masked, mask);
  const PatternSet set = enumerate_patterns(mask, options.window);

  Calibration cal(data, region);
  std::vector<std::vector<Complex>> weights(set.patterns.size());
  std::vector<bool> fitted(set.patterns.size(), false);
  GrappaResult result;
  result.pattern_count = static_cast<int>(set.patterns.size());
  for (std::size_t id = 0; id < set.patterns.size(); ++id) {
    try {
      weights[id] = cal.fit(set.patterns[id]);
      fitted[id] = true;
    } catch (const InsufficientCalibration&) {
      if (options.strict) throw;
      ++result.unfittable_patterns;
    }
  }

  Spectrum out = data;
  const int hn = mask.rows() / 2;
  const int hm = mask.cols() / 2;
  for (int i = 0; i < mask.rows(); ++i) {
    for (int j = 0; j < mask.cols(); ++j) {
      const int id = set.assignment(i, j);
      if (id == PatternSet::kAcquired) continue;
      if (id == PatternSet::kEmpty || !fitted[static_cast<std::size_t>(id)]) {
        ++result.zero_filled_positions;
        continue;
      }
      const auto& p = set.patterns[static_cast<std::size_t>(id)];
      const auto& g = weights[static_cast<std::size_t>(id)];
      Complex acc{};
      for (std::size_t t = 0; t < p.size(); ++t) acc += g[t] * data.wrapped(i - hn + p[t].j1, j - hm + p[t].j2);
      out(i, j) = acc;
    }
  }
  result.image = real_part(idft2_centered(out));
  result.spectrum = std::move(out);
  return result;
}

SpiritKernel fit_spirit_kernel(const Spectrum& s, const CalibrationRegion& region, const NeighborhoodWindow& window) {
  std::vector<Offset> punctured;
  for (const Offset& o : window.offsets())
    if (o.j1 != 0 || o.j2 != 0) punctured.push_back(o);
  SpiritKernel k;
  k.window = window;
  k.g.assign(static_cast<std::size_t>(window.size()), Complex{});
  if (punctured.empty()) return k;
  Calibration cal(s, region);
  const std::vector<Complex> g = cal.fit(punctured);
  for (std::size_t t = 0; t < punctured.size(); ++t) k.g[static_cast<std::size_t>(window.index_of(punctured[t]))] = g[t];
  return k;
}

Spectrum spirit_apply_G(const Spectrum& s, const SpiritKernel& kernel) {
  const std::vector<Offset> offs = kernel.window.offsets();
  Spectrum out(s.rows(), s.cols());
  const int hn = s.rows() / 2;
  const int hm = s.cols() / 2;
  for (int i = 0; i < s.rows(); ++i) {
    for (int j = 0; j < s.cols(); ++j) {
      Complex acc{};
      for (std::size_t t = 0; t < offs.size(); ++t) {
        if (offs[t].j1 == 0 && offs[t].j2 == 0) continue;
        const Complex g = kernel.g[t];
        if (g != Complex{}) acc += g * s.wrapped(i - hn + offs[t].j1, j - hm + offs[t].j2);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexImage spirit_multiplier(const SpiritKernel& kernel, int n, int m) {
  const std::vector<Offset> offs = kernel.window.offsets();
  ComplexImage c(n, m);
  for (int k1 = -(n / 2); k1 < n - n / 2; ++k1) {
    for (int k2 = -(m / 2); k2 < m - m / 2; ++k2) {
      Complex acc{};
      for (std::size_t t = 0; t < offs.size(); ++t) {
        if (offs[t].j1 == 0 && offs[t].j2 == 0) continue;
        const Complex g = kernel.g[t];
        if (g == Complex{}) continue;
        acc += g * unit_root(static_cast<long>(k1) * offs[t].j1, n) * unit_root(static_cast<long>(k2) * offs[t].j2, m);
      }
      c.at(k1, k2) = acc;
    }
  }
  return c;
}

SpiritResult spirit_reconstruct(const Spectrum& s_masked, const Mask& mask, const SpiritKernel& kernel,
                                const SpiritParams& params) {
  require_same_shape(s_masked, mask, "spirit_reconstruct");
  if (params.lambda < 0.0) throw ConfigError("SPIRiT lambda must be nonnegative");
  if (params.iterations < 0) throw ConfigError("SPIRiT iteration count must be nonnegative");

  const Spectrum data = apply_mask(s_masked, mask);
  const ComplexImage c = spirit_multiplier(kernel, mask.rows(), mask.cols());
  Image damp(mask.rows(), mask.cols());
  double op_norm = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = std::norm(c.values()[i] - 1.0);
    damp.values()[i] = d;
    op_norm = std::max(op_norm, d);
  }
  SpiritResult result;
  result.mu = params.mu.value_or(std::min(0.5, 1.0 / (1.0 + params.lambda * op_norm)));
  if (!(result.mu > 0.0)) throw ConfigError("SPIRiT step size mu must be positive");

  auto p = mask.values();
  auto d = data.values();
  auto dm = damp.values();
  Spectrum x = data;
  ComplexImage img = idft2_centered(x);
  auto objective = [&]() {
    double f = 0.0;
    auto xv = x.values();
    auto iv = img.values();
    for (std::size_t i = 0; i < xv.size(); ++i) {
      if (p[i] != 0.0) f += std::norm(xv[i] - d[i]);
      f += params.lambda * dm[i] * std::norm(iv[i]);
    }
    return f;
  };

  double prev = objective();
  int growth = 0;
  for (int it = 0; it < params.iterations; ++it) {
    ComplexImage weighted = img;
    auto wv = weighted.values();
    for (std::size_t i = 0; i < wv.size(); ++i) wv[i] *= params.lambda * dm[i];
    const Spectrum reg = dft2_centered(weighted);
    auto xv = x.values();
    auto rv = reg.values();
    for (std::size_t i = 0; i < xv.size(); ++i) {
      Complex step = rv[i];
      if (p[i] != 0.0) step += xv[i] - d[i];
      xv[i] -= result.mu * step;
    }
    img = idft2_centered(x);
    const double f = objective();
    if (!std::isfinite(f)) throw NumericalError("SPIRiT iteration produced a non-finite objective");
    result.objective.push_back(f);
    growth = f > prev ? growth + 1 : 0;
    if (growth >= 10) throw NumericalError("SPIRiT objective grew for 10 consecutive steps; reduce the step size mu");
    prev = f;
  }
  result.image = real_part(img);
  result.spectrum = std::move(x);
  return result;
}

}  // namespace recon
