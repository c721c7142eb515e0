#include "recon/fixtures.hpp"

#include "recon/fourier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace recon {

namespace {

struct Ellipse {
  double value, a, b, x0, y0, phi_deg;
};

bool inside(const Ellipse& e, double x, double y) {
  const double phi = e.phi_deg * std::numbers::pi / 180.0;
  const double c = std::cos(phi), s = std::sin(phi);
  const double u = (x - e.x0) * c + (y - e.y0) * s;
  const double v = -(x - e.x0) * s + (y - e.y0) * c;
  return (u * u) / (e.a * e.a) + (v * v) / (e.b * e.b) <= 1.0;
}

// Pixel centers on [-1, 1], y pointing up.
double coord_x(int j, int n) { return (2.0 * j + 1.0) / n - 1.0; }
double coord_y(int i, int n) { return 1.0 - (2.0 * i + 1.0) / n; }

}  // namespace

Image shepp_logan(int n) {
  static constexpr std::array<Ellipse, 10> kEllipses{{
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
      {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
  }};
  Image a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (const Ellipse& e : kEllipses)
        if (inside(e, coord_x(j, n), coord_y(i, n))) v += e.value;
      a(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return a;
}

Image fractal_texture(int n, double exponent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Spectrum s(n, n);
  for (int k1 = -(n / 2); k1 < n / 2; ++k1)
    for (int k2 = -(n / 2); k2 < n / 2; ++k2) {
      const double f = std::hypot(k1, k2);
      if (f > 0.0) s.at(k1, k2) = Complex{g(rng), g(rng)} / std::pow(f, exponent);
    }
  Image t = real_part(idft2_centered(s));
  double mean = 0.0, sq = 0.0;
  for (double v : t.values()) mean += v;
  mean /= static_cast<double>(t.size());
  for (double& v : t.values()) {
    v -= mean;
    sq += v * v;
  }
  const double sd = std::sqrt(sq / static_cast<double>(t.size()));
  if (sd > 0.0)
    for (double& v : t.values()) v /= sd;
  return t;
}

Image natural_surrogate(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image a(n, n);

  // smooth sky-like background
  const double tilt = 0.15 + 0.1 * u(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = coord_x(j, n), y = coord_y(i, n);
      a(i, j) = 0.62 + tilt * y + 0.04 * std::sin(2.1 * x + 0.7) * std::cos(1.3 * y);
    }

  // textured ground in the lower third
  const Image ground = fractal_texture(n, 0.8, rng());
  const double horizon = -0.35;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double y = coord_y(i, n);
      if (y <= horizon) a(i, j) = 0.45 + 0.15 * (horizon - y) + 0.07 * ground(i, j);
    }

  // shaded shapes: ellipses and rectangles with linear shading
  for (int s = 0; s < 9; ++s) {
    const double cx = -0.7 + 1.4 * u(rng), cy = -0.5 + 1.1 * u(rng);
    const double ra = 0.05 + 0.2 * u(rng), rb = 0.05 + 0.25 * u(rng);
    const double phi = 180.0 * u(rng);
    const double base = 0.05 + 0.85 * u(rng);
    const double gx = 0.2 * (u(rng) - 0.5), gy = 0.2 * (u(rng) - 0.5);
    const bool rect = s % 3 == 2;
    const double c = std::cos(phi * std::numbers::pi / 180.0), sn = std::sin(phi * std::numbers::pi / 180.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = coord_x(j, n), y = coord_y(i, n);
        const double p = (x - cx) * c + (y - cy) * sn;
        const double q = -(x - cx) * sn + (y - cy) * c;
        const bool in = rect ? (std::abs(p) <= ra && std::abs(q) <= rb) : (p * p / (ra * ra) + q * q / (rb * rb) <= 1.0);
        if (in) a(i, j) = base + gx * p / ra + gy * q / rb;
      }
  }

  // thin dark structures (poles and a tripod-like fan)
  const double px = -0.2 + 0.4 * u(rng);
  for (int k = -1; k <= 1; ++k) {
    const double slope = 0.35 * k;
    for (int i = 0; i < n; ++i) {
      const double y = coord_y(i, n);
      if (y > 0.1 || y < -0.8) continue;
      const double xc = px + slope * (0.1 - y);
      for (int j = 0; j < n; ++j)
        if (std::abs(coord_x(j, n) - xc) < 2.5 / n) a(i, j) = 0.08;
    }
  }

  // fine texture everywhere
  const Image fine = fractal_texture(n, 1.0, rng());
  for (std::size_t i = 0; i < a.size(); ++i) a.values()[i] += 0.03 * fine.values()[i];

  for (double& v : a.values()) v = std::clamp(v, 0.0, 1.0);
  return a;
}

Image gradient_image(int n, int m) {
  Image a(n, m);
  const double denom = std::max(1, n + m - 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = (i + j) / denom;
  return a;
}

Image checkerboard(int n, int m, int cell) {
  if (cell <= 0) throw ConfigError("checkerboard cell size must be positive");
  Image a(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = ((i / cell + j / cell) % 2 == 0) ? 1.0 : 0.0;
  return a;
}

Image disk_image(int n, double radius) {
  Image a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = coord_x(j, n), y = coord_y(i, n);
      a(i, j) = x * x + y * y <= radius * radius ? 1.0 : 0.0;
    }
  return a;
}

Image random_image(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image a(n, m);
  for (double& v : a.values()) v = u(rng);
  return a;
}

}  // namespace recon
