#include "selftest.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "recon/fixtures.hpp"
#include "recon/hybrid.hpp"
#include "recon/kspace_interp.hpp"
#include "recon/linear.hpp"
#include "recon/metrics.hpp"
#include "recon/tv.hpp"

namespace recon_tool {

namespace {

using namespace recon;

ComplexImage random_complex(int n, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexImage a(n, m);
  for (Complex& v : a.values()) v = {g(rng), g(rng)};
  return a;
}

Mask random_row_mask(int n, int m, std::mt19937_64& rng) {
  std::vector<int> rows;
  std::bernoulli_distribution keep(0.4);
  for (int k = -n / 2; k < n / 2; ++k)
    if (k == 0 || keep(rng)) rows.push_back(k);
  return build_mask(pattern_from_rows(n, m, rows));
}

bool dft_roundtrip() {
  std::mt19937_64 rng(1);
  const ComplexImage a = random_complex(64, 48, rng);
  const Spectrum s = dft2_centered(a);
  const ComplexImage b = idft2_centered(s);
  return std::sqrt(squared_distance(a, b)) < 1e-12 * frobenius_norm(a) &&
         std::abs(frobenius_norm(s) - frobenius_norm(a)) < 1e-12 * frobenius_norm(a);
}

bool parseval_identity() {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const Image a = random_image(32, 32, rng());
    const Mask mask = random_row_mask(32, 32, rng);
    const Spectrum s = dft2_centered(a);
    const double lhs = missing_energy(s, mask);
    const double rhs = squared_distance(zero_refill(apply_mask(s, mask), mask), to_complex(a));
    if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, lhs)) return false;
  }
  return true;
}

bool gradient_adjoint() {
  std::mt19937_64 rng(3);
  const ComplexImage a = random_complex(24, 20, rng);
  const GradientField x{random_complex(24, 20, rng), random_complex(24, 20, rng)};
  const GradientField ga = grad(a);
  const ComplexImage dx = div_adjoint(x);
  Complex lhs{}, rhs{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    lhs += ga.x1.values()[i] * std::conj(x.x1.values()[i]) + ga.x2.values()[i] * std::conj(x.x2.values()[i]);
    rhs += a.values()[i] * std::conj(dx.values()[i]);
  }
  return std::abs(lhs - rhs) < 1e-12 * std::abs(lhs);
}

bool mask_counts() {
  const int expected[] = {63, 31, 21, 15};
  const int rates[] = {2, 4, 6, 8};
  for (int i = 0; i < 4; ++i)
    if (build_row_pattern(128, 128, rates[i], 11, 2).rows.size() != static_cast<std::size_t>(expected[i])) return false;
  return true;
}

bool hybrid_contraction() {
  std::mt19937_64 rng(4);
  HybridParams p;
  p.epsilon = 0.1;
  p.mu = 1.6;
  p.smoothing = 1;
  p.iterations = 8;
  for (int t = 0; t < 20; ++t) {
    const Image a = random_image(32, 32, rng());
    const Mask mask = build_mask(build_row_pattern(32, 32, 4, 3, 2));
    const Spectrum s = apply_mask(dft2_centered(a), mask);
    const HybridResult r = hybrid_reconstruct(random_image(32, 32, rng()), s, mask, p);
    for (std::size_t j = 1; j < r.residual_norms.size(); ++j)
      if (r.residual_norms[j] > 0.9 * r.residual_norms[j - 1] * (1 + 1e-10) + 1e-13) return false;
  }
  return true;
}

bool full_mask_identity() {
  const Image a = shepp_logan(64);
  const Mask mask = Mask::full(64, 64);
  const Spectrum s = dft2_centered(a);
  const double zero_err = std::sqrt(squared_distance(real_part(zero_refill(s, mask)), a));
  GrappaOptions opt;
  const double grappa_err = std::sqrt(squared_distance(grappa_reconstruct(s, mask, opt).image, a));
  TvParams tv;
  tv.lambda = 1e6;
  tv.iterations = 5;
  const double tv_err = std::sqrt(squared_distance(tv_minimize(s, mask, tv).image, a));
  return zero_err < 1e-10 && grappa_err < 1e-10 && tv_err < 1e-4;
}

}  // namespace

bool run_selftest(std::ostream& out) {
  const std::vector<std::pair<std::string, std::function<bool()>>> checks{
      {"dft round trip and unitarity", dft_roundtrip},
      {"missing energy equals zero-refill error", parseval_identity},
      {"gradient adjointness", gradient_adjoint},
      {"row counts for N=128, L=11", mask_counts},
      {"hybrid residual contraction", hybrid_contraction},
      {"full-mask identity", full_mask_identity},
  };
  bool ok = true;
  for (const auto& [name, fn] : checks) {
    bool pass = false;
    try {
      pass = fn();
    } catch (const std::exception& e) {
      out << "  (" << e.what() << ")\n";
    }
    out << (pass ? "PASS " : "FAIL ") << name << "\n";
    ok = ok && pass;
  }
  return ok;
}

}  // namespace recon_tool
