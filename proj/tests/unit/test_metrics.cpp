#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "recon/linear.hpp"
#include "recon/metrics.hpp"

using namespace recon;

TEST(Psnr, KnownValue) {
  // uniform error 10^-1.5 on a unit-range image gives exactly 30 dB
  Image ref(16, 16, 0.5);
  Image rec(16, 16, 0.5 + std::pow(10.0, -1.5));
  EXPECT_NEAR(psnr(ref, rec), 30.0, 1e-10);
}

TEST(Psnr, ExactReconstructionIsInfinite) {
  const Image a(8, 8, 0.25);
  EXPECT_EQ(psnr(a, a), kInfinitePsnr);
  EXPECT_THROW(psnr(a, Image(8, 6)), ConfigError);
}

TEST(Psnr, DecreasesWithError) {
  std::mt19937_64 rng(61);
  const Image ref = recon::testing::random_real(16, 16, rng);
  const Image noise = recon::testing::random_real(16, 16, rng);
  double last = kInfinitePsnr;
  for (double scale : {1e-3, 1e-2, 1e-1, 1.0}) {
    Image rec = ref;
    for (std::size_t i = 0; i < rec.size(); ++i) rec.values()[i] += scale * (noise.values()[i] - 0.5);
    const double p = psnr(ref, rec);
    EXPECT_LT(p, last);
    last = p;
  }
}

TEST(MissingEnergy, ParsevalOnRandomPairs) {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 * (4 + static_cast<int>(rng() % 8));
    const Image a = recon::testing::random_real(n, n, rng);
    const Mask mask = recon::testing::random_entry_mask(n, n, rng, 0.3 + 0.4 * (t % 2));
    const Spectrum s = dft2_centered(a);
    const double lhs = missing_energy(s, mask);
    const double rhs = squared_distance(zero_refill(apply_mask(s, mask), mask), to_complex(a));
    ASSERT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, lhs)) << "pair " << t;
  }
}

TEST(DataFidelity, ZeroForTruthPositiveOtherwise) {
  std::mt19937_64 rng(63);
  const Image a = recon::testing::random_real(16, 16, rng);
  const Mask mask = build_mask(build_row_pattern(16, 16, 2, 3, 2));
  const Spectrum s = apply_mask(dft2_centered(a), mask);
  EXPECT_LT(data_fidelity(a, s, mask), 1e-13);
  EXPECT_GT(data_fidelity(Image(16, 16), s, mask), 1.0);
}

TEST(Evaluate, CombinesMetrics) {
  std::mt19937_64 rng(64);
  const Image a = recon::testing::random_real(16, 16, rng);
  const Mask mask = build_mask(build_row_pattern(16, 16, 4, 3, 2));
  const Spectrum s = apply_mask(dft2_centered(a), mask);
  const Image rec = real_part(zero_refill(s, mask));
  const QualityReport q = evaluate(a, rec, s, mask);
  EXPECT_DOUBLE_EQ(q.psnr_db, psnr(a, rec));
  EXPECT_NEAR(q.frobenius_error, std::sqrt(squared_distance(a, rec)), 1e-12);
  EXPECT_DOUBLE_EQ(q.tv_value, discrete_tv(rec));
  EXPECT_LT(q.data_fidelity, 1e-12);
}
