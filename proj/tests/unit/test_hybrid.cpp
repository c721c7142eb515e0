#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "recon/fixtures.hpp"
#include "recon/hybrid.hpp"
#include "recon/metrics.hpp"
#include "recon/tv.hpp"

using namespace recon;
using recon::testing::max_abs_diff;

namespace {

// Sum of absolute horizontal differences of the pixel with its row neighbors
// plus all vertical differences inside the 5 x 3 block around it.
double local_tv_oracle(const Image& a, int i, int j) {
  auto inside = [&](int r, int c) { return r >= 0 && r < a.rows() && c >= 0 && c < a.cols(); };
  double s = 0.0;
  for (int c : {j - 1, j + 1})
    if (inside(i, c)) s += std::abs(a(i, j) - a(i, c));
  for (int r = i - 2; r <= i + 1; ++r)
    for (int c = j - 1; c <= j + 1; ++c)
      if (inside(r, c) && inside(r + 1, c)) s += std::abs(a(r + 1, c) - a(r, c));
  return s;
}

struct Problem {
  Image truth;
  Mask mask;
  Spectrum data;
};

Problem random_problem(int n, std::mt19937_64& rng) {
  Problem p;
  p.truth = recon::testing::random_real(n, n, rng);
  p.mask = build_mask(pattern_from_rows(n, n, recon::testing::random_symmetric_rows(n, rng)));
  p.data = apply_mask(dft2_centered(p.truth), p.mask);
  return p;
}

}  // namespace

TEST(Smoothing, ThreeTapFilterWithEdgeRule) {
  Image a(6, 1);
  a(2, 0) = 4.0;
  a(5, 0) = 8.0;
  const Image s = smooth_vertical(a, 1);
  const double want[] = {0.0, 1.0, 2.0, 1.0, 2.0, 6.0};
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(s(i, 0), want[i]);
  EXPECT_EQ(smooth_vertical(a, 0), a);
}

TEST(Smoothing, PreservesConstantsAndMeanOfInterior) {
  Image c(8, 5, 0.7);
  EXPECT_LT(max_abs_diff(smooth_vertical(c, 3), c), 1e-15);
  EXPECT_LT(max_abs_diff(smooth_horizontal(c, 3), c), 1e-15);
  std::mt19937_64 rng(51);
  const Image a = recon::testing::random_real(10, 7, rng);
  Image at(7, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 7; ++j) at(j, i) = a(i, j);
  const Image h = smooth_horizontal(a, 2);
  const Image v = smooth_vertical(at, 2);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 7; ++j) EXPECT_DOUBLE_EQ(h(i, j), v(j, i));
  EXPECT_THROW(smooth_vertical(a, -1), ConfigError);
}

TEST(LocalTv, MatchesBlockOracle) {
  std::mt19937_64 rng(52);
  const Image a = recon::testing::random_real(11, 9, rng);
  const Image tv = local_tv_map(a);
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 9; ++j) EXPECT_NEAR(tv(i, j), local_tv_oracle(a, i, j), 1e-13) << i << "," << j;
}

TEST(LocalTv, HorizontalEdge) {
  // step between rows 3 and 4: pixels within two rows of it see three vertical jumps
  Image a(8, 8);
  for (int i = 4; i < 8; ++i)
    for (int j = 0; j < 8; ++j) a(i, j) = 1.0;
  const Image tv = local_tv_map(a);
  EXPECT_DOUBLE_EQ(tv(3, 4), 3.0);
  EXPECT_DOUBLE_EQ(tv(5, 4), 3.0);
  EXPECT_DOUBLE_EQ(tv(6, 4), 0.0);
  EXPECT_DOUBLE_EQ(tv(1, 4), 0.0);
  EXPECT_DOUBLE_EQ(tv(4, 0), 2.0);
}

TEST(Mtv, MedianWithTruncatedWindow) {
  Image tv(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) tv(i, j) = 5 * i + j;
  const Image m = mtv_map(tv, 1, 1);
  EXPECT_DOUBLE_EQ(m(2, 2), 12.0);
  // corner: values 0, 1, 5, 6 -> mean of 1 and 5
  EXPECT_DOUBLE_EQ(m(0, 0), 3.0);
  // edge: 0, 1, 2, 5, 6, 7 -> mean of 2 and 5
  EXPECT_DOUBLE_EQ(m(0, 1), 3.5);
  EXPECT_EQ(mtv_map(tv, 0, 0), tv);
}

TEST(Weights, ThreeBranches) {
  Image mtv(4, 1);
  mtv(0, 0) = 4.0;  // partner row 2
  mtv(2, 0) = 1.0;
  mtv(1, 0) = 1.2;  // partner row 3
  mtv(3, 0) = 1.0;
  const Image w = weight_matrix(mtv, 0.1);
  EXPECT_DOUBLE_EQ(w(0, 0), 0.9);
  EXPECT_DOUBLE_EQ(w(2, 0), 0.1);
  EXPECT_NEAR(w(1, 0), 1.2 / 2.2, 1e-15);
  EXPECT_NEAR(w(3, 0), 1.0 / 2.2, 1e-15);
  EXPECT_DOUBLE_EQ(weight_matrix(Image(4, 2), 0.1)(1, 1), 0.5);
  EXPECT_THROW(weight_matrix(mtv, 0.5), ConfigError);
  EXPECT_THROW(weight_matrix(Image(3, 2), 0.1), ConfigError);
}

TEST(Weights, PartnersAreComplementary) {
  std::mt19937_64 rng(53);
  const Image mtv = mtv_map(local_tv_map(recon::testing::random_real(16, 12, rng)), 3, 3);
  for (Axis axis : {Axis::kVertical, Axis::kHorizontal}) {
    const Image w = weight_matrix(mtv, 0.05, axis);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 12; ++j) {
        const int pi = axis == Axis::kVertical ? (i + 8) % 16 : i;
        const int pj = axis == Axis::kHorizontal ? (j + 6) % 12 : j;
        EXPECT_NEAR(w(i, j) + w(pi, pj), 1.0, 1e-15);
        EXPECT_GE(w(i, j), 0.05);
        EXPECT_LE(w(i, j), 0.95);
      }
  }
}

TEST(Residual, MatchesDenseTransformOn8x8) {
  std::mt19937_64 rng(54);
  const Problem p = random_problem(8, rng);
  const ComplexImage a = recon::testing::random_complex(8, 8, rng);
  Spectrum diff = recon::testing::brute_dft2(a);
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff.values()[i] = p.mask.values()[i] != 0.0 ? p.data.values()[i] - diff.values()[i] : Complex{};
  const ComplexImage want = recon::testing::brute_idft2(diff);
  EXPECT_LT(max_abs_diff(residual(p.data, p.mask, a), want), 1e-10);

  const Image w = recon::testing::random_real(8, 8, rng);
  ComplexImage step = a;
  for (std::size_t i = 0; i < step.size(); ++i) step.values()[i] += 1.6 * w.values()[i] * want.values()[i];
  EXPECT_LT(max_abs_diff(hybrid_step(a, p.data, p.mask, w, 1.6), step), 1e-10);
}

TEST(Residual, CompletesDataOnMask) {
  std::mt19937_64 rng(55);
  const Problem p = random_problem(16, rng);
  const Image a = recon::testing::random_real(16, 16, rng);
  ComplexImage sum = residual(p.data, p.mask, a);
  for (std::size_t i = 0; i < sum.size(); ++i) sum.values()[i] += a.values()[i];
  EXPECT_LT(max_abs_diff(apply_mask(dft2_centered(sum), p.mask), p.data), 1e-12);
  EXPECT_LT(recon::testing::max_abs(residual(p.data, p.mask, p.truth)), 1e-13);
}

TEST(Hybrid, ResidualContractsOnRandomInstances) {
  std::mt19937_64 rng(56);
  HybridParams params;
  params.epsilon = 0.1;
  params.mu = 1.6;
  params.smoothing = 0;
  params.iterations = 15;
  for (int t = 0; t < 20; ++t) {
    const Problem p = random_problem(32, rng);
    const Image init = recon::testing::random_real(32, 32, rng);
    const HybridResult r = hybrid_reconstruct(init, p.data, p.mask, params);
    ASSERT_EQ(r.residual_norms.size(), 16u);
    for (std::size_t j = 1; j < r.residual_norms.size(); ++j)
      EXPECT_LE(r.residual_norms[j], 0.9 * r.residual_norms[j - 1] + 1e-13) << "instance " << t << " step " << j;
  }
}

TEST(Hybrid, UniformWeightsContractByFactorOneFifth) {
  std::mt19937_64 rng(57);
  const Problem p = random_problem(16, rng);
  HybridParams params;
  params.smoothing = 0;
  params.iterations = 5;
  // a constant start has zero local TV everywhere, hence weights 1/2
  const HybridResult r = hybrid_reconstruct(Image(16, 16, 0.3), p.data, p.mask, params);
  for (double w : r.weights.values()) EXPECT_EQ(w, 0.5);
  for (std::size_t j = 1; j < r.residual_norms.size(); ++j)
    EXPECT_NEAR(r.residual_norms[j] / r.residual_norms[j - 1], 0.2, 1e-9);
}

TEST(Hybrid, FullMaskConvergesToTruth) {
  std::mt19937_64 rng(58);
  const Image truth = recon::testing::random_real(32, 32, rng);
  const Mask mask = Mask::full(32, 32);
  HybridParams params;
  params.iterations = 600;
  params.stop_tol = 1e-15;
  const HybridResult r = hybrid_reconstruct(Image(32, 32), dft2_centered(truth), mask, params);
  EXPECT_LT(max_abs_diff(r.image, truth), 1e-10);
}

TEST(Hybrid, ImprovesDataFidelityOfTvResult) {
  const Image truth = shepp_logan(64);
  const Mask mask = build_mask(build_row_pattern(64, 64, 4, 7, 2));
  const Spectrum s = apply_mask(dft2_centered(truth), mask);
  TvParams tv;
  tv.iterations = 100;
  const Image init = tv_minimize(s, mask, tv).image;
  HybridParams params;
  params.smoothing = 0;
  std::vector<double> psnrs;
  const HybridResult r = hybrid_reconstruct(init, s, mask, params,
                                            [&](const HybridProgress& hp) { psnrs.push_back(*hp.psnr_db); }, &truth);
  EXPECT_EQ(psnrs.size(), 11u);
  // fidelity equals the residual norm, which each step shrinks by at least 1 - eps
  EXPECT_LT(data_fidelity(r.image, s, mask), std::pow(1.0 - params.epsilon, 10) * data_fidelity(init, s, mask));
}

TEST(Hybrid, StopToleranceEndsEarly) {
  std::mt19937_64 rng(59);
  const Problem p = random_problem(16, rng);
  HybridParams params;
  params.iterations = 100;
  params.stop_tol = 1e-3;
  const HybridResult r = hybrid_reconstruct(Image(16, 16), p.data, p.mask, params);
  EXPECT_LT(r.residual_norms.size(), 101u);
  EXPECT_LT(r.residual_norms.back(), 1e-3 * r.residual_norms.front());
}

TEST(Hybrid, ConfigErrors) {
  const Mask rows = build_mask(build_row_pattern(16, 16, 2, 3, 2));
  const Spectrum s(16, 16);
  const Image a(16, 16);
  HybridParams bad;
  bad.mu = 2.0;
  EXPECT_THROW(hybrid_reconstruct(a, s, rows, bad), ConfigError);
  bad = {};
  bad.epsilon = 0.0;
  EXPECT_THROW(hybrid_reconstruct(a, s, rows, bad), ConfigError);
  EXPECT_THROW(hybrid_reconstruct(a, s, build_mask(pattern_from_rows(16, 16, {0, 1})), {}), ConfigError);
  EXPECT_THROW(hybrid_reconstruct(a, s, build_mask(build_box_pattern(16, 16, 4, 3)), {}), ConfigError);
  EXPECT_THROW(hybrid_reconstruct(Image(8, 8), s, rows, {}), ConfigError);
  std::mt19937_64 rng(60);
  EXPECT_THROW(hybrid_reconstruct_box(a, s, recon::testing::random_entry_mask(16, 16, rng), {}), ConfigError);
}

TEST(HybridBox, RunsAndContracts) {
  const Image truth = shepp_logan(64);
  const Mask mask = build_mask(build_box_pattern(64, 64, 4, 9));
  const Spectrum s = apply_mask(dft2_centered(truth), mask);
  TvParams tv;
  tv.iterations = 60;
  tv.lambda = 1000.0;
  const Image init = tv_minimize(s, mask, tv).image;
  HybridParams params;
  params.smoothing = 1;
  const HybridResult r = hybrid_reconstruct_box(init, s, mask, params);
  for (std::size_t j = 1; j < r.residual_norms.size(); ++j)
    EXPECT_LE(r.residual_norms[j], 0.95 * r.residual_norms[j - 1] + 1e-13);
  for (double w : r.weights.values()) {
    EXPECT_GE(w, 0.05);
    EXPECT_LE(w, 0.95);
  }
}
