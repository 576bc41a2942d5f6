#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include <msglance/error.hpp>
#include <msglance/glance.hpp>
#include <msglance/loss.hpp>
#include <msglance/mri.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace msglance;

namespace {

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform();
  return v;
}

GlanceConfig small_config() {
  GlanceConfig cfg;
  cfg.window_rows = cfg.window_cols = 4;
  cfg.grid_rows = cfg.grid_cols = 8;
  cfg.shuffles = 3;
  return cfg;
}

}  // namespace

TEST(GlanceIndex, HandExample) {
  const std::vector<double> a{0, 1}, b{1, 0};
  EXPECT_NEAR(glance_index(a, b, 0.03), (-0.25 + 0.03) / (0.25 + 0.03), 1e-15);
  EXPECT_NEAR(glance_index(a, b, 0.03), -0.785714285714, 1e-12);
}

TEST(GlanceIndex, IdentityAndConstantRescue) {
  Rng rng(1);
  const auto v = random_vector(64, rng);
  EXPECT_EQ(glance_index(v, v, 0.03), 1.0);
  const std::vector<double> c0(10, 0.2), c1(10, 0.7);
  EXPECT_EQ(glance_index(c0, c1, 0.03), 1.0);
}

TEST(GlanceIndex, Errors) {
  EXPECT_THROW(glance_index(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}, 0.03), InputError);
  EXPECT_THROW(glance_index(std::vector<double>{1}, std::vector<double>{1}, 0.03), InputError);
}

TEST(GlanceIndex, RangeSymmetryAndPearson) {
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 2 + rng.uniform_index(511);
    const auto a = random_vector(n, rng);
    const auto b = random_vector(n, rng);
    const double g = glance_index(a, b, 0.03);
    ASSERT_GE(g, -1.0);
    ASSERT_LE(g, 1.0);
    ASSERT_EQ(g, glance_index(b, a, 0.03));
    ASSERT_NEAR(glance_index(a, b, 1e-300), oracle::pearson(a, b), 1e-9);
  }
}

TEST(GlanceIndex, ShiftAndScaleInvariance) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_vector(50, rng);
    const auto b = random_vector(50, rng);
    const double base = glance_index(a, b, 0.03);
    auto shifted = b;
    const double alpha = rng.uniform(-5.0, 5.0);
    for (double& x : shifted) x += alpha;
    EXPECT_NEAR(glance_index(a, shifted, 0.03), base, 1e-12);

    const double raw = glance_index(a, b, 0.0);
    // powers of two scale without rounding
    for (double beta : {0.25, 2.0, 8.0}) {
      auto scaled = b;
      for (double& x : scaled) x *= beta;
      EXPECT_EQ(glance_index(a, scaled, 0.0), raw);
    }
    auto scaled = b;
    const double beta = rng.uniform(0.1, 10.0);
    for (double& x : scaled) x *= beta;
    EXPECT_NEAR(glance_index(a, scaled, 0.0), raw, 1e-12);
  }
}

TEST(GlanceIndex, WeightedMatchesOracle) {
  Rng rng(4);
  const auto w = oracle::gaussian<double>(4, 4, 1.5);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_vector(16, rng);
    const auto b = random_vector(16, rng);
    EXPECT_NEAR(glance_index(a, b, 0.03, w), oracle::glance_index(a, b, 0.03, &w), 1e-13);
  }
}

TEST(GlanceIndexLc, Examples) {
  Rng rng(5);
  const auto v = random_vector(32, rng);
  EXPECT_NEAR(glance_index_lc(v, v, 0.03), 1.0, 1e-15);
  const std::vector<double> zeros(8, 0.0), ones(8, 1.0);
  const double c1 = 1e-4;
  EXPECT_NEAR(glance_index_lc(zeros, ones, 0.03), c1 / (1 + c1), 1e-15);
  auto doubled = v;
  for (double& x : doubled) x *= 2.0;
  EXPECT_NEAR(glance_index(v, doubled, 1e-15), 1.0, 1e-12);
  EXPECT_LT(glance_index_lc(v, doubled, 0.03), 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_vector(20, rng);
    const auto b = random_vector(20, rng);
    EXPECT_NEAR(glance_index_lc(a, b, 0.03), oracle::glance_index<double>(a, b, 0.03, nullptr, true), 1e-13);
  }
}

TEST(GlanceConfig, DefaultsAndValidation) {
  const GlanceConfig d;
  EXPECT_EQ(d.grid_rows, 96u);
  EXPECT_EQ(d.grid_cols, 96u);
  EXPECT_EQ(d.window_rows, 16u);
  EXPECT_EQ(d.window_cols, 16u);
  EXPECT_EQ(d.stride, 1u);
  EXPECT_EQ(d.stability, 0.03);
  EXPECT_EQ(d.shuffles, 10u);
  EXPECT_EQ(d.kernel, Kernel::uniform);
  EXPECT_FALSE(d.lc_augment);
  EXPECT_FALSE(d.air_threshold.has_value());
  EXPECT_NO_THROW(d.validate());

  GlanceConfig bad = d;
  bad.window_rows = 100;
  EXPECT_THROW(bad.validate(), InputError);
  bad = d;
  bad.stride = 0;
  EXPECT_THROW(bad.validate(), InputError);
  bad = d;
  bad.stability = 0.0;
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(SelectPixels, DistinctInBounds) {
  Rng rng(6);
  const Image img = fixtures::random_image(224, 224, 1, rng);
  const SampleGrid g = select_pixels(img, GlanceConfig{}, rng);
  EXPECT_EQ(g.coords.size(), 9216u);
  EXPECT_FALSE(g.degenerate);
  std::set<PixelCoord> unique(g.coords.begin(), g.coords.end());
  EXPECT_EQ(unique.size(), 9216u);
  for (const auto& p : g.coords) {
    EXPECT_LT(p.row, 224u);
    EXPECT_LT(p.col, 224u);
  }
}

TEST(SelectPixels, AirPriorAndShortfall) {
  Image img(64, 64, 1, 0.0);
  for (std::size_t r = 0; r < 32; ++r) {
    for (std::size_t c = 0; c < 64; ++c) img.at(r, c, 0) = 0.5;
  }
  GlanceConfig cfg = small_config();
  cfg.air_threshold = 0.01;
  Rng rng(7);
  for (const SampleGrid& g : draw_global_sampling(img, cfg, rng)) {
    for (const auto& p : g.coords) EXPECT_GT(img.at(p.row, p.col, 0), 0.01);
  }
  cfg.grid_rows = cfg.grid_cols = 64;  // 4096 wanted, 2048 eligible
  const SampleGrid short_grid = select_pixels(img, cfg, rng);
  EXPECT_TRUE(short_grid.degenerate);
  for (const auto& p : short_grid.coords) EXPECT_LT(p.row, 32u);

  EXPECT_THROW(select_pixels(Image(8, 8, 1, 0.0), cfg, rng), InputError);
}

TEST(SelectPixels, ColorEligibilityUsesChannelMean) {
  Image img(4, 4, 3, 0.0);
  img.at(0, 0, 0) = 0.06;  // mean 0.02 > 0.01
  img.at(1, 1, 2) = 0.02;  // mean 0.0067
  GlanceConfig cfg;
  cfg.window_rows = cfg.window_cols = 1;
  cfg.grid_rows = cfg.grid_cols = 2;
  cfg.air_threshold = 0.01;
  Rng rng(8);
  for (const auto& p : select_pixels(img, cfg, rng).coords) {
    EXPECT_EQ(p.row, 0u);
    EXPECT_EQ(p.col, 0u);
  }
}

TEST(Reshuffle, SameCoordinatesNewOrder) {
  Rng rng(9);
  const Image img = fixtures::random_image(32, 32, 1, rng);
  const auto orderings = draw_global_sampling(img, small_config(), rng);
  ASSERT_EQ(orderings.size(), 3u);
  auto sorted = [](std::vector<PixelCoord> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(sorted(orderings[0].coords), sorted(orderings[1].coords));
  EXPECT_NE(orderings[0].coords, orderings[1].coords);
}

TEST(GlanceVectors, CountsAndLengths) {
  Rng rng(10);
  GlanceConfig cfg;
  SampleGrid g;
  g.rows = g.cols = 96;
  for (std::size_t i = 0; i < 96 * 96; ++i) g.coords.push_back({i / 96, i % 96});
  const Image big = fixtures::random_image(96, 96, 1, rng);
  EXPECT_EQ(build_global_vectors(big, g, cfg).size(), 6561u);
  EXPECT_EQ(build_global_vectors(big, g, cfg).length, 256u);
  cfg.stride = 16;
  EXPECT_EQ(build_global_vectors(big, g, cfg).size(), 36u);

  GlanceConfig one;
  one.grid_rows = one.grid_cols = 16;
  const Image tile = fixtures::random_image(16, 16, 1, rng);
  const auto local = build_local_vectors(tile, one);
  ASSERT_EQ(local.size(), 1u);
  EXPECT_TRUE(std::equal(local.vector(0).begin(), local.vector(0).end(), tile.data().begin()));

  const Image rgb = fixtures::random_image(20, 18, 3, rng);
  const auto color = build_local_vectors(rgb, GlanceConfig{});
  EXPECT_EQ(color.size(), 5u * 3u);
  EXPECT_EQ(color.length, 768u);
  EXPECT_THROW(build_local_vectors(fixtures::random_image(8, 8, 1, rng), GlanceConfig{}), InputError);
}

TEST(GlanceVectors, ProvenanceAndWindowsMatchOracle) {
  Rng rng(11);
  const Image img = fixtures::random_image(10, 9, 3, rng);
  GlanceConfig cfg = small_config();
  cfg.stride = 2;
  const auto set = build_local_vectors(img, cfg);
  const auto ref = oracle::windows(oracle::from<double>(img), 4, 4, 2);
  ASSERT_EQ(set.size(), ref.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto v = set.vector(i);
    ASSERT_TRUE(std::equal(v.begin(), v.end(), ref[i].begin()));
    const auto origin = set.origin(i);
    for (std::size_t e = 0; e < v.size(); ++e) EXPECT_EQ(img.at(origin[e].row, origin[e].col, e % 3), v[e]);
  }

  cfg.stride = 1;
  const auto orderings = draw_global_sampling(img, cfg, rng);
  const auto global = build_global_vectors(img, orderings[1], cfg);
  for (std::size_t i = 0; i < global.size(); ++i) {
    const auto v = global.vector(i);
    const auto origin = global.origin(i);
    for (std::size_t e = 0; e < v.size(); ++e) EXPECT_EQ(img.at(origin[e].row, origin[e].col, e % 3), v[e]);
  }
}

TEST(GlanceIm, SetExamples) {
  GlanceConfig cfg;
  cfg.window_rows = 1;
  cfg.window_cols = 2;
  GlanceVectorSet a, b;
  a.length = b.length = 2;
  a.values = {0, 1, 0.3, 0.6};
  b.values = {1, 0, 0.1, 0.2};
  a.provenance = b.provenance = std::vector<PixelCoord>(4);
  EXPECT_NEAR(glance_im(a, b, cfg), (1.0 - 0.785714285714285714) / 2.0, 1e-12);
  EXPECT_NEAR(glance_im(a, a, cfg), 1.0, 1e-15);
  GlanceVectorSet flat = a;
  flat.values = {0.5, 0.5, 0.2, 0.2};
  GlanceVectorSet flat2 = a;
  flat2.values = {0.1, 0.1, 0.9, 0.9};
  EXPECT_EQ(glance_im(flat, flat2, cfg), 1.0);
  GlanceVectorSet short_set = a;
  short_set.values.resize(2);
  EXPECT_THROW(glance_im(a, short_set, cfg), InputError);
}

TEST(MsGlanceLoss, IdentityHasZeroLossAndGradient) {
  Rng rng(12);
  for (std::size_t ch : {1, 3}) {
    const Image img = fixtures::random_image(20, 20, ch, rng);
    for (Kernel k : {Kernel::uniform, Kernel::gaussian}) {
      GlanceConfig cfg = small_config();
      cfg.kernel = k;
      cfg.lc_augment = ch == 3;
      const LossResult r = ms_glance_loss(img, img, cfg, rng);
      EXPECT_NEAR(r.loss, 0.0, 1e-12);
      for (double g : r.grad.data()) EXPECT_NEAR(g, 0.0, 1e-9);
    }
  }
}

TEST(MsGlanceLoss, MatchesBruteForceValue) {
  Rng rng(13);
  const Image ref = fixtures::random_image(16, 14, 1, rng);
  const Image flat(16, 14, 1, 0.4);
  const Image noisy = fixtures::perturbed(ref, 0.3, rng);
  for (const Image* pred : {&flat, &noisy}) {
    for (GlanceScope scope : {GlanceScope::local, GlanceScope::global, GlanceScope::multi_scale}) {
      for (Aggregation agg : {Aggregation::union_mean, Aggregation::separate_mean}) {
        GlanceConfig cfg = small_config();
        cfg.scope = scope;
        cfg.aggregation = agg;
        const auto orderings = draw_global_sampling(ref, cfg, rng);
        const double expected = 1.0 - oracle::glance_measure(oracle::from<double>(ref), oracle::from<double>(*pred),
                                                             cfg, orderings);
        EXPECT_NEAR(ms_glance_loss(ref, *pred, cfg, orderings).loss, expected, 1e-12);
        EXPECT_NEAR(1.0 - glance_im(ref, *pred, cfg, orderings), expected, 1e-12);
      }
    }
  }
}

TEST(MsGlanceLoss, GradientMatchesFiniteDifferences) {
  Rng rng(14);
  int variant = 0;
  for (std::size_t ch : {1, 3}) {
    for (Kernel k : {Kernel::uniform, Kernel::gaussian}) {
      for (bool lc : {false, true}) {
        const Image ref = fixtures::random_image(10, 9, ch, rng);
        const Image pred = fixtures::perturbed(ref, 0.2, rng);
        GlanceConfig cfg = small_config();
        cfg.grid_rows = cfg.grid_cols = 6;
        cfg.kernel = k;
        cfg.lc_augment = lc;
        cfg.aggregation = variant++ % 2 ? Aggregation::separate_mean : Aggregation::union_mean;
        const auto orderings = draw_global_sampling(ref, cfg, rng);
        const LossResult r = ms_glance_loss(ref, pred, cfg, orderings);
        const oracle::GlanceOracle<long double> f(10, 9, ch, cfg, orderings);
        const auto ref_l = oracle::from<long double>(ref).v;
        const auto fd = oracle::central_diff(
            oracle::from<long double>(pred).v, [&](const auto& x) { return 1 - f(ref_l, x); }, 1e-6L);
        EXPECT_LT(oracle::max_rel_error(r.grad.data(), fd, 1e-8), 1e-4) << "ch=" << ch << " lc=" << lc;
      }
    }
  }
}

TEST(MsGlanceLoss, UnsampledPixelsGetNoGlobalGradient) {
  Rng rng(15);
  const Image ref = fixtures::random_image(20, 20, 1, rng);
  const Image pred = fixtures::perturbed(ref, 0.2, rng);
  GlanceConfig cfg = small_config();
  cfg.scope = GlanceScope::global;
  const auto orderings = draw_global_sampling(ref, cfg, rng);
  const std::set<PixelCoord> used(orderings[0].coords.begin(), orderings[0].coords.end());
  const LossResult r = ms_glance_loss(ref, pred, cfg, orderings);
  for (std::size_t row = 0; row < 20; ++row) {
    for (std::size_t col = 0; col < 20; ++col) {
      if (!used.count({row, col})) {
        EXPECT_EQ(r.grad.at(row, col, 0), 0.0);
      }
    }
  }
}

TEST(MsGlanceLoss, DeterministicAndRangeBound) {
  Rng data(16);
  const Image ref = fixtures::random_image(24, 24, 3, data);
  const Image pred = fixtures::random_image(24, 24, 3, data);
  GlanceConfig cfg = small_config();
  Rng a(99), b(99);
  const LossResult ra = ms_glance_loss(ref, pred, cfg, a);
  const LossResult rb = ms_glance_loss(ref, pred, cfg, b);
  EXPECT_EQ(ra.loss, rb.loss);
  EXPECT_EQ(ra.grad, rb.grad);
  EXPECT_GE(ra.loss, 0.0);
  EXPECT_LE(ra.loss, 2.0);
}

TEST(MsGlanceLoss, AirPriorGridsOnPhantom) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Image ph = make_phantom(48, 40, PhantomKind::ellipses, rng);
    GlanceConfig cfg = small_config();
    cfg.air_threshold = 0.01;
    for (const auto& g : draw_global_sampling(ph, cfg, rng)) {
      for (const auto& p : g.coords) ASSERT_GT(ph.at(p.row, p.col, 0), 0.01);
    }
  }
}

TEST(NanGuard, PassthroughAndFallback) {
  const Image ref(2, 2, 1, {0, 1, 0, 1});
  const Image pred(2, 2, 1, {0.5, 0.5, 0.5, 0.5});
  NanGuard guard;
  auto fallback = [&] { return l1_loss(ref, pred); };
  LossResult fine{0.25, Image(2, 2, 1, 0.1)};
  const LossResult kept = guard.apply(fine, fallback);
  EXPECT_EQ(kept.loss, 0.25);
  EXPECT_EQ(guard.fallbacks(), 0u);

  const LossResult nan_loss = guard.apply({std::nan(""), Image(2, 2, 1)}, fallback);
  EXPECT_EQ(nan_loss.loss, 0.5);
  EXPECT_EQ(guard.fallbacks(), 1u);

  LossResult inf_grad{0.1, Image(2, 2, 1)};
  inf_grad.grad.at(1, 1, 0) = INFINITY;
  const LossResult replaced = guard.apply(inf_grad, fallback);
  EXPECT_EQ(replaced.grad.at(0, 0, 0), 0.25);
  EXPECT_EQ(replaced.grad.at(0, 1, 0), -0.25);
  EXPECT_EQ(guard.fallbacks(), 2u);
}
