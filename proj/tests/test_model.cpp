#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "d4/error.hpp"
#include "d4/modelops.hpp"
#include "d4/prep.hpp"

using namespace d4;

namespace {

const KagomeTorus& torus33() {
  static const KagomeTorus t = KagomeTorus::build(3, 3);
  return t;
}

const State& psi0() {
  static const auto s = ground_state(torus33());
  return *s;
}

void expect_ground(const KagomeTorus& t, const State& s, double tol) {
  for (int k = 0; k < t.num_stars(); ++k)
    EXPECT_NEAR(expval_real(s, star_op(t, k).op), 1.0, tol) << "star " << k;
  for (int k = 0; k < t.num_triangles(); ++k)
    EXPECT_NEAR(expval_real(s, triangle_op(t, k).op), 1.0, tol) << "triangle " << k;
}

int count_negative_stars(const KagomeTorus& t, const State& s) {
  int n = 0;
  for (int k = 0; k < t.num_stars(); ++k)
    if (expval_real(s, star_op(t, k).op) < -0.5) ++n;
  return n;
}

}  // namespace

TEST(Prep, ForcedGroundStateIsStabilized) {
  expect_ground(torus33(), psi0(), 1e-10);
  for (Color c : {Color::R, Color::G, Color::B})
    for (Direction d : {Direction::H, Direction::V})
      EXPECT_NEAR(expval_real(psi0(), logical(torus33(), c, d, LogicalKind::Z).op), 1.0, 1e-10);
}

TEST(Prep, RandomOutcomesAreRepairedByFeedForward) {
  const auto& t = torus33();
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    PrepConfig cfg;
    cfg.seed = seed;
    auto r = prepare(t, cfg);
    if (r.herald) continue;
    EXPECT_NEAR(std::abs(overlap(psi0(), *r.state)), 1.0, 1e-10) << "seed " << seed;
  }
}

TEST(Prep, NaiveAndCompiledAgree) {
  const auto& t = torus33();
  PrepConfig cfg;
  cfg.variant = PrepVariant::Naive;
  cfg.forced = {{0, 1}, {3, 1}, {1, 0}};
  auto a = prepare(t, cfg);
  cfg.variant = PrepVariant::Compiled;
  auto b = prepare(t, cfg);
  EXPECT_NEAR(std::norm(overlap(*a.state, *b.state)), 1.0, 1e-9);
  auto naive = compile_prep(t, PrepVariant::Naive).cost;
  auto comp = compile_prep(t, PrepVariant::Compiled).cost;
  EXPECT_EQ(naive.two_qubit_gates, 108);
  EXPECT_EQ(naive.peak_register, 36);
  EXPECT_EQ(comp.two_qubit_gates, 78);
  EXPECT_EQ(comp.peak_register, 30);
}

TEST(Braid, PairFusionReturnsGroundState) {
  const auto& t = torus33();
  auto run = run_braid(t, psi0(), fusion_braid());
  EXPECT_NEAR(std::abs(overlap(psi0(), *run.state)), 1.0, 1e-10);
  const auto& created = run.snapshots[0].second;
  const auto& moved = run.snapshots[1].second;
  EXPECT_NEAR(created.stars[t.star_index({0, 0})], 0.0, 1e-10);
  EXPECT_NEAR(created.stars[t.star_index({1, 0})], 0.0, 1e-10);
  EXPECT_NEAR(moved.stars[t.star_index({0, 0})], 0.0, 1e-10);
  EXPECT_NEAR(moved.stars[t.star_index({2, 1})], 0.0, 1e-10);
  EXPECT_NEAR(moved.stars[t.star_index({1, 0})], 1.0, 1e-10);
}

TEST(Braid, GreenRingLeavesRedPair) {
  const auto& t = torus33();
  auto run = run_braid(t, psi0(), ring_braid());
  int red = 0;
  for (int s = 0; s < t.num_stars(); ++s) {
    double a = expval_real(*run.state, star_op(t, s).op);
    if (a < -0.5) {
      EXPECT_EQ(t.star_color(s), Color::R);
      ++red;
    } else {
      EXPECT_NEAR(a, 1.0, 1e-10);
    }
  }
  EXPECT_EQ(red, 2);
}

TEST(Borromean, ExactPhases) {
  const auto& t = torus33();
  auto rgb = borromean_exact(t, psi0(), BorromeanVariant::RGB);
  EXPECT_NEAR(rgb.value.real(), -1.0, 1e-9);
  EXPECT_NEAR(rgb.phase, std::numbers::pi, 1e-9);
  for (auto v : {BorromeanVariant::RBOnly, BorromeanVariant::GBOnly}) {
    auto e = borromean_exact(t, psi0(), v);
    EXPECT_NEAR(e.value.real(), 1.0, 1e-9);
  }
  auto h = borromean_hadamard(t, psi0(), BorromeanVariant::RGB, 10000, 7);
  double d = std::remainder(h.phase - std::numbers::pi, 2 * std::numbers::pi);
  EXPECT_LE(std::abs(d), 3 * h.phase_err + 1e-12);
}

TEST(Sectors, LoopsAndBasisAgree) {
  const auto& t = torus33();
  int admissible = 0;
  for (int m = 0; m < 64; ++m) {
    SectorSpec sec = SectorSpec::from_index(m);
    if (!sec.admissible()) continue;
    ++admissible;
    PrepConfig cfg;
    cfg.sector = sec;
    for (int s = 0; s < t.num_stars(); ++s) cfg.forced[s] = 0;
    auto r = prepare(t, cfg);
    EXPECT_EQ(count_negative_stars(t, *r.state), 0) << sec.bits();
    auto b = basis_sector_state(t, sec);
    EXPECT_NEAR(std::abs(overlap(*b, *r.state)), 1.0, 1e-9) << sec.bits();
  }
  EXPECT_EQ(admissible, 22);
}
