#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "d4/error.hpp"
#include "d4/experiments.hpp"
#include "d4/modelops.hpp"

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

// bit = (1 - Z)/2 in the order RH GH BH RV GV BV
const std::set<std::string> kListedSectors = {
    "000000", "000001", "000010", "000011", "000100", "000101", "000110", "000111",
    "001000", "010000", "011000", "100000", "101000", "110000", "111000", "001001",
    "010010", "011011", "100100", "101101", "110110", "111111"};

}  // namespace

TEST(Constraint, ExhaustiveOverBPlusSubspace) {
  auto rep = constraint_check(torus33());
  EXPECT_EQ(rep.scalars.at("violations").value, 0.0);
  EXPECT_EQ(rep.scalars.at("states_checked").value, 4096.0);
}

TEST(Constraint, RandomizedMode) {
  auto rep = constraint_check(torus33(), ConstraintMode::Randomized, 500, 3);
  EXPECT_EQ(rep.scalars.at("states_checked").value, 500.0);
}

TEST(Constraint, AllZerosIsTrivial) {
  auto basis = b_plus_basis(torus33());
  ASSERT_EQ(basis.front(), 0u);
  for (Color c : {Color::R, Color::G, Color::B}) EXPECT_EQ(SectorSpec{}.star_product(c), 1);
}

TEST(Constraint, CrossingExampleHasThreeNegativeFactors) {
  auto ex = crossing_example(torus33());
  EXPECT_EQ(ex.negative_cz, 3);
  EXPECT_EQ(ex.lhs, -1);
  EXPECT_EQ(ex.rhs, -1);
  for (int v : ex.ones) EXPECT_NE(torus33().vertex_color(v), Color::R);
}

TEST(Sectors, EnumerationMatchesListedSet) {
  std::set<std::string> admissible;
  for (const auto& s : enumerate_sectors())
    if (s.admissible()) admissible.insert(s.bits());
  EXPECT_EQ(admissible, kListedSectors);
  EXPECT_TRUE(SectorSpec{}.admissible());
  SectorSpec single;
  single.set(Color::G, Direction::H, -1);
  single.set(Color::R, Direction::V, -1);
  EXPECT_FALSE(single.admissible());
  SectorSpec as_listed;
  as_listed.set(Color::G, Direction::V, -1);
  as_listed.set(Color::R, Direction::H, -1);
  EXPECT_FALSE(as_listed.admissible());
}

TEST(Sectors, AllGroundStatesExact) {
  auto reps = all_ground_states(torus33(), Mode::Exact);
  ASSERT_EQ(reps.size(), 22u);
  std::set<std::string> seen;
  for (const auto& r : reps) {
    EXPECT_NEAR(r.scalars.at("energy_density").value, -1.0, 1e-10) << r.sector->bits();
    EXPECT_NEAR(r.scalars.at("pinning").value, 1.0, 1e-10) << r.sector->bits();
    seen.insert(r.sector->bits());
  }
  EXPECT_EQ(seen, kListedSectors);
}

TEST(Sectors, SampledNoiselessWithinShotNoise) {
  SamplingOptions opts;
  opts.shots = 500;
  opts.seed = 11;
  auto rep = sampled_report(torus33(), psi0(), SectorSpec{}, opts);
  // an exact eigenstate gives deterministic outcomes
  EXPECT_EQ(rep.scalars.at("energy_density").value, -1.0);
  EXPECT_EQ(rep.scalars.at("pinning").value, 1.0);
  EXPECT_EQ(rep.scalars.at("projector_R").value, 1.0);
}

TEST(SingleAnyon, OneBlueStar) {
  auto rep = single_anyon(torus33());
  EXPECT_EQ(rep.scalars.at("negative_stars").value, 1.0);
  EXPECT_EQ(rep.scalars.at("anyon_color").value, color_id(Color::B));
  for (const auto& t : rep.triangles) EXPECT_NEAR(t.value, 1.0, 1e-10);
  int plus = 0;
  for (const auto& s : rep.stars)
    if (std::abs(s.value - 1.0) < 1e-10) ++plus;
  EXPECT_EQ(plus, 8);
}

TEST(SingleAnyon, SamePairTwiceReturnsToGroundSpace) {
  auto once = apply_logical_x(torus33(), psi0(), {{Color::R, Direction::H}, {Color::G, Direction::V}});
  auto twice =
      apply_logical_x(torus33(), *once, {{Color::R, Direction::H}, {Color::G, Direction::V}});
  for (int s = 0; s < torus33().num_stars(); ++s)
    EXPECT_NEAR(expval_real(*twice, star_op(torus33(), s).op), 1.0, 1e-10);
}

TEST(SingleAnyon, AdmissibleLogicalsLeaveNoCharge) {
  auto st = apply_logical_x(torus33(), psi0(), {{Color::R, Direction::H}, {Color::G, Direction::H}});
  for (int s = 0; s < torus33().num_stars(); ++s)
    EXPECT_NEAR(expval_real(*st, star_op(torus33(), s).op), 1.0, 1e-10);
}

TEST(Degeneracy, UniformOverAllowedSectors) {
  auto rep = degeneracy_scan(torus33(), 2200, 5);
  const auto& counts = rep.series.at("counts");
  double total = 0.0;
  for (int m = 0; m < 64; ++m) {
    total += counts[m];
    if (!SectorSpec::from_index(m).admissible()) EXPECT_EQ(counts[m], 0.0);
  }
  EXPECT_EQ(total, 2200.0);
  EXPECT_LT(rep.scalars.at("forbidden_mass").value, 1e-20);
  EXPECT_GT(rep.scalars.at("p_value").value, 0.01);
}

TEST(Degeneracy, SingleTrialIsReproducible) {
  auto a = degeneracy_scan(torus33(), 1, 99);
  auto b = degeneracy_scan(torus33(), 1, 99);
  EXPECT_EQ(a.series.at("counts"), b.series.at("counts"));
}

TEST(Degeneracy, ProductEnsembleHasNoForbiddenMass) {
  auto rep = degeneracy_scan(torus33(), 50, 2, Ensemble::Product);
  EXPECT_EQ(rep.scalars.at("forbidden_counts").value, 0.0);
  EXPECT_LT(rep.scalars.at("forbidden_mass").value, 1e-20);
}

TEST(Degeneracy, ChiSquareReference) {
  // upper-tail probability of chi^2 with 2 dof is exp(-x/2)
  EXPECT_NEAR(chi_square_p_value(3.0, 2), std::exp(-1.5), 1e-14);
}

TEST(Fidelity, BoundValues) {
  auto a = fidelity_bounds(0.90, 0.85, 0.89, 27);
  EXPECT_NEAR(a.lower, 0.65, 0.02);
  EXPECT_NEAR(a.per_site_lower, 0.984, 0.001);
  EXPECT_NEAR(a.upper, 0.85, 1e-12);
  EXPECT_NEAR(a.per_site_upper, 0.994, 0.001);
  auto b = fidelity_bounds(0.94, 0.89, 0.93, 27);
  EXPECT_NEAR(b.lower, 0.75, 0.02);
  EXPECT_NEAR(b.per_site_lower, 0.990, 0.001);
  auto c = fidelity_bounds(1, 1, 1, 27);
  EXPECT_EQ(c.lower, 1.0);
  EXPECT_EQ(c.upper, 1.0);
  EXPECT_THROW(fidelity_bounds(1.1, 0.5, 0.5, 27), Error);
  EXPECT_THROW(fidelity_bounds(-0.1, 0.5, 0.5, 27), Error);
}

TEST(Fidelity, ProjectorsOnGroundState) {
  for (auto ch : {ProjectorChoice::Lowest, ProjectorChoice::Highest}) {
    auto pv = projector_expectations(torus33(), psi0(), ch);
    EXPECT_NEAR(pv.r.value, 1.0, 1e-10);
    EXPECT_NEAR(pv.g.value, 1.0, 1e-10);
    EXPECT_NEAR(pv.b.value, 1.0, 1e-10);
  }
}

TEST(Fidelity, BoundHoldsForBothOmissionChoices) {
  const auto& t = torus33();
  PrepConfig cfg;
  cfg.noise = NoiseModel{};
  cfg.noise->p_depol2 = 0.02;
  int tested = 0;
  for (std::uint64_t seed = 1; tested < 4 && seed < 40; ++seed) {
    cfg.seed = seed;
    auto r = prepare(t, cfg);
    if (r.herald) continue;
    double f = fidelity(psi0(), *r.state);
    if (f > 1 - 1e-9) continue;
    ++tested;
    for (auto ch : {ProjectorChoice::Lowest, ProjectorChoice::Highest}) {
      auto pv = projector_expectations(t, *r.state, ch);
      auto fb = fidelity_bounds(pv.r.value, pv.g.value, pv.b.value, t.num_vertices());
      EXPECT_LE(fb.lower, f + 1e-9);
      EXPECT_GE(fb.upper, f - 1e-9);
    }
  }
  EXPECT_GT(tested, 0);
}

TEST(Fidelity, ProjectorsCommuteOperatorially) {
  const auto& t = torus33();
  auto basis = b_plus_basis(t);
  // R and G are products of commuting stabilizer projectors; check every pair of their factors
  std::vector<OperatorExpr> red, green;
  for (int s : t.stars_of_color(Color::R)) red.push_back(star_op(t, s).op);
  for (int s : t.stars_of_color(Color::G)) green.push_back(star_op(t, s).op);
  for (const auto& a : red)
    for (const auto& b : green) EXPECT_EQ(count_noncommuting(a, b, basis), 0u);
}

TEST(Noisy, PrepPipelineReportsDiscardsAndBoundedEnergy) {
  SamplingOptions opts;
  opts.shots = 20;
  opts.seed = 4;
  opts.noise = NoiseModel{};
  PrepConfig cfg;
  auto rep = noisy_prep_report(torus33(), cfg, opts);
  EXPECT_LT(rep.discarded, 30);
  EXPECT_NEAR(rep.scalars.at("discard_rate").value, rep.discarded / 60.0, 1e-12);
  double e = rep.scalars.at("energy_density").value;
  EXPECT_LT(e, -0.8);
  EXPECT_GE(e, -1.0);
  EXPECT_GT(rep.scalars.at("energy_density").stderr_, 0.0);
  for (const auto& s : rep.stars) EXPECT_LE(std::abs(s.value), 1.0);
}

TEST(Noisy, MitigationRaisesReadoutDamagedStars) {
  SamplingOptions opts;
  opts.shots = 4000;
  opts.seed = 8;
  opts.noise = NoiseModel{};
  opts.noise->p_read_0given1 = 0.03;
  opts.noise->p_read_1given0 = 0.02;
  auto raw = sampled_report(torus33(), psi0(), SectorSpec{}, opts);
  opts.mitigate = true;
  auto mit = sampled_report(torus33(), psi0(), SectorSpec{}, opts);
  for (int s = 0; s < torus33().num_stars(); ++s) {
    EXPECT_LT(raw.stars[s].value, 0.9);
    EXPECT_NEAR(mit.stars[s].value, 1.0, 4 * mit.stars[s].stderr_ + 1e-12);
  }
}
