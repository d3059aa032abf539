#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "d4/engine.hpp"
#include "d4/error.hpp"
#include "d4/modelops.hpp"
#include "d4/noise.hpp"
#include "d4/prep.hpp"
#include "d4/rng.hpp"
#include "d4/serialize.hpp"

using namespace d4;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

Program random_program(int n, int gates, std::uint64_t seed) {
  Rng rng(seed);
  Program p;
  for (int q = 0; q < n; ++q) p.alloc(q, rng.below(2));
  for (int k = 0; k < gates; ++k) {
    int a = static_cast<int>(rng.below(n));
    int b = (a + 1 + static_cast<int>(rng.below(n - 1))) % n;
    int c = (b + 1 + static_cast<int>(rng.below(n - 1))) % n;
    while (c == a || c == b) c = (c + 1) % n;
    double th = (rng.uniform() - 0.5) * 4.0;
    switch (rng.below(9)) {
      case 0: p.h(a); break;
      case 1: p.s(a); break;
      case 2: p.x(a); break;
      case 3: p.cz(a, b); break;
      case 4: p.cnot(a, b); break;
      case 5: p.zz_phase(a, b, th); break;
      case 6: p.zzz_phase(a, b, c, th); break;
      case 7: p.ccz(a, b, c); break;
      default: p.ccx(a, b, c); break;
    }
  }
  return p;
}

RunOptions backend_opts(Backend b, Precision p = Precision::C128) {
  RunOptions o;
  o.backend = b;
  o.precision = p;
  return o;
}

}  // namespace

// ---- lattice ----

class TorusSizes : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(TorusSizes, IncidenceInvariants) {
  auto [lx, ly] = GetParam();
  auto t = KagomeTorus::build(lx, ly);
  EXPECT_EQ(t.num_vertices(), 3 * lx * ly);
  EXPECT_EQ(t.num_triangles(), 2 * lx * ly);
  std::vector<int> in_hex(t.num_vertices(), 0), as_tip(t.num_vertices(), 0);
  for (int s = 0; s < t.num_stars(); ++s) {
    auto c = t.star_coord(s);
    EXPECT_EQ(t.star_color(s), KagomeTorus::coord_color(c));
    EXPECT_EQ(t.star_index({c.i + lx, c.j}), s);
    std::set<int> hex(t.hexagon(s).begin(), t.hexagon(s).end());
    EXPECT_EQ(hex.size(), 6u);
    for (int v : t.hexagon(s)) {
      ++in_hex[v];
      EXPECT_NE(t.vertex_color(v), t.star_color(s));
    }
    for (int v : t.tips(s)) {
      ++as_tip[v];
      EXPECT_EQ(t.vertex_color(v), t.star_color(s));
    }
    for (const auto& n : kNeighbors) EXPECT_NE(KagomeTorus::coord_color(c + n), t.star_color(s));
  }
  for (int v = 0; v < t.num_vertices(); ++v) {
    EXPECT_EQ(in_hex[v], 2);
    EXPECT_EQ(as_tip[v], 2);
  }
  for (int k = 0; k < t.num_triangles(); ++k) {
    const auto& tr = t.triangle(k);
    for (int v : tr.vertices) EXPECT_EQ(t.vertex_color(v), tr.color);
    EXPECT_NE(tr.color, t.star_color(tr.star));
  }
}

INSTANTIATE_TEST_SUITE_P(Lattice, TorusSizes,
                         ::testing::Values(std::pair{3, 3}, std::pair{6, 3}, std::pair{3, 4},
                                           std::pair{6, 6}));

TEST(Lattice, SmallTorusRejected) {
  EXPECT_EQ(code_of([] { KagomeTorus::build(2, 2); }), ErrorCode::IncompatibleSize);
  EXPECT_EQ(code_of([] { KagomeTorus::build(1, 3); }), ErrorCode::SizeTooSmall);
}

TEST(Lattice, StabilizersCommuteOnFullSpace) {
  auto t = KagomeTorus::build(3, 3);
  auto rep = commutator_check(t, 5, 300);
  EXPECT_EQ(rep.subspace_dim, 4096u);
  EXPECT_LT(rep.max_norm_subspace, 1e-12);
  EXPECT_LT(rep.max_norm_disjoint, 1e-12);
}

TEST(Lattice, SameOrientationEndpointsRejected) {
  auto t = KagomeTorus::build(3, 3);
  auto blue = t.triangles_of_color(Color::B);
  int a = -1, b = -1;
  for (int x : blue)
    for (int y : blue)
      if (x != y && t.triangle(x).orientation == t.triangle(y).orientation && a < 0) a = x, b = y;
  ASSERT_GE(a, 0);
  EXPECT_EQ(code_of([&] { anyon_string(t, Color::B, a, b); }), ErrorCode::BadEndpoints);
  EXPECT_EQ(code_of([&] { anyon_string(t, Color::R, a, b); }), ErrorCode::BadEndpoints);
}

// ---- engine ----

TEST(Engine, DenseAndSparseAgree) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto p = random_program(6, 60, seed);
    auto d = run(p, 1, backend_opts(Backend::Dense));
    auto s = run(p, 1, backend_opts(Backend::Sparse));
    auto f = run(p, 1, backend_opts(Backend::Dense, Precision::C64));
    EXPECT_NEAR(std::abs(overlap(*d.state, *s.state) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(fidelity(*d.state, *f.state), 1.0, 1e-5);
    EXPECT_NEAR(d.state->norm2(), 1.0, 1e-12);
  }
}

TEST(Engine, InverseUndoesProgram) {
  auto p = random_program(5, 40, 9);
  Program alloc_only, body;
  for (const auto& in : p.ins) (in.op == Op::Alloc ? alloc_only : body).ins.push_back(in);
  Program round = alloc_only;
  round.append(body).append(inverse(body));
  auto a = run(alloc_only, 1);
  auto b = run(round, 1);
  EXPECT_NEAR(std::abs(overlap(*a.state, *b.state)), 1.0, 1e-12);
}

TEST(Engine, ControlledOnZeroIsIdentity) {
  auto p = random_program(4, 30, 3);
  Program alloc_only, body;
  for (const auto& in : p.ins) (in.op == Op::Alloc ? alloc_only : body).ins.push_back(in);
  Program with = alloc_only;
  with.alloc(10).append(controlled(body, 10));
  auto a = run(alloc_only, 1);
  auto b = run(with, 1);
  b.state->project(10, 0);
  b.state->drop(10, 0);
  EXPECT_NEAR(std::abs(overlap(*a.state, *b.state)), 1.0, 1e-12);
}

TEST(Engine, MeasureThenDropEqualsProjection) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto p = random_program(5, 40, seed + 20);
    auto before = run(p, 1);
    for (int outcome : {0, 1}) {
      auto manual = before.state->clone();
      double prob = outcome ? manual->prob_one(2) : 1.0 - manual->prob_one(2);
      if (prob < 1e-9) continue;
      manual->project(2, outcome);
      manual->drop(2, outcome);
      Program m = p;
      m.measure_z(2, "m").drop(2);
      RunOptions o;
      o.forced["m"] = outcome;
      auto r = run(m, 1, o);
      EXPECT_EQ(r.record.bit("m"), outcome);
      EXPECT_NEAR(std::abs(overlap(*manual, *r.state)), 1.0, 1e-12);
      EXPECT_NEAR(r.state->norm2(), 1.0, 1e-12);
    }
  }
}

TEST(Engine, RegisterCapEnforced) {
  Program p;
  for (int q = 0; q < 8; ++q) p.alloc(q);
  RunOptions o;
  o.register_cap = 6;
  EXPECT_EQ(code_of([&] { run(p, 1, o); }), ErrorCode::RegisterOverflow);
}

TEST(Engine, SamplingFollowsBornRule) {
  Program p;
  p.alloc(0).alloc(1).h(0).cnot(0, 1);
  auto r = run(p, 1);
  auto smp = sample(*r.state, {}, 4000, 3);
  int ones = 0;
  for (std::size_t k = 0; k < smp.shots.size(); ++k) {
    EXPECT_EQ(smp.value(k, 0), smp.value(k, 1));
    ones += smp.value(k, 0);
  }
  EXPECT_NEAR(ones / 4000.0, 0.5, 4 * 0.5 / std::sqrt(4000.0));
}

TEST(Engine, ProgramsAreDeterministicPerSeed) {
  auto t = KagomeTorus::build(3, 3);
  PrepConfig cfg;
  cfg.seed = 17;
  auto a = prepare(t, cfg);
  auto b = prepare(t, cfg);
  EXPECT_EQ(a.outcomes, b.outcomes);
  EXPECT_NEAR(std::abs(overlap(*a.state, *b.state)), 1.0, 1e-14);
}

// ---- noise ----

TEST(Noise, ModelValidation) {
  NoiseModel m;
  auto mat = m.readout_matrix();
  EXPECT_NEAR(mat[0] + mat[2], 1.0, 1e-15);
  EXPECT_NEAR(mat[1] + mat[3], 1.0, 1e-15);
  m.p_depol2 = 1.5;
  EXPECT_EQ(code_of([&] { m.validate(); }), ErrorCode::OutOfRange);
  m = NoiseModel{};
  m.p_read_0given1 = -0.1;
  EXPECT_EQ(code_of([&] { m.validate(); }), ErrorCode::OutOfRange);
  EXPECT_FALSE(NoiseModel::none().any());
}

TEST(Noise, GateNoiseRate) {
  Program p;
  p.alloc(0).alloc(1);
  for (int k = 0; k < 1000; ++k) p.cz(0, 1);
  NoiseModel m;
  m.p_depol2 = 0.0;
  EXPECT_EQ(apply_gate_noise(p, m, 1).size(), p.size());
  m.p_depol2 = 1.0;
  auto all = apply_gate_noise(p, m, 1);
  EXPECT_GT(all.size(), p.size() + 1000);
  m.p_depol2 = 0.1;
  auto some = apply_gate_noise(p, m, 2);
  EXPECT_GT(some.size(), p.size());
  EXPECT_EQ(apply_gate_noise(p, m, 2).size(), some.size());
}

TEST(Noise, ReadoutFlipRates) {
  NoiseModel m;
  m.p_read_0given1 = 0.2;
  m.p_read_1given0 = 0.05;
  std::vector<int> zeros(40000, 0), ones(40000, 1);
  auto z = apply_readout_noise(zeros, m, 4);
  auto o = apply_readout_noise(ones, m, 5);
  double fz = 0, fo = 0;
  for (int b : z) fz += b;
  for (int b : o) fo += 1 - b;
  EXPECT_NEAR(fz / 40000, 0.05, 4 * std::sqrt(0.05 * 0.95 / 40000));
  EXPECT_NEAR(fo / 40000, 0.2, 4 * std::sqrt(0.2 * 0.8 / 40000));
}

TEST(Noise, MitigationRecoversInjectedTruth) {
  NoiseModel m;
  m.p_read_0given1 = 0.06;
  m.p_read_1given0 = 0.03;
  const int shots = 100000;
  // true distribution over 4 bits, parity observable
  std::vector<std::uint32_t> noisy;
  double truth = 0.0;
  for (int k = 0; k < shots; ++k) {
    Rng rng(77, k);
    std::uint32_t x = rng.uniform() < 0.7 ? 0b0000u : static_cast<std::uint32_t>(rng.below(16));
    truth += std::popcount(x) % 2 ? -1.0 : 1.0;
    std::uint32_t y = 0;
    for (int q = 0; q < 4; ++q) y |= static_cast<std::uint32_t>(flip_readout(x >> q & 1, m, rng)) << q;
    noisy.push_back(y);
  }
  truth /= shots;
  auto parity = [](std::uint32_t p) { return std::popcount(p) % 2 ? -1.0 : 1.0; };
  auto est = mitigate_readout(noisy, 4, parity, m);
  EXPECT_GT(std::abs(est.raw - truth), 3 * est.raw_stderr);
  EXPECT_NEAR(est.value, truth, 3 * est.stderr_);
  EXPECT_EQ(code_of([&] { mitigate_readout(noisy, 17, parity, m); }), ErrorCode::SupportTooLarge);
}

// ---- serialize ----

TEST(Serialize, ReportRoundTrip) {
  auto t = KagomeTorus::build(3, 3);
  auto psi0 = ground_state(t);
  auto rep = exact_report(t, *psi0, SectorSpec{});
  rep.series["x"] = {1.0, 2.5};
  rep.noise = NoiseModel{};
  auto j = to_json(rep);
  EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
  auto back = report_from_json(j);
  EXPECT_EQ(to_json(back).dump(), j.dump());
}

TEST(Serialize, ConfigMerge) {
  PrepConfig base;
  auto cfg = prep_config_from_json(json{{"seed", 5}, {"variant", "naive"}, {"sector", "000011"},
                                        {"noise", {{"p_depol2", 0.01}}}, {"forced", {{"3", 1}}}},
                                   base);
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.variant, PrepVariant::Naive);
  EXPECT_EQ(cfg.sector.bits(), "000011");
  ASSERT_TRUE(cfg.noise);
  EXPECT_EQ(cfg.noise->p_depol2, 0.01);
  EXPECT_EQ(cfg.noise->p_read_0given1, NoiseModel{}.p_read_0given1);
  EXPECT_EQ(cfg.forced.at(3), 1);
  EXPECT_EQ(cfg.lx, 3);
  EXPECT_EQ(code_of([] { prep_config_from_json(json{{"bogus", 1}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { noise_from_json(json{{"p_depol2", 2.0}}); }), ErrorCode::OutOfRange);
  EXPECT_EQ(to_json(prep_config_from_json(to_json(cfg))).dump(), to_json(cfg).dump());
}

TEST(Serialize, SectorForms) {
  EXPECT_EQ(sector_from_json(json("010001")).bits(), "010001");
  EXPECT_EQ(sector_from_json(json{{"z", {1, -1, 1, 1, 1, -1}}}).bits(), "010001");
  EXPECT_EQ(code_of([] { sector_from_json(json{{"z", {1, 2}}}); }), ErrorCode::InvalidArgument);
}

TEST(Serialize, ErrorExitCodes) {
  EXPECT_EQ(exit_code(Error(ErrorCode::IncompatibleSize, "")), 2);
  EXPECT_EQ(exit_code(Error(ErrorCode::MemoryLimit, "")), 3);
  EXPECT_EQ(exit_code(Error(ErrorCode::ConstraintViolation, "")), 4);
  EXPECT_EQ(error_json(Error(ErrorCode::MemoryLimit, "x")).at("class"), "resource");
}
