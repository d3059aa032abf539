#include "d4/prep.hpp"

#include <algorithm>
#include <numbers>
#include <set>

#include "d4/error.hpp"
#include "d4/modelops.hpp"
#include "d4/parallel.hpp"

namespace d4 {

int SectorSpec::star_product(Color c) const {
  auto u = [&](Color k) { return sign(k, Direction::H) == -1 ? 1 : 0; };
  auto v = [&](Color k) { return sign(k, Direction::V) == -1 ? 1 : 0; };
  const Color a = color_shift(c, 1), b = color_shift(c, 2);
  return ((u(a) * v(b) + v(a) * u(b)) & 1) ? -1 : 1;
}

bool SectorSpec::admissible() const {
  for (Color c : {Color::R, Color::G, Color::B})
    if (star_product(c) != 1) return false;
  return true;
}

std::string SectorSpec::bits() const {
  std::string s;
  for (int x : z) s.push_back(x == -1 ? '1' : '0');
  return s;
}

SectorSpec SectorSpec::from_bits(const std::string& bits) {
  if (bits.size() != 6) throw Error(ErrorCode::InvalidArgument, "a sector has six bits");
  SectorSpec s;
  for (int k = 0; k < 6; ++k) {
    if (bits[k] != '0' && bits[k] != '1')
      throw Error(ErrorCode::InvalidArgument, "sector bits must be 0 or 1");
    s.z[k] = bits[k] == '1' ? -1 : 1;
  }
  return s;
}

SectorSpec SectorSpec::from_index(int m) {
  if (m < 0 || m >= 64) throw Error(ErrorCode::OutOfRange, "sector index must be in [0, 64)");
  SectorSpec s;
  for (int k = 0; k < 6; ++k) s.z[k] = (m >> k & 1) ? -1 : 1;
  return s;
}

int SectorSpec::index() const {
  int m = 0;
  for (int k = 0; k < 6; ++k)
    if (z[k] == -1) m |= 1 << k;
  return m;
}

const char* variant_name(PrepVariant v) { return v == PrepVariant::Naive ? "naive" : "compiled"; }

PrepVariant parse_variant(const std::string& s) {
  if (s == "naive") return PrepVariant::Naive;
  if (s == "compiled") return PrepVariant::Compiled;
  throw Error(ErrorCode::InvalidArgument, "unknown variant '" + s + "'");
}

std::string ancilla_label(int s) { return "anc" + std::to_string(s); }

CostReport cost_report(const Program& program) {
  CostReport r;
  r.peak_register = peak_register(program);
  r.depth = circuit_depth(program);
  for (const Instruction& in : program.ins) {
    switch (in.op) {
      case Op::CZ: case Op::CNOT: case Op::ZZPhase:
        r.two_qubit_gates += in.controls.empty() ? 1 : 6;
        break;
      case Op::ZZZPhase: r.two_qubit_gates += 3; break;
      case Op::CCZ: case Op::CCX: r.two_qubit_gates += 6; break;
      case Op::H: case Op::X: case Op::Y: case Op::Z: case Op::S: case Op::Sdg:
        if (in.controls.empty())
          ++r.one_qubit_gates;
        else
          r.two_qubit_gates += 1;
        break;
      case Op::Alloc:
        if (in.plus) ++r.one_qubit_gates;
        break;
      case Op::MeasureX: case Op::MeasureZ: ++r.measurements; break;
      default: break;
    }
  }
  return r;
}

namespace {

void measure_ancillas(const KagomeTorus& torus, Program& p, const std::vector<int>& stars) {
  for (int s : stars) p.measure_x(ancilla_qubit(torus, s), ancilla_label(s));
  for (int s : stars) p.drop(ancilla_qubit(torus, s));
}

Program naive_circuit(const KagomeTorus& torus) {
  Program p;
  const int n = torus.num_stars();
  for (int v = 0; v < torus.num_vertices(); ++v) p.alloc(v, false);
  for (int s = 0; s < n; ++s) p.alloc(ancilla_qubit(torus, s), true);
  for (const AncillaTriangle& t : torus.ancilla_triangles())
    p.zzz_phase(ancilla_qubit(torus, t.stars[0]), ancilla_qubit(torus, t.stars[1]),
                ancilla_qubit(torus, t.stars[2]), t.sign * std::numbers::pi / 8.0);
  for (int s = 0; s < n; ++s)
    for (int v : torus.tips(s)) p.cnot(ancilla_qubit(torus, s), v);
  std::vector<int> all(n);
  for (int s = 0; s < n; ++s) all[s] = s;
  measure_ancillas(torus, p, all);
  return p;
}

// tips of colour c grouped by the pair of stars that share them; each group costs 2 + (k-1)
void copy_fan(const KagomeTorus& torus, Program& p, Color c) {
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (int v : torus.vertices_of_color(c)) {
    auto ts = torus.tip_stars(v);
    groups[{std::min(ts[0], ts[1]), std::max(ts[0], ts[1])}].push_back(v);
  }
  for (const auto& [stars, vs] : groups) {
    p.cnot(ancilla_qubit(torus, stars.first), vs[0]);
    p.cnot(ancilla_qubit(torus, stars.second), vs[0]);
    for (std::size_t k = 1; k < vs.size(); ++k) p.cnot(vs[0], vs[k]);
  }
}

Program compiled_circuit(const KagomeTorus& torus) {
  Program p;
  const int n = torus.num_stars();
  for (int s = 0; s < n; ++s) p.alloc(ancilla_qubit(torus, s), true);
  // squared three-qubit phases: the up and down triangles of each cell share an edge
  const double q = std::numbers::pi / 4.0;
  for (int s = 0; s < n; ++s) {
    StarCoord c = torus.star_coord(s);
    int a0 = ancilla_qubit(torus, s);
    int a1 = ancilla_qubit(torus, torus.star_index(c + StarCoord{1, 0}));
    int a2 = ancilla_qubit(torus, torus.star_index(c + StarCoord{0, 1}));
    int a3 = ancilla_qubit(torus, torus.star_index(c + StarCoord{1, 1}));
    p.cnot(a2, a1);
    p.zz_phase(a0, a1, -q);
    p.zz_phase(a1, a3, q);
    p.cnot(a2, a1);
  }
  for (Color c : {Color::G, Color::B})
    for (int v : torus.vertices_of_color(c)) p.alloc(v, false);
  copy_fan(torus, p, Color::G);
  copy_fan(torus, p, Color::B);
  std::vector<int> early = torus.stars_of_color(Color::G);
  for (int s : torus.stars_of_color(Color::B)) early.push_back(s);
  std::sort(early.begin(), early.end());
  measure_ancillas(torus, p, early);
  for (int v : torus.vertices_of_color(Color::R)) p.alloc(v, false);
  for (int s : torus.stars_of_color(Color::R))
    for (int v : torus.tips(s)) p.cnot(ancilla_qubit(torus, s), v);
  measure_ancillas(torus, p, torus.stars_of_color(Color::R));
  return p;
}

}  // namespace

Program prep_circuit(const KagomeTorus& torus, PrepVariant variant) {
  return variant == PrepVariant::Naive ? naive_circuit(torus) : compiled_circuit(torus);
}

CompiledPrep compile_prep(const KagomeTorus& torus, PrepVariant variant) {
  CompiledPrep out;
  out.program = prep_circuit(torus, variant);
  out.cost = cost_report(out.program);
  return out;
}

bool FeedForwardPlan::herald() const {
  return std::any_of(leftover.begin(), leftover.end(), [](int s) { return s >= 0; });
}

namespace {
void toggle_path(std::set<int>& acc, const std::vector<int>& path) {
  for (int v : path)
    if (!acc.erase(v)) acc.insert(v);
}
}  // namespace

FeedForwardPlan plan_from_pairs(const KagomeTorus& torus,
                                const std::array<std::vector<std::pair<int, int>>, 3>& pairs) {
  FeedForwardPlan plan;
  plan.pairs = pairs;
  std::set<int> z;
  for (int c = 0; c < 3; ++c)
    for (auto [a, b] : pairs[c]) {
      if (torus.star_color(a) != static_cast<Color>(c) || torus.star_color(b) != static_cast<Color>(c))
        throw Error(ErrorCode::InvalidArgument, "paired stars must share the pairing colour");
      toggle_path(z, bond_path(torus, static_cast<Color>(c), a, b));
    }
  plan.z_vertices.assign(z.begin(), z.end());
  return plan;
}

FeedForwardPlan pair_anyons(const KagomeTorus& torus, const std::vector<int>& outcomes) {
  if (static_cast<int>(outcomes.size()) != torus.num_stars())
    throw Error(ErrorCode::DimensionMismatch, "one outcome per star expected");
  std::array<std::vector<std::pair<int, int>>, 3> pairs;
  std::array<int, 3> leftover{-1, -1, -1};
  for (Color c : {Color::R, Color::G, Color::B}) {
    std::vector<int> open;
    for (int s : torus.stars_of_color(c)) {
      if (outcomes[s] != 1 && outcomes[s] != -1)
        throw Error(ErrorCode::InvalidArgument, "ancilla outcomes must be +1 or -1");
      if (outcomes[s] == -1) open.push_back(s);
    }
    while (open.size() >= 2) {
      std::size_t best_a = 0, best_b = 1, best_len = SIZE_MAX;
      for (std::size_t a = 0; a < open.size(); ++a)
        for (std::size_t b = a + 1; b < open.size(); ++b) {
          std::size_t len = bond_path(torus, c, open[a], open[b]).size();
          if (len < best_len) {
            best_len = len;
            best_a = a;
            best_b = b;
          }
        }
      pairs[color_id(c)].emplace_back(open[best_a], open[best_b]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(best_b));
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(best_a));
    }
    if (!open.empty()) leftover[color_id(c)] = open.front();
  }
  FeedForwardPlan plan = plan_from_pairs(torus, pairs);
  plan.leftover = leftover;
  return plan;
}

Program correction_program(const FeedForwardPlan& plan) {
  Program p;
  for (int v : plan.z_vertices) p.z(v);
  return p;
}

Program static_feed_forward(const KagomeTorus& torus) {
  std::map<int, std::set<std::string>> cond;
  for (Color c : {Color::R, Color::G, Color::B}) {
    auto stars = torus.stars_of_color(c);
    const int root = stars.front();
    for (int s : stars) {
      if (s == root) continue;
      for (int v : bond_path(torus, c, s, root)) {
        auto& bits = cond[v];
        if (!bits.erase(ancilla_label(s))) bits.insert(ancilla_label(s));
      }
    }
  }
  Program p;
  for (const auto& [v, bits] : cond)
    if (!bits.empty()) p.cond_z(v, std::vector<std::string>(bits.begin(), bits.end()));
  return p;
}

Program sector_program(const KagomeTorus& torus, const SectorSpec& sector) {
  Program p;
  for (Color c : {Color::R, Color::G, Color::B})
    if (sector.sign(c, Direction::V) == -1)
      p.append(logical(torus, c, Direction::H, LogicalKind::X).program());
  for (Color c : {Color::R, Color::G, Color::B})
    if (sector.sign(c, Direction::H) == -1)
      p.append(logical(torus, c, Direction::V, LogicalKind::X).program());
  return p;
}

namespace {

std::vector<int> reported_outcomes(const KagomeTorus& torus, const ShotRecord& rec) {
  std::vector<int> out(torus.num_stars());
  for (int s = 0; s < torus.num_stars(); ++s) out[s] = rec.bit(ancilla_label(s)) ? -1 : 1;
  return out;
}

}  // namespace

Program prep_program(const KagomeTorus& torus, const PrepConfig& config) {
  Program p = prep_circuit(torus, config.variant);
  if (config.noise) {
    config.noise->validate();
    p = apply_gate_noise(p, *config.noise, config.seed);
    if (config.noise->readout_enabled) {
      NoiseModel model = *config.noise;
      const int n = torus.num_stars();
      const std::uint64_t seed = config.seed;
      p.feed_forward("readout", [model, n, seed](ShotRecord& rec) {
        for (int s = 0; s < n; ++s) {
          const std::string label = ancilla_label(s);
          const int b = rec.bit(label);
          Rng rng(seed, 0x7ead0000ULL + static_cast<std::uint64_t>(s));
          rec.set("true_" + label, b);
          rec.set(label, flip_readout(b, model, rng));
        }
        return Program{};
      });
    }
  }
  if (config.feed_forward == FeedForwardMode::Static) {
    p.append(static_feed_forward(torus));
  } else {
    auto shared = std::make_shared<const KagomeTorus>(torus);
    p.feed_forward("pair", [shared](ShotRecord& rec) {
      return correction_program(pair_anyons(*shared, reported_outcomes(*shared, rec)));
    });
  }
  p.append(sector_program(torus, config.sector));
  return p;
}

PrepResult prepare(const PrepConfig& config) {
  return prepare(KagomeTorus::build(config.lx, config.ly), config);
}

PrepResult prepare(const KagomeTorus& torus, const PrepConfig& config) {
  PrepResult out;
  out.admissible = config.sector.admissible();
  if (config.sector_method == SectorMethod::Basis) {
    out.state = basis_sector_state(torus, config.sector, config.backend, config.precision);
    out.record.seed = config.seed;
    out.outcomes.assign(torus.num_stars(), 1);
    out.plan = pair_anyons(torus, out.outcomes);
    return out;
  }
  Program program = prep_program(torus, config);
  out.cost = cost_report(prep_circuit(torus, config.variant));
  RunOptions opts;
  opts.backend = config.backend;
  opts.precision = config.precision;
  opts.register_cap = config.register_cap;
  opts.threads = config.threads;
  for (const auto& [s, bit] : config.forced) {
    torus.check_star(s);
    opts.forced[ancilla_label(s)] = bit;
  }
  RunResult run_result = run(program, config.seed, opts);
  out.state = std::move(run_result.state);
  out.record = std::move(run_result.record);
  out.outcomes = reported_outcomes(torus, out.record);
  out.plan = pair_anyons(torus, out.outcomes);
  out.herald = out.plan.herald();
  out.record.herald = out.herald;
  if (out.herald && config.error_on_herald)
    throw Error(ErrorCode::HeraldedDiscard,
                "odd number of -1 ancilla outcomes in a colour; shot discarded");
  return out;
}

std::vector<int> winding_vertices(const KagomeTorus& torus, const SectorSpec& sector) {
  std::set<int> acc;
  for (Color c : {Color::R, Color::G, Color::B}) {
    if (sector.sign(c, Direction::V) == -1)
      toggle_path(acc, logical(torus, c, Direction::H, LogicalKind::X).string->x);
    if (sector.sign(c, Direction::H) == -1)
      toggle_path(acc, logical(torus, c, Direction::V, LogicalKind::X).string->x);
  }
  return {acc.begin(), acc.end()};
}

std::unique_ptr<State> basis_sector_state(const KagomeTorus& torus, const SectorSpec& sector,
                                          Backend backend, Precision precision) {
  auto state = make_state(backend, precision);
  for (int v = 0; v < torus.num_vertices(); ++v) state->alloc(v, false);
  OperatorExpr flip;
  for (int v : winding_vertices(torus, sector)) flip.X(v);
  state->apply(flip);
  for (int s = 0; s < torus.num_stars(); ++s) {
    auto moved = state->clone();
    moved->apply(star_op(torus, s).op);
    state->axpy(1.0, *moved);
    state->scale(0.5);
  }
  if (state->norm2() < 1e-20)
    throw Error(ErrorCode::ZeroNormState,
                "sector " + sector.bits() + " has no ground state (star constraint violated)");
  state->normalize();
  return state;
}

std::unique_ptr<State> ground_state(const KagomeTorus& torus, Backend backend,
                                    Precision precision) {
  PrepConfig cfg;
  cfg.lx = torus.lx();
  cfg.ly = torus.ly();
  cfg.backend = backend;
  cfg.precision = precision;
  for (int s = 0; s < torus.num_stars(); ++s) cfg.forced[s] = 0;
  return std::move(prepare(torus, cfg).state);
}

}  // namespace d4
