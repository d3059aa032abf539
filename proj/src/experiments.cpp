#include "d4/experiments.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "d4/engine.hpp"
#include "d4/error.hpp"
#include "d4/modelops.hpp"
#include "d4/rng.hpp"

namespace d4 {

const char* mode_name(Mode m) { return m == Mode::Exact ? "exact" : "sampled"; }

Mode parse_mode(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "sampled") return Mode::Sampled;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + s + "'");
}

const char* ensemble_name(Ensemble e) { return e == Ensemble::Gaussian ? "gaussian" : "product"; }

Ensemble parse_ensemble(const std::string& s) {
  if (s == "gaussian") return Ensemble::Gaussian;
  if (s == "product") return Ensemble::Product;
  throw Error(ErrorCode::InvalidArgument, "unknown ensemble '" + s + "'");
}

namespace {

constexpr std::array<Color, 3> kColors{Color::R, Color::G, Color::B};
constexpr std::array<Direction, 2> kDirs{Direction::H, Direction::V};

int bit(std::uint64_t w, int v) { return static_cast<int>(w >> v & 1); }

Estimate mean_sem(const std::vector<double>& xs) {
  Estimate e;
  if (xs.empty()) return e;
  double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  e.value = m;
  e.stderr_ = xs.size() > 1 ? std::sqrt(v / (n - 1) / n) : 0.0;
  return e;
}

// diagonal observable in a measurement setting: (-1)^(sum of `parity` bits + sum of pairs)
struct Readout {
  std::vector<int> parity;
  std::vector<std::pair<int, int>> pairs;

  int sign(std::uint64_t w) const {
    int p = 0;
    for (int v : parity) p ^= bit(w, v);
    for (auto [a, b] : pairs) p ^= bit(w, a) & bit(w, b);
    return p ? -1 : 1;
  }
  std::vector<int> support() const {
    std::vector<int> s = parity;
    for (auto [a, b] : pairs) {
      s.push_back(a);
      s.push_back(b);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }
};

Readout star_readout(const KagomeTorus& t, int s) {
  Readout r;
  for (int v : t.tips(s)) r.parity.push_back(v);
  const auto& h = t.hexagon(s);
  for (int k = 0; k < 6; ++k) r.pairs.emplace_back(h[k], h[(k + 1) % 6]);
  return r;
}

Readout z_readout(const std::vector<int>& support) { return Readout{support, {}}; }

Readout triangle_readout(const KagomeTorus& t, int k) {
  const auto& v = t.triangle(k).vertices;
  return z_readout({v.begin(), v.end()});
}

int setting_of_star(const KagomeTorus& t, int s) { return color_id(t.star_color(s)); }
int setting_of_vertex_color(Color c) { return color_id(color_shift(c, 1)); }

Color triangle_color(const KagomeTorus& t, int k) {
  return t.triangle(k).color;
}

Estimate estimate(const std::vector<std::uint64_t>& words, const Readout& r,
                  const std::optional<NoiseModel>& noise, bool mitigate) {
  if (mitigate && noise && noise->readout_enabled) {
    auto sup = r.support();
    std::vector<std::uint32_t> patterns;
    patterns.reserve(words.size());
    for (auto w : words) {
      std::uint32_t p = 0;
      for (std::size_t k = 0; k < sup.size(); ++k) p |= static_cast<std::uint32_t>(bit(w, sup[k])) << k;
      patterns.push_back(p);
    }
    auto f = [&](std::uint32_t p) {
      std::uint64_t w = 0;
      for (std::size_t k = 0; k < sup.size(); ++k)
        if (p >> k & 1) w |= std::uint64_t{1} << sup[k];
      return static_cast<double>(r.sign(w));
    };
    auto m = mitigate_readout(patterns, static_cast<int>(sup.size()), f, *noise);
    return {m.value, m.stderr_};
  }
  std::vector<double> xs;
  xs.reserve(words.size());
  for (auto w : words) xs.push_back(r.sign(w));
  return mean_sem(xs);
}

std::vector<std::vector<int>> translate_supports(const KagomeTorus& t, Color c, Direction d) {
  std::vector<std::vector<int>> out;
  for (const auto& l : z_logical_translates(t, c, d)) out.push_back(l.z_support);
  return out;
}

std::uint64_t to_word(const Samples& s, std::size_t shot) {
  std::uint64_t w = 0;
  for (std::size_t k = 0; k < s.qubits.size(); ++k)
    if (s.shots[shot] >> k & 1) {
      if (s.qubits[k] >= 64) throw Error(ErrorCode::SupportTooLarge, "vertex id beyond 63");
      w |= std::uint64_t{1} << s.qubits[k];
    }
  return w;
}

std::uint64_t flip_word(std::uint64_t w, int n, const NoiseModel& model, Rng& rng) {
  for (int v = 0; v < n; ++v)
    if (flip_readout(bit(w, v), model, rng) != bit(w, v)) w ^= std::uint64_t{1} << v;
  return w;
}

void add_derived(ExperimentReport& rep, const KagomeTorus& t) {
  SectorSpec target = rep.sector.value_or(SectorSpec{});
  double n_terms = 3.0 * t.num_stars();
  double e = 0.0, e2 = 0.0;
  for (const auto& s : rep.stars) e += s.value, e2 += s.stderr_ * s.stderr_;
  for (const auto& s : rep.triangles) e += s.value, e2 += s.stderr_ * s.stderr_;
  rep.scalars["energy_density"] = {-e / n_terms, std::sqrt(e2) / n_terms};
  double p = 0.0, p2 = 0.0;
  for (int k = 0; k < 6; ++k) {
    p += target.z[k] * rep.logicals[k].value;
    p2 += rep.logicals[k].stderr_ * rep.logicals[k].stderr_;
  }
  rep.scalars["pinning"] = {p / 6.0, std::sqrt(p2) / 6.0};
}

void add_bounds(ExperimentReport& rep, const ProjectorValues& pv, int n_sites) {
  rep.scalars["projector_R"] = pv.r;
  rep.scalars["projector_G"] = pv.g;
  rep.scalars["projector_B"] = pv.b;
  auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
  auto fb = fidelity_bounds(clamp01(pv.r.value), clamp01(pv.g.value), clamp01(pv.b.value), n_sites);
  double err = std::sqrt(pv.r.stderr_ * pv.r.stderr_ + pv.g.stderr_ * pv.g.stderr_ +
                         pv.b.stderr_ * pv.b.stderr_);
  rep.scalars["fidelity_lower"] = {fb.lower, err};
  rep.scalars["fidelity_upper"] = {fb.upper, 0.0};
  rep.scalars["fidelity_per_site_lower"] = {fb.per_site_lower, 0.0};
}

// energy and pinning errors from per-shot sums within each setting
void refine_errors(ExperimentReport& rep, const KagomeTorus& t,
                   const std::array<std::vector<std::uint64_t>, 3>& words) {
  SectorSpec target = rep.sector.value_or(SectorSpec{});
  double e_var = 0.0, p_var = 0.0;
  for (int c = 0; c < 3; ++c) {
    std::vector<Readout> energy;
    for (int s = 0; s < t.num_stars(); ++s)
      if (setting_of_star(t, s) == c) energy.push_back(star_readout(t, s));
    for (int k = 0; k < t.num_triangles(); ++k)
      if (setting_of_vertex_color(triangle_color(t, k)) == c) energy.push_back(triangle_readout(t, k));
    std::vector<std::pair<int, std::vector<std::vector<int>>>> logic;
    for (Color col : kColors)
      if (setting_of_vertex_color(col) == c)
        for (Direction d : kDirs)
          logic.emplace_back(target.sign(col, d), translate_supports(t, col, d));
    std::vector<double> es, ps;
    for (auto w : words[c]) {
      double e = 0.0, p = 0.0;
      for (const auto& r : energy) e += r.sign(w);
      for (const auto& [sgn, sups] : logic) {
        double z = 0.0;
        for (const auto& sup : sups) z += z_readout(sup).sign(w);
        p += sgn * z / static_cast<double>(sups.size());
      }
      es.push_back(e);
      ps.push_back(p);
    }
    double se = mean_sem(es).stderr_, sp = mean_sem(ps).stderr_;
    e_var += se * se;
    p_var += sp * sp;
  }
  rep.scalars["energy_density"].stderr_ = std::sqrt(e_var) / (3.0 * t.num_stars());
  rep.scalars["pinning"].stderr_ = std::sqrt(p_var) / 6.0;
}

ExperimentReport report_from_words(const KagomeTorus& t,
                                   const std::array<std::vector<std::uint64_t>, 3>& words,
                                   const std::optional<SectorSpec>& target,
                                   const SamplingOptions& opts) {
  ExperimentReport rep;
  rep.lx = t.lx();
  rep.ly = t.ly();
  rep.mode = Mode::Sampled;
  rep.sector = target;
  rep.seed = opts.seed;
  rep.noise = opts.noise;
  rep.shots = opts.shots;
  for (int s = 0; s < t.num_stars(); ++s)
    rep.stars.push_back(estimate(words[setting_of_star(t, s)], star_readout(t, s), opts.noise,
                                 opts.mitigate));
  for (int k = 0; k < t.num_triangles(); ++k)
    rep.triangles.push_back(estimate(words[setting_of_vertex_color(triangle_color(t, k))],
                                     triangle_readout(t, k), opts.noise, opts.mitigate));
  for (Color c : kColors)
    for (Direction d : kDirs) {
      const auto& ws = words[setting_of_vertex_color(c)];
      auto sups = translate_supports(t, c, d);
      std::vector<double> xs;
      for (auto w : ws) {
        double z = 0.0;
        for (const auto& sup : sups) z += z_readout(sup).sign(w);
        xs.push_back(z / static_cast<double>(sups.size()));
      }
      Estimate e = mean_sem(xs);
      if (opts.mitigate && opts.noise && opts.noise->readout_enabled) {
        e.value = 0.0;
        for (const auto& sup : sups) e.value += estimate(ws, z_readout(sup), opts.noise, true).value;
        e.value /= static_cast<double>(sups.size());
      }
      rep.logicals[SectorSpec::slot(c, d)] = e;
    }
  add_derived(rep, t);
  if (!opts.mitigate) refine_errors(rep, t, words);
  add_bounds(rep, projector_expectations(t, words), t.num_vertices());
  return rep;
}

std::unique_ptr<State> run_on(const State& state, const Program& program) {
  auto out = state.clone();
  ShotRecord rec;
  Rng rng(0);
  RunOptions opts;
  opts.register_cap = 64;
  opts.check_norm = false;
  Executor ex(*out, rec, rng, opts);
  ex.execute(program);
  return out;
}

void project_plus(State& state, const OperatorExpr& op) {
  auto moved = state.clone();
  moved->apply(op);
  state.axpy(1.0, *moved);
  state.scale(0.5);
}

struct ProjectorTerms {
  std::array<std::vector<Readout>, 3> readouts;
  std::array<std::vector<OperatorExpr>, 3> ops;
};

ProjectorTerms projector_terms(const KagomeTorus& t, ProjectorChoice choice) {
  ProjectorTerms out;
  std::array<int, 3> omit_tri{};
  for (Color c : kColors) {
    auto tris = t.triangles_of_color(c);
    omit_tri[color_id(c)] = choice == ProjectorChoice::Lowest ? tris.front() : tris.back();
  }
  for (Color c : kColors) {
    int ci = color_id(c);
    auto stars = t.stars_of_color(c);
    int omit_star = choice == ProjectorChoice::Lowest ? stars.front() : stars.back();
    for (int s : stars) {
      if (s != omit_star) {
        out.readouts[ci].push_back(star_readout(t, s));
        out.ops[ci].push_back(star_op(t, s).op);
      }
      for (Orientation o : {Orientation::Right, Orientation::Left}) {
        int k = t.triangle_index(s, o);
        if (k == omit_tri[color_id(triangle_color(t, k))]) continue;
        out.readouts[ci].push_back(triangle_readout(t, k));
        out.ops[ci].push_back(triangle_op(t, k).op);
      }
    }
    Color lc = color_shift(c, 1);
    for (Direction d : kDirs) {
      auto l = logical(t, lc, d, LogicalKind::Z);
      out.readouts[ci].push_back(z_readout(l.z_support));
      out.ops[ci].push_back(l.op);
    }
  }
  return out;
}

}  // namespace

Setting color_setting(const KagomeTorus& torus, Color c) {
  Setting s;
  for (int v : torus.vertices_of_color(c)) s[v] = 'X';
  return s;
}

ExperimentReport exact_report(const KagomeTorus& torus, const State& state,
                              const std::optional<SectorSpec>& target) {
  ExperimentReport rep;
  rep.lx = torus.lx();
  rep.ly = torus.ly();
  rep.mode = Mode::Exact;
  rep.sector = target;
  for (int s = 0; s < torus.num_stars(); ++s)
    rep.stars.push_back({expval_real(state, star_op(torus, s).op), 0.0});
  for (int k = 0; k < torus.num_triangles(); ++k)
    rep.triangles.push_back({expval_real(state, triangle_op(torus, k).op), 0.0});
  for (Color c : kColors)
    for (Direction d : kDirs) {
      auto ts = z_logical_translates(torus, c, d);
      double z = 0.0;
      for (const auto& l : ts) z += expval_real(state, l.op);
      rep.logicals[SectorSpec::slot(c, d)] = {z / static_cast<double>(ts.size()), 0.0};
    }
  add_derived(rep, torus);
  add_bounds(rep, projector_expectations(torus, state), torus.num_vertices());
  return rep;
}

ExperimentReport sampled_report(const KagomeTorus& torus, const State& state,
                                const std::optional<SectorSpec>& target,
                                const SamplingOptions& opts) {
  if (opts.shots < 2) throw Error(ErrorCode::InvalidArgument, "sampled mode needs at least 2 shots");
  std::array<std::vector<std::uint64_t>, 3> words;
  for (Color c : kColors) {
    int ci = color_id(c);
    auto smp = sample(state, color_setting(torus, c), opts.shots, mix64(opts.seed + 0x5e77 * (ci + 1)));
    for (int k = 0; k < opts.shots; ++k) {
      std::uint64_t w = to_word(smp, k);
      if (opts.noise && opts.noise->readout_enabled) {
        Rng rng(opts.seed, 0x7ead0000ull + (static_cast<std::uint64_t>(ci) << 24) + k);
        w = flip_word(w, torus.num_vertices(), *opts.noise, rng);
      }
      words[ci].push_back(w);
    }
  }
  return report_from_words(torus, words, target, opts);
}

ExperimentReport noisy_prep_report(const KagomeTorus& torus, const PrepConfig& config,
                                   const SamplingOptions& opts) {
  if (opts.shots < 2) throw Error(ErrorCode::InvalidArgument, "sampled mode needs at least 2 shots");
  std::optional<NoiseModel> noise = opts.noise ? opts.noise : config.noise;
  std::array<std::vector<std::uint64_t>, 3> words;
  int discarded = 0;
  for (Color c : kColors) {
    int ci = color_id(c);
    for (int k = 0; k < opts.shots; ++k) {
      PrepConfig cfg = config;
      cfg.noise = noise;
      cfg.error_on_herald = false;
      cfg.seed = mix64(opts.seed ^ mix64((static_cast<std::uint64_t>(ci) << 32) + k));
      auto r = prepare(torus, cfg);
      if (r.herald) {
        ++discarded;
        continue;
      }
      auto smp = sample(*r.state, color_setting(torus, c), 1, cfg.seed);
      std::uint64_t w = to_word(smp, 0);
      if (noise && noise->readout_enabled) {
        Rng rng(cfg.seed, 0x7ead);
        w = flip_word(w, torus.num_vertices(), *noise, rng);
      }
      words[ci].push_back(w);
    }
  }
  SamplingOptions o = opts;
  o.noise = noise;
  auto rep = report_from_words(torus, words, config.sector, o);
  rep.discarded = discarded;
  rep.scalars["discard_rate"] = {discarded / (3.0 * opts.shots), 0.0};
  return rep;
}

ProjectorValues projector_expectations(const KagomeTorus& torus, const State& state,
                                       ProjectorChoice choice) {
  auto terms = projector_terms(torus, choice);
  std::array<Estimate, 3> v;
  double n0 = state.norm2();
  for (int c = 0; c < 3; ++c) {
    auto s = state.clone();
    for (const auto& op : terms.ops[c]) project_plus(*s, op);
    v[c] = {std::clamp(s->norm2() / n0, 0.0, 1.0), 0.0};
  }
  return {v[0], v[1], v[2]};
}

ProjectorValues projector_expectations(const KagomeTorus& torus,
                                       const std::array<std::vector<std::uint64_t>, 3>& words,
                                       ProjectorChoice choice) {
  auto terms = projector_terms(torus, choice);
  std::array<Estimate, 3> v;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> xs;
    for (auto w : words[c]) {
      bool all = true;
      for (const auto& r : terms.readouts[c])
        if (r.sign(w) != 1) {
          all = false;
          break;
        }
      xs.push_back(all ? 1.0 : 0.0);
    }
    v[c] = mean_sem(xs);
  }
  return {v[0], v[1], v[2]};
}

FidelityBounds fidelity_bounds(double r, double g, double b, int n_sites) {
  for (double x : {r, g, b})
    if (!(x >= 0.0 && x <= 1.0))
      throw Error(ErrorCode::OutOfRange, "projector expectations must lie in [0, 1]");
  if (n_sites < 1) throw Error(ErrorCode::OutOfRange, "n_sites must be positive");
  FidelityBounds f;
  f.lower = std::max(0.0, r + g + b - 2.0);
  f.upper = std::min({r, g, b});
  f.per_site_lower = std::pow(f.lower, 1.0 / n_sites);
  f.per_site_upper = std::pow(f.upper, 1.0 / n_sites);
  return f;
}

// ---- constraint ----

namespace {

SectorSpec logical_pattern(const KagomeTorus& t, std::uint64_t x,
                           const std::array<std::vector<int>, 6>& z_support) {
  SectorSpec sec;
  for (int k = 0; k < 6; ++k) {
    int p = 0;
    for (int v : z_support[k]) p ^= bit(x, v);
    sec.z[k] = p ? -1 : 1;
  }
  return sec;
}

std::array<std::vector<int>, 6> canonical_z_supports(const KagomeTorus& t) {
  std::array<std::vector<int>, 6> out;
  for (Color c : kColors)
    for (Direction d : kDirs)
      out[SectorSpec::slot(c, d)] = logical(t, c, d, LogicalKind::Z).z_support;
  return out;
}

int negative_cz(const KagomeTorus& t, Color c, std::uint64_t x) {
  int n = 0;
  for (int s : t.stars_of_color(c)) {
    const auto& h = t.hexagon(s);
    for (int k = 0; k < 6; ++k) n += bit(x, h[k]) & bit(x, h[(k + 1) % 6]);
  }
  return n;
}

struct ColorProducts {
  std::array<std::vector<OperatorExpr>, 3> stars;
};

// returns the number of failed colour checks for basis state x
int check_state(const KagomeTorus& t, const ColorProducts& prods,
                const std::array<std::vector<int>, 6>& zs, std::uint64_t x) {
  SectorSpec sec = logical_pattern(t, x, zs);
  int bad = 0;
  for (Color c : kColors) {
    cplx phase = 1.0;
    std::uint64_t y = x;
    for (const auto& op : prods.stars[color_id(c)]) {
      auto [p, z] = act_on_basis(op, y);
      phase *= p;
      y = z;
    }
    int rhs = sec.star_product(c);
    int cz_sign = negative_cz(t, c, x) % 2 ? -1 : 1;
    if (y != x || std::abs(phase - cplx(rhs)) > 1e-12 || cz_sign != rhs) ++bad;
  }
  return bad;
}

}  // namespace

ConstraintExample crossing_example(const KagomeTorus& torus) {
  auto basis = b_plus_basis(torus);
  auto zs = canonical_z_supports(torus);
  std::uint64_t red = 0;
  for (int v : torus.vertices_of_color(Color::R)) red |= std::uint64_t{1} << v;
  SectorSpec want;
  want.set(Color::B, Direction::V, -1);
  want.set(Color::G, Direction::H, -1);
  std::optional<std::uint64_t> best;
  for (auto x : basis) {
    if (x & red) continue;
    if (!(logical_pattern(torus, x, zs) == want)) continue;
    auto key = [&](std::uint64_t y) {
      return std::pair{std::popcount(y), negative_cz(torus, Color::R, y)};
    };
    if (!best || key(x) < key(*best)) best = x;
  }
  if (!best) throw Error(ErrorCode::Internal, "no crossing basis state on this torus");
  ConstraintExample ex;
  ex.x = *best;
  for (int v = 0; v < torus.num_vertices(); ++v)
    if (bit(ex.x, v)) ex.ones.push_back(v);
  ex.negative_cz = negative_cz(torus, Color::R, ex.x);
  cplx phase = 1.0;
  std::uint64_t y = ex.x;
  for (int s : torus.stars_of_color(Color::R)) {
    auto [p, z] = act_on_basis(star_op(torus, s).op, y);
    phase *= p;
    y = z;
  }
  if (y != ex.x) throw Error(ErrorCode::ConstraintViolation, "red star product is not diagonal");
  ex.lhs = phase.real() < 0 ? -1 : 1;
  ex.rhs = want.star_product(Color::R);
  return ex;
}

ExperimentReport constraint_check(const KagomeTorus& torus, ConstraintMode mode, int samples,
                                  std::uint64_t seed) {
  ColorProducts prods;
  for (int s = 0; s < torus.num_stars(); ++s)
    prods.stars[color_id(torus.star_color(s))].push_back(star_op(torus, s).op);
  auto zs = canonical_z_supports(torus);
  auto gens = b_plus_generators(torus);
  std::size_t checked = 0;
  int violations = 0;
  if (mode == ConstraintMode::Exhaustive) {
    for (auto x : b_plus_basis(torus)) {
      violations += check_state(torus, prods, zs, x);
      ++checked;
    }
  } else {
    for (int k = 0; k < samples; ++k) {
      Rng rng(seed, static_cast<std::uint64_t>(k));
      std::uint64_t x = 0;
      for (auto g : gens)
        if (rng() >> 63) x ^= g;
      violations += check_state(torus, prods, zs, x);
      ++checked;
    }
  }
  if (violations > 0)
    throw Error(ErrorCode::ConstraintViolation,
                std::to_string(violations) + " colour checks failed the star/logical identity");
  ExperimentReport rep;
  rep.experiment = "constraint";
  rep.lx = torus.lx();
  rep.ly = torus.ly();
  rep.seed = mode == ConstraintMode::Randomized ? seed : 0;
  rep.scalars["subspace_generators"] = {static_cast<double>(gens.size()), 0.0};
  rep.scalars["states_checked"] = {static_cast<double>(checked), 0.0};
  rep.scalars["violations"] = {0.0, 0.0};
  rep.scalars["exhaustive"] = {mode == ConstraintMode::Exhaustive ? 1.0 : 0.0, 0.0};
  if (gens.size() <= 26) {
    auto ex = crossing_example(torus);
    rep.scalars["example_negative_cz"] = {static_cast<double>(ex.negative_cz), 0.0};
    rep.scalars["example_lhs"] = {static_cast<double>(ex.lhs), 0.0};
    rep.scalars["example_rhs"] = {static_cast<double>(ex.rhs), 0.0};
    rep.series["example_ones"] = {ex.ones.begin(), ex.ones.end()};
  }
  return rep;
}

std::vector<SectorSpec> enumerate_sectors() {
  std::vector<SectorSpec> out;
  for (int m = 0; m < 64; ++m) out.push_back(SectorSpec::from_index(m));
  return out;
}

std::vector<ExperimentReport> all_ground_states(const KagomeTorus& torus, Mode mode,
                                                const SamplingOptions& opts) {
  std::vector<ExperimentReport> out;
  for (const auto& sec : enumerate_sectors()) {
    if (!sec.admissible()) continue;
    PrepConfig cfg;
    cfg.lx = torus.lx();
    cfg.ly = torus.ly();
    cfg.sector = sec;
    ExperimentReport rep;
    if (mode == Mode::Sampled && opts.noise && opts.noise->any()) {
      rep = noisy_prep_report(torus, cfg, opts);
    } else {
      for (int s = 0; s < torus.num_stars(); ++s) cfg.forced[s] = 0;
      auto state = std::move(prepare(torus, cfg).state);
      rep = mode == Mode::Exact ? exact_report(torus, *state, sec)
                                : sampled_report(torus, *state, sec, opts);
    }
    rep.experiment = "ground_state";
    out.push_back(std::move(rep));
  }
  return out;
}

std::unique_ptr<State> apply_logical_x(const KagomeTorus& torus, const State& state,
                                       const std::vector<std::pair<Color, Direction>>& loops) {
  Program p;
  for (auto [c, d] : loops) p.append(logical(torus, c, d, LogicalKind::X).program());
  return run_on(state, p);
}

ExperimentReport single_anyon(const KagomeTorus& torus, Mode mode, const SamplingOptions& opts) {
  SectorSpec sec;
  sec.set(Color::G, Direction::H, -1);
  sec.set(Color::R, Direction::V, -1);
  ExperimentReport rep;
  if (mode == Mode::Sampled && opts.noise && opts.noise->any()) {
    PrepConfig cfg;
    cfg.lx = torus.lx();
    cfg.ly = torus.ly();
    cfg.sector = sec;
    rep = noisy_prep_report(torus, cfg, opts);
  } else {
    auto psi0 = ground_state(torus);
    auto state = apply_logical_x(torus, *psi0, {{Color::R, Direction::H}, {Color::G, Direction::V}});
    rep = mode == Mode::Exact ? exact_report(torus, *state, sec)
                              : sampled_report(torus, *state, sec, opts);
  }
  rep.experiment = "single_anyon";
  int neg = 0;
  std::vector<double> where;
  for (int s = 0; s < torus.num_stars(); ++s)
    if (rep.stars[s].value < 0.0) {
      ++neg;
      where.push_back(s);
    }
  rep.scalars["negative_stars"] = {static_cast<double>(neg), 0.0};
  rep.series["negative_star_indices"] = where;
  if (neg == 1)
    rep.scalars["anyon_color"] = {static_cast<double>(color_id(torus.star_color(int(where[0])))), 0.0};
  return rep;
}

double chi_square_p_value(double chi2, int dof) {
  if (dof < 1) throw Error(ErrorCode::InvalidArgument, "chi-square needs dof >= 1");
  return boost::math::gamma_q(dof / 2.0, chi2 / 2.0);
}

ExperimentReport degeneracy_scan(const KagomeTorus& torus, int trials, std::uint64_t seed,
                                 Ensemble ensemble) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  auto basis = b_plus_basis(torus);
  const std::size_t n = basis.size();
  auto index_of = [&](std::uint64_t x) {
    return static_cast<std::size_t>(std::lower_bound(basis.begin(), basis.end(), x) - basis.begin());
  };
  struct StarMap {
    std::vector<std::size_t> to;
    std::vector<cplx> phase;
  };
  std::vector<StarMap> maps(torus.num_stars());
  for (int s = 0; s < torus.num_stars(); ++s) {
    auto op = star_op(torus, s).op;
    maps[s].to.resize(n);
    maps[s].phase.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto [p, y] = act_on_basis(op, basis[i]);
      std::size_t j = index_of(y);
      if (j == n || basis[j] != y) throw Error(ErrorCode::Internal, "star left the B_t=+1 subspace");
      maps[s].to[i] = j;
      maps[s].phase[i] = p;
    }
  }
  auto zs = canonical_z_supports(torus);
  std::vector<int> pattern(n);
  for (std::size_t i = 0; i < n; ++i) pattern[i] = logical_pattern(torus, basis[i], zs).index();
  std::array<bool, 64> allowed{};
  for (int m = 0; m < 64; ++m) allowed[m] = SectorSpec::from_index(m).admissible();

  std::vector<double> counts(64, 0.0);
  double forbidden_mass = 0.0;
  int retries = 0;
  std::vector<cplx> a(n), b(n);
  for (int trial = 0; trial < trials; ++trial) {
    for (int attempt = 0;; ++attempt) {
      Rng rng(seed, static_cast<std::uint64_t>(trial) + (static_cast<std::uint64_t>(attempt) << 32));
      if (ensemble == Ensemble::Gaussian) {
        for (auto& z : a) {
          double re = rng.normal();
          z = {re, rng.normal()};
        }
      } else {
        std::vector<cplx> q0(torus.num_vertices()), q1(torus.num_vertices());
        for (int v = 0; v < torus.num_vertices(); ++v) {
          double ct = 2.0 * rng.uniform() - 1.0;
          double phi = 2.0 * std::numbers::pi * rng.uniform();
          q0[v] = std::sqrt((1.0 + ct) / 2.0);
          q1[v] = std::polar(std::sqrt((1.0 - ct) / 2.0), phi);
        }
        for (std::size_t i = 0; i < n; ++i) {
          cplx z = 1.0;
          for (int v = 0; v < torus.num_vertices(); ++v) z *= bit(basis[i], v) ? q1[v] : q0[v];
          a[i] = z;
        }
      }
      for (const auto& m : maps) {
        std::fill(b.begin(), b.end(), cplx{});
        for (std::size_t i = 0; i < n; ++i) b[m.to[i]] += m.phase[i] * a[i];
        for (std::size_t i = 0; i < n; ++i) a[i] = 0.5 * (a[i] + b[i]);
      }
      std::array<double, 64> p{};
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        p[pattern[i]] += std::norm(a[i]);
        norm += std::norm(a[i]);
      }
      if (norm < 1e-24) {
        ++retries;
        if (attempt > 100) throw Error(ErrorCode::ZeroNormState, "projection keeps annihilating trials");
        continue;
      }
      for (int m = 0; m < 64; ++m)
        if (!allowed[m]) forbidden_mass += p[m] / norm;
      double u = rng.uniform() * norm, acc = 0.0;
      int pick = 63;
      for (int m = 0; m < 64; ++m) {
        acc += p[m];
        if (u < acc) {
          pick = m;
          break;
        }
      }
      counts[pick] += 1.0;
      break;
    }
  }
  double in_allowed = 0.0, forbidden_counts = 0.0;
  for (int m = 0; m < 64; ++m) (allowed[m] ? in_allowed : forbidden_counts) += counts[m];
  double expected = in_allowed / 22.0, chi2 = 0.0;
  for (int m = 0; m < 64; ++m)
    if (allowed[m]) chi2 += (counts[m] - expected) * (counts[m] - expected) / expected;

  ExperimentReport rep;
  rep.experiment = "degeneracy_scan";
  rep.lx = torus.lx();
  rep.ly = torus.ly();
  rep.mode = Mode::Exact;
  rep.seed = seed;
  rep.shots = trials;
  rep.series["counts"] = counts;
  rep.scalars["trials"] = {static_cast<double>(trials), 0.0};
  rep.scalars["retries"] = {static_cast<double>(retries), 0.0};
  rep.scalars["forbidden_counts"] = {forbidden_counts, 0.0};
  rep.scalars["forbidden_mass"] = {forbidden_mass / trials, 0.0};
  rep.scalars["chi2"] = {chi2, 0.0};
  rep.scalars["p_value"] = {chi_square_p_value(chi2, 21), 0.0};
  rep.scalars["ensemble_gaussian"] = {ensemble == Ensemble::Gaussian ? 1.0 : 0.0, 0.0};
  return rep;
}

}  // namespace d4
