#include "d4/modelops.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>

#include "d4/error.hpp"
#include "d4/rng.hpp"

namespace d4 {

StabilizerExpr star_op(const KagomeTorus& torus, int s) {
  torus.check_star(s);
  StabilizerExpr e;
  e.kind = StabilizerExpr::Kind::Star;
  e.index = s;
  const auto& h = torus.hexagon(s);
  for (int k = 0; k < 6; ++k) e.op.CZ(h[k], h[(k + 1) % 6]);
  for (int v : torus.tips(s)) e.op.X(v);
  e.support = e.op.support();
  return e;
}

StabilizerExpr triangle_op(const KagomeTorus& torus, int t) {
  torus.check_triangle(t);
  StabilizerExpr e;
  e.kind = StabilizerExpr::Kind::Triangle;
  e.index = t;
  for (int v : torus.triangle(t).vertices) e.op.Z(v);
  e.support = e.op.support();
  return e;
}

Program to_program(const OperatorExpr& op) {
  Program p;
  for (auto [a, b] : op.cz) {
    if (a == b)
      p.z(a);
    else
      p.cz(a, b);
  }
  for (int q : op.z) p.z(q);
  for (int q : op.x) p.x(q);
  return p;
}

ColorOrder natural_order(const Path& path) {
  for (Color c : path.vertex_colors)
    if (c != path.color)
      return {c, color_shift(Color::R, 3 - color_id(c) - color_id(path.color))};
  return {color_shift(path.color, 1), color_shift(path.color, 2)};
}

ColorOrder reversed(ColorOrder o) { return {o.later, o.earlier}; }

OperatorExpr StringOperator::expr() const {
  OperatorExpr e;
  for (auto [a, b] : cz) e.CZ(a, b);
  for (int v : x) e.X(v);
  return e;
}

Program StringOperator::program() const { return to_program(expr()); }

StringOperator decorated_string(const KagomeTorus& torus, const Path& path,
                                std::optional<ColorOrder> order) {
  (void)torus;
  StringOperator s;
  s.color = path.color;
  s.path = path;
  s.order = order ? *order : natural_order(path);
  if (s.order.earlier == s.order.later || s.order.earlier == path.color ||
      s.order.later == path.color)
    throw Error(ErrorCode::InvalidArgument, "colour order must name the two other colours");
  for (std::size_t j = 0; j < path.vertices.size(); ++j) {
    if (path.vertex_colors[j] == path.color) s.x.push_back(path.vertices[j]);
    if (path.vertex_colors[j] != s.order.later) continue;
    for (std::size_t i = 0; i < j; ++i)
      if (path.vertex_colors[i] == s.order.earlier)
        s.cz.emplace_back(path.vertices[i], path.vertices[j]);
  }
  return s;
}

Program LogicalExpr::program() const {
  if (kind == LogicalKind::X) return string->program();
  return to_program(op);
}

StarCoord x_loop_basepoint(const KagomeTorus& torus, Color c, Direction d) {
  if (d == Direction::V) {
    int j = ((-(color_id(c) + 1)) % 3 + 3) % 3;
    return {0, j};
  }
  for (int s = 0; s < torus.num_stars(); ++s)
    if (torus.star_color(s) != c) return torus.star_coord(s);
  throw Error(ErrorCode::Internal, "torus has no star of another colour");
}

LogicalExpr z_logical_at(const KagomeTorus& torus, Color c, Direction d, StarCoord start) {
  LogicalExpr e;
  e.color = c;
  e.direction = d;
  e.kind = LogicalKind::Z;
  e.basepoint = start;
  e.z_support = bond_loop(torus, c, d, start);
  for (int v : e.z_support) e.op.Z(v);
  return e;
}

LogicalExpr logical(const KagomeTorus& torus, Color c, Direction d, LogicalKind kind) {
  if (kind == LogicalKind::Z) {
    int s0 = torus.stars_of_color(c).front();
    return z_logical_at(torus, c, d, torus.star_coord(s0));
  }
  LogicalExpr e;
  e.color = c;
  e.direction = d;
  e.kind = LogicalKind::X;
  e.basepoint = x_loop_basepoint(torus, c, d);
  Path p = loop_path(torus, c, d, e.basepoint);
  e.string = decorated_string(torus, p);
  e.op = e.string->expr();
  return e;
}

std::vector<LogicalExpr> z_logical_translates(const KagomeTorus& torus, Color c, Direction d) {
  std::vector<LogicalExpr> out;
  std::set<std::vector<int>> seen;
  for (int s : torus.stars_of_color(c)) {
    LogicalExpr e = z_logical_at(torus, c, d, torus.star_coord(s));
    std::vector<int> key = e.op.z;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) out.push_back(std::move(e));
  }
  return out;
}

AnyonString anyon_string(const KagomeTorus& torus, Color c, int t_i, int t_f,
                         std::optional<ColorOrder> order) {
  torus.check_triangle(t_i);
  torus.check_triangle(t_f);
  const Triangle& a = torus.triangle(t_i);
  const Triangle& b = torus.triangle(t_f);
  if (a.color != c || b.color != c)
    throw Error(ErrorCode::BadEndpoints, "endpoint triangles must have the string colour");
  if (a.orientation == b.orientation)
    throw Error(ErrorCode::BadEndpoints,
                "endpoint triangles must point in opposite directions (one left, one right)");
  AnyonString s;
  s.color = c;
  s.t_i = t_i;
  s.t_f = t_f;
  s.op = decorated_string(torus, string_path(torus, c, t_i, t_f), order);
  return s;
}

Program anyon_string_program(const KagomeTorus& torus, Color c, int t_i, int t_f,
                             std::optional<ColorOrder> order) {
  return anyon_string(torus, c, t_i, t_f, order).op.program();
}

// ---------------------------------------------------------------------------------------

namespace {

struct Tracked {
  Color color;
  std::vector<StarCoord> stars;
};

Program string_program(const KagomeTorus& torus, Color c, const std::vector<StarCoord>& stars) {
  return decorated_string(torus, star_walk(torus, c, stars, false)).program();
}

void require_odd(const KagomeTorus& torus, const std::vector<StarCoord>& stars,
                 const std::string& name) {
  (void)torus;
  if ((stars.size() - 1) % 2 == 0)
    throw Error(ErrorCode::BadEndpoints,
                "string '" + name +
                    "' would end on two triangles of the same orientation (even star path length)");
}

// translate `ext` so that it starts at `at`, given they are the same star on the torus
std::vector<StarCoord> anchor(const KagomeTorus& torus, std::vector<StarCoord> ext, StarCoord at,
                              const std::string& name) {
  if (ext.empty() || torus.star_index(ext.front()) != torus.star_index(at))
    throw Error(ErrorCode::DanglingAnyon,
                "step for '" + name + "' does not start at the current string endpoint");
  StarCoord shift = at - ext.front();
  for (auto& p : ext) p = p + shift;
  return ext;
}

}  // namespace

BraidProgram braid_sequence(const KagomeTorus& torus, const BraidSpec& spec) {
  BraidProgram out;
  std::map<std::string, Tracked> live;
  for (const BraidStep& step : spec.steps) {
    switch (step.kind) {
      case BraidStep::Kind::Checkpoint:
        out.program.barrier("checkpoint:" + step.name);
        out.checkpoints.push_back(step.name);
        break;
      case BraidStep::Kind::Create: {
        if (live.count(step.name))
          throw Error(ErrorCode::InvalidArgument, "string '" + step.name + "' already exists");
        if (step.stars.size() < 2)
          throw Error(ErrorCode::BadEndpoints, "a new pair needs at least two stars");
        require_odd(torus, step.stars, step.name);
        out.program.append(string_program(torus, step.color, step.stars));
        live[step.name] = {step.color, step.stars};
        break;
      }
      case BraidStep::Kind::Move: {
        auto it = live.find(step.name);
        if (it == live.end())
          throw Error(ErrorCode::InvalidArgument, "unknown string '" + step.name + "'");
        Tracked& t = it->second;
        std::vector<StarCoord> path = t.stars;
        if (step.at_tail) std::reverse(path.begin(), path.end());
        auto ext = anchor(torus, step.stars, path.back(), step.name);
        std::vector<StarCoord> next = path;
        next.insert(next.end(), ext.begin() + 1, ext.end());
        if (step.at_tail) std::reverse(next.begin(), next.end());
        require_odd(torus, next, step.name);
        out.program.append(string_program(torus, t.color, t.stars));
        out.program.append(string_program(torus, t.color, next));
        t.stars = next;
        break;
      }
      case BraidStep::Kind::Annihilate: {
        auto it = live.find(step.name);
        if (it == live.end())
          throw Error(ErrorCode::InvalidArgument, "unknown string '" + step.name + "'");
        Tracked& t = it->second;
        if (step.stars.empty()) {
          out.program.append(string_program(torus, t.color, t.stars));
        } else {
          auto ext = anchor(torus, step.stars, t.stars.back(), step.name);
          if (torus.star_index(ext.back()) != torus.star_index(t.stars.front()))
            throw Error(ErrorCode::DanglingAnyon,
                        "annihilation of '" + step.name + "' does not return to the other end");
          std::vector<StarCoord> next = t.stars;
          next.insert(next.end(), ext.begin() + 1, ext.end());
          out.program.append(string_program(torus, t.color, t.stars));
          out.program.append(string_program(torus, t.color, next));
        }
        live.erase(it);
        break;
      }
      case BraidStep::Kind::Fuse: {
        auto it = live.find(step.name);
        if (it == live.end())
          throw Error(ErrorCode::InvalidArgument, "unknown string '" + step.name + "'");
        Tracked& t = it->second;
        if (step.stars.size() < 2 ||
            torus.star_index(step.stars.front()) != torus.star_index(t.stars.front()) ||
            torus.star_index(step.stars.back()) != torus.star_index(t.stars.back()))
          throw Error(ErrorCode::DanglingAnyon,
                      "fusion path of '" + step.name + "' does not join the two ends");
        out.program.append(string_program(torus, t.color, step.stars));
        live.erase(it);
        break;
      }
    }
  }
  for (const auto& [name, t] : live)
    out.open_strings[name] = star_walk(torus, t.color, t.stars, false);
  return out;
}

StabilizerSnapshot stabilizer_snapshot(const KagomeTorus& torus, const State& state) {
  StabilizerSnapshot snap;
  for (int s = 0; s < torus.num_stars(); ++s)
    snap.stars.push_back(expval_real(state, star_op(torus, s).op));
  for (int t = 0; t < torus.num_triangles(); ++t)
    snap.triangles.push_back(expval_real(state, triangle_op(torus, t).op));
  return snap;
}

BraidRun run_braid(const KagomeTorus& torus, const State& psi0, const BraidSpec& spec) {
  BraidProgram bp = braid_sequence(torus, spec);
  BraidRun out;
  out.state = psi0.clone();
  ShotRecord rec;
  Rng rng(0);
  RunOptions opts;
  opts.register_cap = 64;
  opts.check_norm = false;
  Executor ex(*out.state, rec, rng, opts);
  Program chunk;
  for (const Instruction& in : bp.program.ins) {
    if (in.op == Op::Barrier && in.label.rfind("checkpoint:", 0) == 0) {
      ex.execute(chunk);
      chunk = Program{};
      out.snapshots.emplace_back(in.label.substr(11), stabilizer_snapshot(torus, *out.state));
      continue;
    }
    chunk.ins.push_back(in);
  }
  ex.execute(chunk);
  return out;
}

namespace {
BraidStep step(BraidStep::Kind k, std::string name, Color c, std::vector<StarCoord> stars) {
  BraidStep s;
  s.kind = k;
  s.name = std::move(name);
  s.color = c;
  s.stars = std::move(stars);
  return s;
}
BraidStep checkpoint(std::string name) {
  return step(BraidStep::Kind::Checkpoint, std::move(name), Color::R, {});
}
}  // namespace

BraidSpec fusion_braid() {
  using K = BraidStep::Kind;
  BraidSpec s;
  s.steps.push_back(step(K::Create, "b", Color::B, {{0, 0}, {1, 0}}));
  s.steps.push_back(checkpoint("created"));
  s.steps.push_back(step(K::Move, "b", Color::B, {{1, 0}, {1, 1}, {2, 1}}));
  s.steps.push_back(checkpoint("moved"));
  s.steps.push_back(
      step(K::Fuse, "b", Color::B, {{0, 0}, {1, 0}, {2, -1}, {3, -1}, {3, 0}, {2, 1}}));
  s.steps.push_back(checkpoint("fused"));
  return s;
}

BraidSpec ring_braid() {
  using K = BraidStep::Kind;
  BraidSpec s;
  s.steps.push_back(step(K::Create, "b", Color::B, {{1, 0}, {0, 0}}));
  s.steps.push_back(checkpoint("blue-pair"));
  s.steps.push_back(step(K::Create, "g", Color::G, {{2, 0}, {1, 1}}));
  s.steps.push_back(step(K::Move, "g", Color::G, {{1, 1}, {0, 1}, {0, 0}}));
  s.steps.push_back(checkpoint("green-half"));
  s.steps.push_back(step(K::Move, "g", Color::G, {{0, 0}, {1, -1}, {2, -1}}));
  s.steps.push_back(step(K::Annihilate, "g", Color::G, {{2, -1}, {2, 0}}));
  s.steps.push_back(checkpoint("green-ring"));
  s.steps.push_back(step(K::Annihilate, "b", Color::B, {}));
  s.steps.push_back(checkpoint("blue-fused"));
  return s;
}

// ---------------------------------------------------------------------------------------

const char* borromean_variant_name(BorromeanVariant v) {
  switch (v) {
    case BorromeanVariant::RGB: return "RGB";
    case BorromeanVariant::RBOnly: return "RB-only";
    case BorromeanVariant::GBOnly: return "GB-only";
  }
  return "?";
}

BorromeanVariant parse_borromean_variant(const std::string& s) {
  if (s == "RGB" || s == "rgb") return BorromeanVariant::RGB;
  if (s == "RB-only" || s == "RB" || s == "rb") return BorromeanVariant::RBOnly;
  if (s == "GB-only" || s == "GB" || s == "gb") return BorromeanVariant::GBOnly;
  throw Error(ErrorCode::InvalidArgument, "unknown Borromean variant '" + s + "'");
}

BorromeanLoops borromean_loops(const KagomeTorus& torus) {
  BorromeanLoops l;
  l.green = string_program(torus, Color::G, {{0, 0}, {-1, 0}});
  std::vector<StarCoord> ring;
  for (int k = 0; k <= 6; ++k) ring.push_back(kNeighbors[k % 6]);
  l.red = string_program(torus, Color::R, ring);
  l.blue = string_program(torus, Color::B, {{0, 0}, {0, -1}, {-1, -1}, {-2, 0}});
  return l;
}

namespace {
Program commutator_part(const BorromeanLoops& l, BorromeanVariant v) {
  Program c;
  Program r = v == BorromeanVariant::GBOnly ? Program{} : l.red;
  Program g = v == BorromeanVariant::RBOnly ? Program{} : l.green;
  c.append(r).append(g).append(r).append(g);
  return c;
}
}  // namespace

Program borromean_program(const KagomeTorus& torus, BorromeanVariant v) {
  BorromeanLoops l = borromean_loops(torus);
  Program c = commutator_part(l, v);
  Program u;
  u.append(c).append(l.blue).append(c).append(l.blue);
  return u;
}

namespace {
double wrap_2pi(double phi) {
  double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  if (phi < 0) phi += two_pi;
  return phi;
}

void run_on(State& state, const Program& p) {
  ShotRecord rec;
  Rng rng(0);
  RunOptions opts;
  opts.register_cap = 64;
  opts.check_norm = false;
  Executor ex(state, rec, rng, opts);
  ex.execute(p);
}
}  // namespace

PhaseEstimate borromean_exact(const KagomeTorus& torus, const State& psi0, BorromeanVariant v) {
  auto state = psi0.clone();
  run_on(*state, borromean_program(torus, v));
  PhaseEstimate e;
  e.value = overlap(psi0, *state);
  e.r = std::abs(e.value);
  e.phase = e.r > 1e-12 ? wrap_2pi(std::arg(e.value)) : 0.0;
  return e;
}

PhaseEstimate borromean_hadamard(const KagomeTorus& torus, const State& psi0, BorromeanVariant v,
                                 int shots, std::uint64_t seed, Schedule schedule) {
  if (shots < 2) throw Error(ErrorCode::InvalidArgument, "Hadamard test needs at least 2 shots");
  const int anc = 1 << 20;
  BorromeanLoops l = borromean_loops(torus);
  Program c = commutator_part(l, v);
  Program cb = controlled(l.blue, anc);
  Program prog;
  prog.alloc(anc, true);
  prog.append(c).append(cb).append(c).append(cb);
  auto state = psi0.clone();
  run_on(*state, prog);

  // ancilla marginals in the X and Y settings
  auto x_state = state->clone();
  run_on(*x_state, Program{}.h(anc));
  auto y_state = state->clone();
  run_on(*y_state, Program{}.sdg(anc).h(anc));
  const double p1x = x_state->prob_one(anc);
  const double p1y = y_state->prob_one(anc);

  long nx = 0, ny = 0;
  double sx = 0.0, sy = 0.0;
  for (int k = 0; k < shots; ++k) {
    bool use_x = schedule == Schedule::Blocked ? k < shots / 2 : (k % 2 == 0);
    Rng rng(seed, static_cast<std::uint64_t>(k));
    int bit = rng.uniform() < (use_x ? p1x : p1y) ? 1 : 0;
    double val = bit ? -1.0 : 1.0;
    if (use_x) {
      ++nx;
      sx += val;
    } else {
      ++ny;
      sy += val;
    }
  }
  PhaseEstimate e;
  e.shots = shots;
  const double mx = sx / nx, my = sy / ny;
  e.value = {mx, my};
  e.r = std::abs(e.value);
  e.re_err = std::sqrt(std::max(0.0, 1.0 - mx * mx) / std::max<long>(1, nx - 1));
  e.im_err = std::sqrt(std::max(0.0, 1.0 - my * my) / std::max<long>(1, ny - 1));
  e.phase = wrap_2pi(std::atan2(my, mx));
  const double r2 = mx * mx + my * my;
  e.phase_err = r2 > 0 ? std::sqrt(my * my * e.re_err * e.re_err + mx * mx * e.im_err * e.im_err) / r2
                       : std::numbers::pi;
  return e;
}

// ---------------------------------------------------------------------------------------

std::pair<cplx, std::uint64_t> act_on_basis(const OperatorExpr& op, std::uint64_t x) {
  int par = 0;
  for (int q : op.z) par += static_cast<int>(x >> q & 1);
  for (auto [a, b] : op.cz) par += static_cast<int>((x >> a) & (x >> b) & 1);
  std::uint64_t y = x;
  for (int q : op.x) y ^= std::uint64_t{1} << q;
  return {(par & 1) ? -op.coeff : op.coeff, y};
}

std::vector<std::uint64_t> b_plus_generators(const KagomeTorus& torus) {
  const int n = torus.num_vertices();
  if (n > 64)
    throw Error(ErrorCode::SupportTooLarge, "exhaustive enumeration needs at most 64 vertices");
  std::vector<std::uint64_t> rows;
  for (int t = 0; t < torus.num_triangles(); ++t) {
    std::uint64_t r = 0;
    for (int v : torus.triangle(t).vertices) r |= std::uint64_t{1} << v;
    rows.push_back(r);
  }
  // reduced row echelon form over GF(2)
  std::vector<int> pivots;
  std::size_t rank = 0;
  for (int col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t sel = rank;
    while (sel < rows.size() && !(rows[sel] >> col & 1)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && (rows[r] >> col & 1)) rows[r] ^= rows[rank];
    pivots.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(n, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<std::uint64_t> null_basis;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::uint64_t v = std::uint64_t{1} << f;
    for (std::size_t r = 0; r < rank; ++r)
      if (rows[r] >> f & 1) v |= std::uint64_t{1} << pivots[r];
    null_basis.push_back(v);
  }
  return null_basis;
}

std::vector<std::uint64_t> b_plus_basis(const KagomeTorus& torus) {
  const auto null_basis = b_plus_generators(torus);
  if (null_basis.size() > 26)
    throw Error(ErrorCode::SupportTooLarge, "B_t=+1 subspace is too large to enumerate");
  std::vector<std::uint64_t> out;
  out.reserve(std::size_t{1} << null_basis.size());
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << null_basis.size()); ++m) {
    std::uint64_t x = 0;
    for (std::size_t k = 0; k < null_basis.size(); ++k)
      if (m >> k & 1) x ^= null_basis[k];
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {
bool commute_on(const OperatorExpr& a, const OperatorExpr& b, std::uint64_t x) {
  auto [p1, y1] = act_on_basis(b, x);
  auto [p2, z1] = act_on_basis(a, y1);
  auto [q1, y2] = act_on_basis(a, x);
  auto [q2, z2] = act_on_basis(b, y2);
  if (z1 != z2) return false;
  return std::abs(p1 * p2 - q1 * q2) < 1e-12;
}
}  // namespace

std::size_t count_noncommuting(const OperatorExpr& a, const OperatorExpr& b,
                               const std::vector<std::uint64_t>& basis) {
  std::size_t bad = 0;
  for (auto x : basis)
    if (!commute_on(a, b, x)) ++bad;
  return bad;
}

CommutatorReport commutator_check(const KagomeTorus& torus, std::uint64_t seed,
                                  int full_space_samples) {
  CommutatorReport rep;
  const auto basis = b_plus_basis(torus);
  rep.subspace_dim = basis.size();
  const int n = torus.num_vertices();
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<OperatorExpr> stars;
  std::vector<std::set<int>> supports;
  for (int s = 0; s < torus.num_stars(); ++s) {
    auto e = star_op(torus, s);
    stars.push_back(e.op);
    supports.emplace_back(e.support.begin(), e.support.end());
  }
  Rng rng(seed, 0xC0);
  for (int a = 0; a < torus.num_stars(); ++a)
    for (int b = a + 1; b < torus.num_stars(); ++b) {
      ++rep.pairs_checked;
      bool overlapping = false;
      for (int q : supports[a])
        if (supports[b].count(q)) overlapping = true;
      double full = 0.0;
      for (int k = 0; k < full_space_samples; ++k)
        if (!commute_on(stars[a], stars[b], rng() & mask)) full = 2.0;
      if (overlapping) {
        ++rep.adjacent_pairs;
        rep.max_norm_full = std::max(rep.max_norm_full, full);
      } else {
        rep.max_norm_disjoint = std::max(rep.max_norm_disjoint, full);
      }
      if (count_noncommuting(stars[a], stars[b], basis) > 0) rep.max_norm_subspace = 2.0;
    }
  return rep;
}

}  // namespace d4
