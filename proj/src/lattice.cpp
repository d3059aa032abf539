#include "d4/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "d4/error.hpp"

namespace d4 {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int mod(int a, int b) { return ((a % b) + b) % b; }

int neighbor_slot(StarCoord n) {
  for (int k = 0; k < 6; ++k)
    if (kNeighbors[k] == n) return k;
  return -1;
}

int second_neighbor_slot(StarCoord n) {
  for (int k = 0; k < 6; ++k)
    if (kNeighbors[k] + kNeighbors[(k + 1) % 6] == n) return k;
  return -1;
}

using Key = std::pair<int, int>;
Key key(StarCoord p) { return {p.i, p.j}; }

}  // namespace

char color_char(Color c) {
  switch (c) {
    case Color::R: return 'R';
    case Color::G: return 'G';
    case Color::B: return 'B';
  }
  return '?';
}

Color parse_color(char ch) {
  switch (ch) {
    case 'R': case 'r': return Color::R;
    case 'G': case 'g': return Color::G;
    case 'B': case 'b': return Color::B;
  }
  throw Error(ErrorCode::InvalidArgument, std::string("unknown colour '") + ch + "'");
}

KagomeTorus KagomeTorus::build(int lx, int ly, int twist) {
  if (lx < 2 || ly < 2)
    throw Error(ErrorCode::SizeTooSmall,
                "torus needs at least 2 star columns and 2 star rows, got " +
                    std::to_string(lx) + "x" + std::to_string(ly));
  if (twist < 0) twist = mod(ly, 3);
  if (lx % 3 != 0 || mod(twist - ly, 3) != 0)
    throw Error(ErrorCode::IncompatibleSize,
                "a " + std::to_string(lx) + "x" + std::to_string(ly) + " torus (twist " +
                    std::to_string(twist) +
                    ") cannot carry the 3-colouring; need lx = 0 mod 3 and twist = ly mod 3");

  KagomeTorus t;
  t.lx_ = lx;
  t.ly_ = ly;
  t.tw_ = twist;
  const int n = lx * ly;

  t.star_colors_.resize(n);
  for (int s = 0; s < n; ++s) t.star_colors_[s] = coord_color(t.star_coord(s));

  t.vertex_colors_.resize(3 * n);
  for (int s = 0; s < n; ++s)
    for (int d = 0; d < 3; ++d) {
      int other = t.star_index(t.star_coord(s) + kVertexDirs[d]);
      t.vertex_colors_[3 * s + d] =
          static_cast<Color>(mod(-color_id(t.star_colors_[s]) - color_id(t.star_colors_[other]), 3));
    }

  t.hexagons_.resize(n);
  t.tips_.resize(n);
  for (int s = 0; s < n; ++s) {
    StarCoord p = t.star_coord(s);
    for (int k = 0; k < 6; ++k) {
      t.hexagons_[s][k] = t.vertex_toward(s, kNeighbors[k]);
      StarCoord n1 = kNeighbors[k], n2 = kNeighbors[(k + 1) % 6];
      t.tips_[s][k] = t.vertex_toward(t.star_index(p + n1), n2 - n1);
    }
  }

  t.triangles_.resize(2 * n);
  for (int s = 0; s < n; ++s)
    for (int o = 0; o < 2; ++o) {
      Triangle& tri = t.triangles_[2 * s + o];
      tri.star = s;
      tri.orientation = static_cast<Orientation>(o);
      for (int a = 0; a < 3; ++a) tri.vertices[a] = t.hexagons_[s][o + 2 * a];
      tri.color = t.vertex_colors_[tri.vertices[0]];
    }

  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::IncompatibleSize, "torus " + std::to_string(lx) + "x" +
                                                 std::to_string(ly) + ": " + why);
  };

  std::vector<std::vector<int>> vt(3 * n), ts(3 * n);
  for (int idx = 0; idx < 2 * n; ++idx)
    for (int v : t.triangles_[idx].vertices) vt[v].push_back(idx);
  for (int s = 0; s < n; ++s)
    for (int v : t.tips_[s]) ts[v].push_back(s);
  t.vertex_tris_.resize(3 * n);
  t.tip_stars_.resize(3 * n);
  for (int v = 0; v < 3 * n; ++v) {
    if (vt[v].size() != 2) fail("vertex " + std::to_string(v) + " is not in exactly 2 triangles");
    if (ts[v].size() != 2) fail("vertex " + std::to_string(v) + " is not a tip of exactly 2 stars");
    t.vertex_tris_[v] = {vt[v][0], vt[v][1]};
    t.tip_stars_[v] = {ts[v][0], ts[v][1]};
  }
  for (int s = 0; s < n; ++s) {
    std::set<int> all(t.hexagons_[s].begin(), t.hexagons_[s].end());
    all.insert(t.tips_[s].begin(), t.tips_[s].end());
    if (all.size() != 12) fail("star " + std::to_string(s) + " has repeated vertices");
    for (int k = 0; k < 6; ++k) {
      if (t.vertex_colors_[t.tips_[s][k]] != t.star_colors_[s]) fail("tip colour mismatch");
      if (t.vertex_colors_[t.hexagons_[s][k]] != t.vertex_colors_[t.hexagons_[s][(k + 2) % 6]])
        fail("hexagon does not alternate");
      if (t.vertex_colors_[t.hexagons_[s][k]] == t.vertex_colors_[t.hexagons_[s][(k + 1) % 6]])
        fail("hexagon does not alternate");
    }
  }

  for (int s = 0; s < n; ++s) {
    StarCoord p = t.star_coord(s);
    int a = t.star_index(p + StarCoord{1, 0});
    int b = t.star_index(p + StarCoord{0, 1});
    int c = t.star_index(p + StarCoord{1, 1});
    t.ancillas_.push_back({{s, a, b}, +1});
    t.ancillas_.push_back({{a, b, c}, -1});
  }
  return t;
}

StarCoord KagomeTorus::reduce(StarCoord p) const {
  int k = floor_div(p.j, ly_);
  p.j -= k * ly_;
  p.i -= k * tw_;
  p.i = mod(p.i, lx_);
  return p;
}

int KagomeTorus::star_index(StarCoord p) const {
  p = reduce(p);
  return p.j * lx_ + p.i;
}

StarCoord KagomeTorus::star_coord(int s) const {
  check_star(s);
  return {s % lx_, s / lx_};
}

Color KagomeTorus::coord_color(StarCoord p) { return static_cast<Color>(mod(p.i - p.j, 3)); }

int KagomeTorus::vertex_toward(int s, StarCoord n) const {
  for (int d = 0; d < 3; ++d)
    if (kVertexDirs[d] == n) return 3 * s + d;
  StarCoord m{-n.i, -n.j};
  for (int d = 0; d < 3; ++d)
    if (kVertexDirs[d] == m) return 3 * star_index(star_coord(s) + n) + d;
  throw Error(ErrorCode::Internal, "not a neighbour offset");
}

int KagomeTorus::triangle_of_color(int star, Color c) const {
  check_star(star);
  Color sc = star_colors_[star];
  if (sc == c)
    throw Error(ErrorCode::BadEndpoints, "a star holds no triangle of its own colour");
  Orientation o = (c == color_shift(sc, 2)) ? Orientation::Right : Orientation::Left;
  return triangle_index(star, o);
}

int KagomeTorus::shared_vertex(StarCoord a, StarCoord b) const {
  int k = neighbor_slot(b - a);
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "stars are not adjacent");
  return hexagons_[star_index(a)][k];
}

int KagomeTorus::tip_between(StarCoord a, StarCoord b) const {
  int k = second_neighbor_slot(b - a);
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "stars are not second neighbours");
  return tips_[star_index(a)][k];
}

std::array<int, 2> KagomeTorus::hexagon_stars(int v) const {
  check_vertex(v);
  int s = v / 3;
  return {s, star_index(star_coord(s) + kVertexDirs[v % 3])};
}

std::vector<int> KagomeTorus::vertices_of_color(Color c) const {
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v)
    if (vertex_colors_[v] == c) out.push_back(v);
  return out;
}

std::vector<int> KagomeTorus::stars_of_color(Color c) const {
  std::vector<int> out;
  for (int s = 0; s < num_stars(); ++s)
    if (star_colors_[s] == c) out.push_back(s);
  return out;
}

std::vector<int> KagomeTorus::triangles_of_color(Color c) const {
  std::vector<int> out;
  for (int t = 0; t < num_triangles(); ++t)
    if (triangles_[t].color == c) out.push_back(t);
  return out;
}

void KagomeTorus::check_star(int s) const {
  if (s < 0 || s >= num_stars())
    throw Error(ErrorCode::IndexOutOfRange, "star index " + std::to_string(s) + " out of range");
}
void KagomeTorus::check_triangle(int t) const {
  if (t < 0 || t >= num_triangles())
    throw Error(ErrorCode::IndexOutOfRange,
                "triangle index " + std::to_string(t) + " out of range");
}
void KagomeTorus::check_vertex(int v) const {
  if (v < 0 || v >= num_vertices())
    throw Error(ErrorCode::IndexOutOfRange, "vertex index " + std::to_string(v) + " out of range");
}

std::array<double, 2> KagomeTorus::star_position(int s) const {
  StarCoord p = star_coord(s);
  return {2.0 * p.i + p.j, std::sqrt(3.0) * p.j};
}

std::array<double, 2> KagomeTorus::vertex_position(int v) const {
  check_vertex(v);
  StarCoord p = star_coord(v / 3), d = kVertexDirs[v % 3];
  return {2.0 * p.i + p.j + d.i + 0.5 * d.j, std::sqrt(3.0) * (p.j + 0.5 * d.j)};
}

std::vector<int> Path::x_support() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < vertices.size(); ++k)
    if (vertex_colors[k] == color) out.push_back(vertices[k]);
  return out;
}

StarCoord displacement(const KagomeTorus& torus, Direction d) {
  return d == Direction::H ? StarCoord{torus.lx(), 0} : StarCoord{torus.twist(), torus.ly()};
}

std::array<int, 2> wrap_parity(const KagomeTorus& torus, StarCoord a, StarCoord b) {
  auto cell = [&](StarCoord p) {
    int n = floor_div(p.j, torus.ly());
    int m = floor_div(p.i - n * torus.twist(), torus.lx());
    return std::pair<int, int>{m, n};
  };
  auto [ma, na] = cell(a);
  auto [mb, nb] = cell(b);
  return {mod(mb - ma, 2), mod(nb - na, 2)};
}

namespace {

int middle_vertex(const KagomeTorus& torus, StarCoord p, int v1, int v2) {
  const auto& h = torus.hexagon(torus.star_index(p));
  int a = static_cast<int>(std::find(h.begin(), h.end(), v1) - h.begin());
  int b = static_cast<int>(std::find(h.begin(), h.end(), v2) - h.begin());
  if (a == 6 || b == 6) throw Error(ErrorCode::Internal, "vertex not on hexagon");
  if (mod(b - a, 6) == 2) return h[(a + 1) % 6];
  if (mod(a - b, 6) == 2) return h[(b + 1) % 6];
  throw Error(ErrorCode::NoPath, "star path turns back on itself");
}

// breadth-first search in the covering plane; `step_ok` filters target coordinates
template <class Steps, class Accept, class Allowed>
std::vector<StarCoord> cover_bfs(const KagomeTorus& torus, StarCoord from, const Steps& steps,
                                 Accept accept, Allowed allowed) {
  const int bi = 3 * (torus.lx() + torus.ly()) + 6, bj = 3 * torus.ly() + 6;
  std::map<Key, Key> prev;
  std::deque<StarCoord> queue{from};
  prev[key(from)] = key(from);
  while (!queue.empty()) {
    StarCoord p = queue.front();
    queue.pop_front();
    if (accept(p)) {
      std::vector<StarCoord> out{p};
      while (!(out.back() == from)) {
        Key k = prev[key(out.back())];
        out.push_back({k.first, k.second});
      }
      std::reverse(out.begin(), out.end());
      return out;
    }
    for (const StarCoord& st : steps) {
      StarCoord q = p + st;
      if (std::abs(q.i - from.i) > bi || std::abs(q.j - from.j) > bj) continue;
      if (!allowed(q) || prev.count(key(q))) continue;
      prev[key(q)] = key(p);
      queue.push_back(q);
    }
  }
  throw Error(ErrorCode::NoPath, "no path in the colour lattice");
}

std::array<StarCoord, 6> second_steps() {
  std::array<StarCoord, 6> out;
  for (int k = 0; k < 6; ++k) out[k] = kNeighbors[k] + kNeighbors[(k + 1) % 6];
  return out;
}

std::vector<int> bonds_along(const KagomeTorus& torus, const std::vector<StarCoord>& stars) {
  std::vector<int> out;
  for (std::size_t k = 0; k + 1 < stars.size(); ++k)
    out.push_back(torus.tip_between(stars[k], stars[k + 1]));
  return out;
}

}  // namespace

Path star_walk(const KagomeTorus& torus, Color color, const std::vector<StarCoord>& stars,
               bool closed) {
  if (stars.empty()) throw Error(ErrorCode::NoPath, "empty star path");
  for (const StarCoord& p : stars)
    if (KagomeTorus::coord_color(p) == color)
      throw Error(ErrorCode::NoPath, "string path visits a star of its own colour");
  for (std::size_t k = 0; k + 1 < stars.size(); ++k)
    if (neighbor_slot(stars[k + 1] - stars[k]) < 0)
      throw Error(ErrorCode::NoPath, "consecutive stars are not adjacent");

  Path path;
  path.color = color;
  path.closed = closed;
  path.stars = stars;
  path.wrap = wrap_parity(torus, stars.front(), stars.back());
  const std::size_t L = stars.size() - 1;

  std::vector<int> b;
  for (std::size_t k = 0; k < L; ++k) b.push_back(torus.shared_vertex(stars[k], stars[k + 1]));

  if (closed) {
    if (L < 2 || torus.star_index(stars.front()) != torus.star_index(stars.back()))
      throw Error(ErrorCode::NoPath, "closed path does not return to its start");
    path.vertices.push_back(middle_vertex(torus, stars[0], b[L - 1], b[0]));
  } else {
    path.start_triangle = torus.triangle_of_color(torus.star_index(stars.front()), color);
    path.end_triangle = torus.triangle_of_color(torus.star_index(stars.back()), color);
  }
  for (std::size_t k = 0; k < L; ++k) {
    path.vertices.push_back(b[k]);
    if (k + 1 < L) path.vertices.push_back(middle_vertex(torus, stars[k + 1], b[k], b[k + 1]));
  }
  for (int v : path.vertices) path.vertex_colors.push_back(torus.vertex_color(v));
  return path;
}

std::vector<StarCoord> shortest_star_path(const KagomeTorus& torus, Color color, StarCoord from,
                                          int to) {
  torus.check_star(to);
  if (KagomeTorus::coord_color(from) == color || torus.star_color(to) == color)
    throw Error(ErrorCode::NoPath, "string endpoints must be stars of the other two colours");
  return cover_bfs(
      torus, from, kNeighbors, [&](StarCoord p) { return torus.star_index(p) == to; },
      [&](StarCoord q) { return KagomeTorus::coord_color(q) != color; });
}

Path string_path(const KagomeTorus& torus, Color color, int t_from, int t_to) {
  torus.check_triangle(t_from);
  torus.check_triangle(t_to);
  const Triangle& a = torus.triangle(t_from);
  const Triangle& b = torus.triangle(t_to);
  if (a.color != color || b.color != color)
    throw Error(ErrorCode::BadEndpoints, "string endpoints must be triangles of the string colour");
  auto stars = shortest_star_path(torus, color, torus.star_coord(a.star), b.star);
  return star_walk(torus, color, stars, false);
}

Path loop_path(const KagomeTorus& torus, Color color, Direction d, StarCoord start) {
  StarCoord goal = start + displacement(torus, d);
  if (KagomeTorus::coord_color(start) == color)
    throw Error(ErrorCode::NoPath, "loop basepoint has the loop colour");
  auto stars = cover_bfs(
      torus, start, kNeighbors, [&](StarCoord p) { return p == goal; },
      [&](StarCoord q) { return KagomeTorus::coord_color(q) != color; });
  return star_walk(torus, color, stars, true);
}

std::vector<int> bond_path(const KagomeTorus& torus, Color color, int from, int to) {
  torus.check_star(from);
  torus.check_star(to);
  if (torus.star_color(from) != color || torus.star_color(to) != color)
    throw Error(ErrorCode::NoPath, "bond path endpoints must be stars of the path colour");
  auto stars = cover_bfs(
      torus, torus.star_coord(from), second_steps(),
      [&](StarCoord p) { return torus.star_index(p) == to; }, [](StarCoord) { return true; });
  return bonds_along(torus, stars);
}

std::vector<int> bond_loop(const KagomeTorus& torus, Color color, Direction d, StarCoord start) {
  if (KagomeTorus::coord_color(start) != color)
    throw Error(ErrorCode::NoPath, "bond loop basepoint must have the loop colour");
  StarCoord goal = start + displacement(torus, d);
  auto stars = cover_bfs(
      torus, start, second_steps(), [&](StarCoord p) { return p == goal; },
      [](StarCoord) { return true; });
  return bonds_along(torus, stars);
}

}  // namespace d4
