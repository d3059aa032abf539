#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace d4 {

enum class Color : std::uint8_t { R = 0, G = 1, B = 2 };

inline Color color_shift(Color c, int k) {
  return static_cast<Color>(((static_cast<int>(c) + k) % 3 + 3) % 3);
}
inline int color_id(Color c) { return static_cast<int>(c); }
char color_char(Color c);
Color parse_color(char ch);

enum class Direction { H, V };

struct StarCoord {
  int i = 0;
  int j = 0;
  friend bool operator==(const StarCoord&, const StarCoord&) = default;
  StarCoord operator+(const StarCoord& o) const { return {i + o.i, j + o.j}; }
  StarCoord operator-(const StarCoord& o) const { return {i - o.i, j - o.j}; }
};

// counter-clockwise, starting east
inline constexpr std::array<StarCoord, 6> kNeighbors{
    {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
// vertex v = 3*s + d sits between star s and star s + kVertexDirs[d]
inline constexpr std::array<StarCoord, 3> kVertexDirs{{{1, 0}, {0, 1}, {-1, 1}}};

enum class Orientation : std::uint8_t { Right = 0, Left = 1 };

struct Triangle {
  int star = 0;
  Orientation orientation = Orientation::Right;
  Color color = Color::R;
  std::array<int, 3> vertices{};
};

struct AncillaTriangle {
  std::array<int, 3> stars{};
  int sign = 1;
};

class KagomeTorus {
 public:
  // twist < 0 picks ly mod 3, the smallest twist compatible with the colouring
  static KagomeTorus build(int lx, int ly, int twist = -1);

  int lx() const { return lx_; }
  int ly() const { return ly_; }
  int twist() const { return tw_; }
  int num_stars() const { return lx_ * ly_; }
  int num_vertices() const { return 3 * lx_ * ly_; }
  int num_triangles() const { return 2 * lx_ * ly_; }

  StarCoord reduce(StarCoord p) const;
  int star_index(StarCoord p) const;
  StarCoord star_coord(int s) const;
  Color star_color(int s) const { return star_colors_.at(s); }
  static Color coord_color(StarCoord p);
  Color vertex_color(int v) const { return vertex_colors_.at(v); }

  const std::array<int, 6>& hexagon(int s) const { return hexagons_.at(s); }
  const std::array<int, 6>& tips(int s) const { return tips_.at(s); }
  const Triangle& triangle(int t) const { return triangles_.at(t); }
  int triangle_index(int star, Orientation o) const { return 2 * star + static_cast<int>(o); }
  // the unique triangle of colour c inside a star of another colour
  int triangle_of_color(int star, Color c) const;

  int shared_vertex(StarCoord a, StarCoord b) const;
  // tip of a that lies on the bond to the same-colour second neighbour b
  int tip_between(StarCoord a, StarCoord b) const;
  std::array<int, 2> vertex_triangles(int v) const { return vertex_tris_.at(v); }
  std::array<int, 2> tip_stars(int v) const { return tip_stars_.at(v); }
  std::array<int, 2> hexagon_stars(int v) const;

  const std::vector<AncillaTriangle>& ancilla_triangles() const { return ancillas_; }
  std::vector<int> vertices_of_color(Color c) const;
  std::vector<int> stars_of_color(Color c) const;
  std::vector<int> triangles_of_color(Color c) const;

  void check_star(int s) const;
  void check_triangle(int t) const;
  void check_vertex(int v) const;

  std::array<double, 2> star_position(int s) const;
  std::array<double, 2> vertex_position(int v) const;

 private:
  int lx_ = 0, ly_ = 0, tw_ = 0;
  std::vector<Color> star_colors_;
  std::vector<Color> vertex_colors_;
  std::vector<std::array<int, 6>> hexagons_;
  std::vector<std::array<int, 6>> tips_;
  std::vector<Triangle> triangles_;
  std::vector<std::array<int, 2>> vertex_tris_;
  std::vector<std::array<int, 2>> tip_stars_;
  std::vector<AncillaTriangle> ancillas_;

  int vertex_toward(int s, StarCoord n) const;
};

// Walk of a colour-c string through stars of the other two colours.
// vertices holds the X vertices (colour c, shared by consecutive stars) interleaved
// with the middle hexagon vertex of each intermediate star.
struct Path {
  Color color = Color::R;
  bool closed = false;
  std::vector<StarCoord> stars;  // covering-space coordinates
  std::vector<int> vertices;
  std::vector<Color> vertex_colors;
  int start_triangle = -1;
  int end_triangle = -1;
  std::array<int, 2> wrap{0, 0};

  std::size_t length() const { return stars.empty() ? 0 : stars.size() - 1; }
  std::vector<int> x_support() const;
};

StarCoord displacement(const KagomeTorus& torus, Direction d);

Path star_walk(const KagomeTorus& torus, Color color, const std::vector<StarCoord>& stars,
               bool closed);

// shortest star path avoiding colour c, from `from` to any image of `to`
std::vector<StarCoord> shortest_star_path(const KagomeTorus& torus, Color color,
                                          StarCoord from, int to);

Path string_path(const KagomeTorus& torus, Color color, int t_from, int t_to);
Path loop_path(const KagomeTorus& torus, Color color, Direction d, StarCoord start);

// colour-c vertices on a shortest bond path of the colour-c star lattice
std::vector<int> bond_path(const KagomeTorus& torus, Color color, int from, int to);
std::vector<int> bond_loop(const KagomeTorus& torus, Color color, Direction d,
                           StarCoord start);

std::array<int, 2> wrap_parity(const KagomeTorus& torus, StarCoord a, StarCoord b);

}  // namespace d4
