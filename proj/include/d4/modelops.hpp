#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "d4/engine.hpp"
#include "d4/lattice.hpp"
#include "d4/operator.hpp"
#include "d4/program.hpp"

namespace d4 {

// Qubit ids: vertex v of the torus is qubit v.

struct StabilizerExpr {
  enum class Kind { Star, Triangle } kind = Kind::Star;
  int index = 0;
  std::vector<int> support;
  OperatorExpr op;
};

StabilizerExpr star_op(const KagomeTorus& torus, int s);
StabilizerExpr triangle_op(const KagomeTorus& torus, int t);

// CZ before Z before X, matching the OperatorExpr convention; the coefficient is dropped
Program to_program(const OperatorExpr& op);

// Decoration CZ(a, b) for every `later`-coloured b and every `earlier`-coloured a before it.
struct ColorOrder {
  Color earlier = Color::R;
  Color later = Color::G;
};

// First-visited colour is the earlier one; for blue strings that walk R then G this is
// the B -> R -> G order.
ColorOrder natural_order(const Path& path);
ColorOrder reversed(ColorOrder o);

struct StringOperator {
  Color color = Color::R;
  Path path;
  ColorOrder order;
  std::vector<int> x;
  std::vector<std::pair<int, int>> cz;

  OperatorExpr expr() const;
  Program program() const;
};

StringOperator decorated_string(const KagomeTorus& torus, const Path& path,
                                std::optional<ColorOrder> order = std::nullopt);

enum class LogicalKind { Z, X };

struct LogicalExpr {
  Color color = Color::R;
  Direction direction = Direction::H;
  LogicalKind kind = LogicalKind::Z;
  StarCoord basepoint;
  std::vector<int> z_support;         // Z-type
  std::optional<StringOperator> string;  // X-type
  OperatorExpr op;

  Program program() const;
};

// Canonical X-loop basepoints: horizontal loops start at the lowest-index star not of the
// loop colour; vertical loops start in column 0 at the star of colour c+1.
StarCoord x_loop_basepoint(const KagomeTorus& torus, Color c, Direction d);
LogicalExpr logical(const KagomeTorus& torus, Color c, Direction d, LogicalKind kind);
LogicalExpr z_logical_at(const KagomeTorus& torus, Color c, Direction d, StarCoord start);
// distinct translates of the Z logical (one per colour-c star, duplicates removed)
std::vector<LogicalExpr> z_logical_translates(const KagomeTorus& torus, Color c, Direction d);

struct AnyonString {
  Color color = Color::R;
  int t_i = -1;
  int t_f = -1;
  StringOperator op;
};

AnyonString anyon_string(const KagomeTorus& torus, Color c, int t_i, int t_f,
                         std::optional<ColorOrder> order = std::nullopt);
Program anyon_string_program(const KagomeTorus& torus, Color c, int t_i, int t_f,
                             std::optional<ColorOrder> order = std::nullopt);

// ---- braids ----

struct BraidStep {
  enum class Kind { Create, Move, Annihilate, Fuse, Checkpoint } kind = Kind::Create;
  std::string name;
  Color color = Color::R;
  std::vector<StarCoord> stars;
  bool at_tail = false;  // Move: extend the tail instead of the head
};

struct BraidSpec {
  std::vector<BraidStep> steps;
};

struct BraidProgram {
  Program program;
  std::vector<std::string> checkpoints;
  std::map<std::string, Path> open_strings;  // strings still open at the end
};

// Tracked strings: a string's operator is always that of its full path from creation, and a
// move applies O(new path) O(old path).
BraidProgram braid_sequence(const KagomeTorus& torus, const BraidSpec& spec);

struct StabilizerSnapshot {
  std::vector<double> stars;
  std::vector<double> triangles;
};

StabilizerSnapshot stabilizer_snapshot(const KagomeTorus& torus, const State& state);

struct BraidRun {
  std::unique_ptr<State> state;
  std::vector<std::pair<std::string, StabilizerSnapshot>> snapshots;
};

BraidRun run_braid(const KagomeTorus& torus, const State& psi0, const BraidSpec& spec);

// Geometry used throughout the tests and the CLI.
BraidSpec fusion_braid();
BraidSpec ring_braid();

// ---- Borromean rings ----

enum class BorromeanVariant { RGB, RBOnly, GBOnly };
const char* borromean_variant_name(BorromeanVariant v);
BorromeanVariant parse_borromean_variant(const std::string& s);

struct BorromeanLoops {
  Program red, green, blue;
};
BorromeanLoops borromean_loops(const KagomeTorus& torus);
// B C B C with C = R G R G; a removed colour is replaced by the identity
Program borromean_program(const KagomeTorus& torus, BorromeanVariant v);

struct PhaseEstimate {
  std::complex<double> value;
  double r = 0.0;
  double phase = 0.0;  // in [0, 2 pi)
  double phase_err = 0.0;
  double re_err = 0.0;
  double im_err = 0.0;
  int shots = 0;
};

PhaseEstimate borromean_exact(const KagomeTorus& torus, const State& psi0, BorromeanVariant v);

enum class Schedule { Blocked, Interleaved };
// Hadamard test: the ancilla controls every blue string; X and Y settings in separate shots
PhaseEstimate borromean_hadamard(const KagomeTorus& torus, const State& psi0, BorromeanVariant v,
                                 int shots, std::uint64_t seed, Schedule schedule = Schedule::Blocked);

// ---- exhaustive basis-state algebra (tori with at most 64 vertices) ----

// O|x> = phase |y>
std::pair<cplx, std::uint64_t> act_on_basis(const OperatorExpr& op, std::uint64_t x);
// GF(2) generators of the B_t=+1 subspace, and its full enumeration (null dimension <= 26)
std::vector<std::uint64_t> b_plus_generators(const KagomeTorus& torus);
std::vector<std::uint64_t> b_plus_basis(const KagomeTorus& torus);

struct CommutatorReport {
  int pairs_checked = 0;
  int adjacent_pairs = 0;
  double max_norm_full = 0.0;      // adjacent pairs, random full-space basis states
  double max_norm_subspace = 0.0;  // all pairs, whole B_t=+1 subspace
  double max_norm_disjoint = 0.0;  // disjoint supports, full space
  std::size_t subspace_dim = 0;
};

CommutatorReport commutator_check(const KagomeTorus& torus, std::uint64_t seed = 1,
                                  int full_space_samples = 2000);

// number of basis states in `basis` on which a and b fail to commute
std::size_t count_noncommuting(const OperatorExpr& a, const OperatorExpr& b,
                               const std::vector<std::uint64_t>& basis);

}  // namespace d4
