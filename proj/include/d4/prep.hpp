#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "d4/engine.hpp"
#include "d4/lattice.hpp"
#include "d4/noise.hpp"
#include "d4/program.hpp"

namespace d4 {

// Six logical Z signs in the order RH GH BH RV GV BV.
struct SectorSpec {
  std::array<int, 6> z{1, 1, 1, 1, 1, 1};

  static int slot(Color c, Direction d) { return color_id(c) + (d == Direction::V ? 3 : 0); }
  int sign(Color c, Direction d) const { return z[slot(c, d)]; }
  void set(Color c, Direction d, int s) { z[slot(c, d)] = s; }

  // prod_{s in c} A_s forced by the logical signs, per colour
  int star_product(Color c) const;
  bool admissible() const;
  // bit = (1 - Z)/2, same order as z
  std::string bits() const;
  static SectorSpec from_bits(const std::string& bits);
  // bit k of m set means z[k] = -1
  static SectorSpec from_index(int m);
  int index() const;
  friend bool operator==(const SectorSpec&, const SectorSpec&) = default;
};

enum class PrepVariant { Naive, Compiled };
enum class FeedForwardMode { Dynamic, Static };
enum class SectorMethod { Loops, Basis };

const char* variant_name(PrepVariant v);
PrepVariant parse_variant(const std::string& s);

inline int ancilla_qubit(const KagomeTorus& torus, int s) { return torus.num_vertices() + s; }
std::string ancilla_label(int s);

struct PrepConfig {
  int lx = 3, ly = 3;
  PrepVariant variant = PrepVariant::Compiled;
  SectorSpec sector;
  std::uint64_t seed = 1;
  std::optional<NoiseModel> noise;
  bool discard_on_odd_herald = true;  // heralded shots are flagged for discard
  bool error_on_herald = false;       // raise HeraldedDiscard instead of flagging
  int register_cap = 36;
  std::map<int, int> forced;  // star -> ancilla bit (1 = outcome -1)
  FeedForwardMode feed_forward = FeedForwardMode::Dynamic;
  SectorMethod sector_method = SectorMethod::Loops;
  Backend backend = Backend::Sparse;
  Precision precision = Precision::C128;
  int threads = 0;
};

struct CostReport {
  int two_qubit_gates = 0;
  int one_qubit_gates = 0;
  int peak_register = 0;
  int depth = 0;
  int measurements = 0;
};

// Two-qubit cost: CZ, CNOT, ZZPhase 1; ZZZPhase 3 (CNOT, ZZPhase, CNOT); CCZ, CCX 6.
CostReport cost_report(const Program& program);

// Coherent part and ancilla measurements, without feed-forward.
Program prep_circuit(const KagomeTorus& torus, PrepVariant variant);

struct CompiledPrep {
  Program program;
  CostReport cost;
};
CompiledPrep compile_prep(const KagomeTorus& torus, PrepVariant variant = PrepVariant::Compiled);

struct FeedForwardPlan {
  std::array<std::vector<std::pair<int, int>>, 3> pairs;  // per colour, star pairs
  std::array<int, 3> leftover{-1, -1, -1};                 // unpaired star per colour
  std::vector<int> z_vertices;                             // net Z corrections
  bool herald() const;
};

// outcomes[s] is +1 or -1 for star s. Greedy nearest pairs, ties to the lowest star indices.
FeedForwardPlan pair_anyons(const KagomeTorus& torus, const std::vector<int>& outcomes);
// same corrections from an arbitrary explicit pairing
FeedForwardPlan plan_from_pairs(const KagomeTorus& torus,
                                const std::array<std::vector<std::pair<int, int>>, 3>& pairs);
Program correction_program(const FeedForwardPlan& plan);

// Conditional Z gates with XOR conditions: each −1 star is joined to the lowest star of its
// colour. Equivalent to any pairing whenever every colour has even parity.
Program static_feed_forward(const KagomeTorus& torus);

// X logicals that move psi0 to the target sector; horizontal loops first, then vertical.
Program sector_program(const KagomeTorus& torus, const SectorSpec& sector);

// Full program: circuit, readout-noise hook, feed-forward and sector loops.
Program prep_program(const KagomeTorus& torus, const PrepConfig& config);

struct PrepResult {
  std::unique_ptr<State> state;
  ShotRecord record;
  FeedForwardPlan plan;
  std::vector<int> outcomes;  // reported ancilla outcomes, +1 or -1 per star
  bool herald = false;
  bool admissible = true;
  CostReport cost;
};

PrepResult prepare(const PrepConfig& config);
PrepResult prepare(const KagomeTorus& torus, const PrepConfig& config);

// Exact prod_s (1 + A_s)/2 applied to the winding basis state of the sector (ZeroNormState for
// inadmissible sectors).
std::unique_ptr<State> basis_sector_state(const KagomeTorus& torus, const SectorSpec& sector,
                                          Backend backend = Backend::Sparse,
                                          Precision precision = Precision::C128);

// Winding basis state (vertex ids set to 1) used by basis_sector_state.
std::vector<int> winding_vertices(const KagomeTorus& torus, const SectorSpec& sector);

// Noiseless ground state psi0 in the all +1 sector (forced all +1 outcomes).
std::unique_ptr<State> ground_state(const KagomeTorus& torus, Backend backend = Backend::Sparse,
                                    Precision precision = Precision::C128);

}  // namespace d4
