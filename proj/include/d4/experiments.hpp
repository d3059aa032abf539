#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "d4/lattice.hpp"
#include "d4/noise.hpp"
#include "d4/prep.hpp"
#include "d4/state.hpp"

namespace d4 {

inline constexpr int kReportSchemaVersion = 1;

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

enum class Mode { Exact, Sampled };
const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

struct ExperimentReport {
  std::string experiment;
  int lx = 0, ly = 0;
  Mode mode = Mode::Exact;
  std::optional<SectorSpec> sector;
  std::vector<Estimate> stars;
  std::vector<Estimate> triangles;
  std::array<Estimate, 6> logicals{};  // translate averaged, RH GH BH RV GV BV
  std::map<std::string, Estimate> scalars;
  std::map<std::string, std::vector<double>> series;
  int shots = 0;  // per measurement setting
  int discarded = 0;
  std::uint64_t seed = 0;
  std::optional<NoiseModel> noise;
};

// Omitted star / triangle per colour in the R, G, B projectors
enum class ProjectorChoice { Lowest, Highest };

struct ProjectorValues {
  Estimate r, g, b;
};

struct SamplingOptions {
  int shots = 500;  // per setting
  std::uint64_t seed = 1;
  std::optional<NoiseModel> noise;
  bool mitigate = false;  // readout-corrected stabilizer estimators
};

// Setting c measures the c-coloured vertices in X and all others in Z. Stars of colour c are
// read in setting c; triangles and Z logicals of colour c in setting c + 1.
Setting color_setting(const KagomeTorus& torus, Color c);

ExperimentReport exact_report(const KagomeTorus& torus, const State& state,
                              const std::optional<SectorSpec>& target = std::nullopt);
// Born samples of one fixed state, three settings
ExperimentReport sampled_report(const KagomeTorus& torus, const State& state,
                                const std::optional<SectorSpec>& target,
                                const SamplingOptions& opts);
// One noisy preparation trajectory per shot; heralded shots are discarded.
ExperimentReport noisy_prep_report(const KagomeTorus& torus, const PrepConfig& config,
                                   const SamplingOptions& opts);

ProjectorValues projector_expectations(const KagomeTorus& torus, const State& state,
                                       ProjectorChoice choice = ProjectorChoice::Lowest);
// per-setting word samples (bit v = vertex v), indexed by colour
ProjectorValues projector_expectations(const KagomeTorus& torus,
                                       const std::array<std::vector<std::uint64_t>, 3>& words,
                                       ProjectorChoice choice = ProjectorChoice::Lowest);

struct FidelityBounds {
  double lower = 0.0, upper = 0.0;
  double per_site_lower = 0.0, per_site_upper = 0.0;
};
FidelityBounds fidelity_bounds(double r, double g, double b, int n_sites);

// ---- colour star products against the logical Z parities ----

enum class ConstraintMode { Exhaustive, Randomized };

struct ConstraintExample {
  std::uint64_t x = 0;
  std::vector<int> ones;
  int negative_cz = 0;  // CZ factors of prod_{red s} A_s evaluating to -1
  int lhs = 1, rhs = 1;
};

// Minimal-weight basis state with one blue winding string flipping Z_BV and one green winding
// string flipping Z_GH; ties go to the fewest -1 CZ factors (strings crossing at one star),
// then the lowest index.
ConstraintExample crossing_example(const KagomeTorus& torus);

// Three-way check per basis state and colour: operator composition, CZ sign counting and the
// logical-parity formula. Raises ConstraintViolation on any disagreement.
ExperimentReport constraint_check(const KagomeTorus& torus,
                                  ConstraintMode mode = ConstraintMode::Exhaustive,
                                  int samples = 20000, std::uint64_t seed = 1);

std::vector<SectorSpec> enumerate_sectors();

std::vector<ExperimentReport> all_ground_states(const KagomeTorus& torus, Mode mode,
                                                const SamplingOptions& opts = {});

// psi0 followed by X_GV X_RH, or any other pair of logicals
ExperimentReport single_anyon(const KagomeTorus& torus, Mode mode = Mode::Exact,
                              const SamplingOptions& opts = {});
std::unique_ptr<State> apply_logical_x(const KagomeTorus& torus, const State& state,
                                       const std::vector<std::pair<Color, Direction>>& loops);

enum class Ensemble { Gaussian, Product };
const char* ensemble_name(Ensemble e);
Ensemble parse_ensemble(const std::string& s);

// histogram over the 64 logical patterns in series "counts" (index = SectorSpec::index)
ExperimentReport degeneracy_scan(const KagomeTorus& torus, int trials, std::uint64_t seed,
                                 Ensemble ensemble = Ensemble::Gaussian);
double chi_square_p_value(double chi2, int dof);

}  // namespace d4
