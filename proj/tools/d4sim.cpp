#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "d4/anyons.hpp"
#include "d4/engine.hpp"
#include "d4/error.hpp"
#include "d4/experiments.hpp"
#include "d4/modelops.hpp"
#include "d4/parallel.hpp"
#include "d4/prep.hpp"
#include "d4/serialize.hpp"

using namespace d4;

namespace {

struct RunConfig {
  std::string command;
  std::string size = "3x3";
  std::string variant = "compiled";
  std::string sector = "000000";
  std::string mode = "exact";
  int shots = 500;
  std::uint64_t seed = 1;
  std::string noise_file;
  bool noisy = false;
  bool mitigate = false;
  std::string output;
  std::string csv;
  std::string precision = "c128";
  std::string backend = "sparse";
  int threads = 0;
  std::string force;
  bool dry_run = false;
  // per-command
  std::string braid = "fusion";
  std::string borromean = "rgb";
  std::string schedule = "blocked";
  int trials = 2200;
  std::string ensemble = "gaussian";
  bool list = false;
  double r = -1, g = -1, b = -1;
  int sites = 27;
  std::vector<std::string> fuse;
};

json run_config_json(const RunConfig& c) {
  return {{"command", c.command}, {"size", c.size},         {"variant", c.variant},
          {"sector", c.sector},   {"mode", c.mode},         {"shots", c.shots},
          {"seed", c.seed},       {"noisy", c.noisy},       {"mitigate", c.mitigate},
          {"precision", c.precision}, {"backend", c.backend}, {"threads", c.threads}};
}

std::pair<int, int> parse_size(const std::string& s) {
  std::smatch m;
  static const std::regex re(R"((\d+)x(\d+))");
  if (!std::regex_match(s, m, re))
    throw Error(ErrorCode::InvalidArgument, "size must look like 3x3, got '" + s + "'");
  return {std::stoi(m[1]), std::stoi(m[2])};
}

KagomeTorus make_torus(const RunConfig& c) {
  auto [lx, ly] = parse_size(c.size);
  return KagomeTorus::build(lx, ly);
}

std::optional<NoiseModel> noise_of(const RunConfig& c) {
  if (!c.noise_file.empty()) {
    std::ifstream in(c.noise_file);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read noise file " + c.noise_file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, std::string("noise file: ") + e.what());
    }
    return noise_from_json(j);
  }
  if (c.noisy) return NoiseModel{};
  return std::nullopt;
}

// "all0", "all1" or "0=1,4=0"
std::map<int, int> parse_forced(const std::string& s, int num_stars) {
  std::map<int, int> out;
  if (s.empty()) return out;
  if (s == "all0" || s == "all1") {
    for (int k = 0; k < num_stars; ++k) out[k] = s == "all1";
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "forced outcome '" + item + "' needs star=bit");
    int star = std::stoi(item.substr(0, eq));
    int bit = std::stoi(item.substr(eq + 1));
    if (bit != 0 && bit != 1) throw Error(ErrorCode::InvalidArgument, "forced outcomes are bits");
    out[star] = bit;
  }
  return out;
}

PrepConfig prep_config(const RunConfig& c, const KagomeTorus& t) {
  PrepConfig p;
  p.lx = t.lx();
  p.ly = t.ly();
  p.variant = parse_variant(c.variant);
  p.sector = SectorSpec::from_bits(c.sector);
  p.seed = c.seed;
  p.noise = noise_of(c);
  p.backend = parse_backend(c.backend);
  p.precision = parse_precision(c.precision);
  p.threads = c.threads;
  p.forced = parse_forced(c.force, t.num_stars());
  for (auto [s, bit] : p.forced) t.check_star(s);
  return p;
}

SamplingOptions sampling(const RunConfig& c) {
  SamplingOptions o;
  o.shots = c.shots;
  o.seed = c.seed;
  o.noise = noise_of(c);
  o.mitigate = c.mitigate;
  return o;
}

void memory_check(const RunConfig& c, int peak) {
  Backend b = parse_backend(c.backend);
  if (b == Backend::Dense) {
    std::size_t need = dense_bytes(peak, parse_precision(c.precision));
    std::size_t have = available_memory();
    std::cerr << "memory estimate: " << need << " bytes for a dense " << peak << "-qubit register ("
              << have << " available)\n";
    if (need > have)
      throw Error(ErrorCode::MemoryLimit, "dense register of " + std::to_string(peak) +
                                              " qubits needs " + std::to_string(need) + " bytes");
  } else {
    std::cerr << "memory estimate: sparse backend, peak register " << peak << " qubits\n";
  }
}

json cmd_prepare(const RunConfig& c, std::vector<ExperimentReport>& tables) {
  auto t = make_torus(c);
  auto cfg = prep_config(c, t);
  auto compiled = compile_prep(t, cfg.variant);
  json out = {{"cost", to_json(compiled.cost)}, {"variant", variant_name(cfg.variant)}};
  if (c.dry_run) {
    out["dry_run"] = true;
    return out;
  }
  memory_check(c, compiled.cost.peak_register);
  Mode mode = parse_mode(c.mode);
  if (mode == Mode::Sampled && cfg.noise && cfg.noise->any()) {
    auto rep = noisy_prep_report(t, cfg, sampling(c));
    rep.experiment = "prepare";
    out["report"] = to_json(rep);
    tables.push_back(rep);
    return out;
  }
  auto r = prepare(t, cfg);
  out["herald"] = r.herald;
  out["admissible"] = r.admissible;
  out["ancilla_outcomes"] = r.outcomes;
  ExperimentReport rep = mode == Mode::Exact ? exact_report(t, *r.state, cfg.sector)
                                             : sampled_report(t, *r.state, cfg.sector, sampling(c));
  rep.experiment = "prepare";
  rep.seed = c.seed;
  rep.noise = cfg.noise;
  out["report"] = to_json(rep);
  tables.push_back(rep);
  return out;
}

json cmd_stabilizers(const RunConfig& c, std::vector<ExperimentReport>& tables) {
  auto t = make_torus(c);
  auto cfg = prep_config(c, t);
  if (cfg.forced.empty())
    for (int s = 0; s < t.num_stars(); ++s) cfg.forced[s] = 0;
  auto state = std::move(prepare(t, cfg).state);
  Mode mode = parse_mode(c.mode);
  auto rep = mode == Mode::Exact ? exact_report(t, *state, cfg.sector)
                                 : sampled_report(t, *state, cfg.sector, sampling(c));
  rep.experiment = "stabilizers";
  tables.push_back(rep);
  return {{"torus", to_json(t)}, {"report", to_json(rep)}};
}

json snapshot_json(const StabilizerSnapshot& s) {
  return {{"stars", s.stars}, {"triangles", s.triangles}};
}

json cmd_braid(const RunConfig& c) {
  auto t = make_torus(c);
  BraidSpec spec;
  if (c.braid == "fusion")
    spec = fusion_braid();
  else if (c.braid == "ring")
    spec = ring_braid();
  else
    throw Error(ErrorCode::InvalidArgument, "braid is 'fusion' or 'ring'");
  auto psi0 = ground_state(t);
  auto run = run_braid(t, *psi0, spec);
  json snaps = json::object();
  for (const auto& [name, s] : run.snapshots) snaps[name] = snapshot_json(s);
  auto final_snap = stabilizer_snapshot(t, *run.state);
  std::vector<int> negative;
  for (int s = 0; s < t.num_stars(); ++s)
    if (final_snap.stars[s] < -0.5) negative.push_back(s);
  json neg_colors = json::array();
  for (int s : negative) neg_colors.push_back(std::string(1, color_char(t.star_color(s))));
  return {{"braid", c.braid},
          {"checkpoints", snaps},
          {"final", snapshot_json(final_snap)},
          {"fidelity_to_ground_state", fidelity(*psi0, *run.state)},
          {"negative_stars", negative},
          {"negative_star_colors", neg_colors}};
}

json cmd_borromean(const RunConfig& c) {
  auto t = make_torus(c);
  auto v = parse_borromean_variant(c.borromean);
  auto psi0 = ground_state(t);
  PhaseEstimate e;
  if (parse_mode(c.mode) == Mode::Exact) {
    e = borromean_exact(t, *psi0, v);
  } else {
    Schedule sch = c.schedule == "interleaved" ? Schedule::Interleaved : Schedule::Blocked;
    e = borromean_hadamard(t, *psi0, v, c.shots, c.seed, sch);
  }
  return {{"variant", borromean_variant_name(v)},
          {"mode", c.mode},
          {"re", e.value.real()},
          {"im", e.value.imag()},
          {"re_err", e.re_err},
          {"im_err", e.im_err},
          {"r", e.r},
          {"phase", e.phase},
          {"phase_over_pi", e.phase / std::numbers::pi},
          {"phase_err", e.phase_err},
          {"shots", e.shots},
          {"algebraic_value", v == BorromeanVariant::RGB ? anyons::borromean_phase().real() : 1.0}};
}

json cmd_sectors(const RunConfig& c, std::vector<ExperimentReport>& tables) {
  json list = json::array();
  int admissible = 0;
  for (const auto& s : enumerate_sectors()) {
    list.push_back(to_json(s));
    admissible += s.admissible();
    if (c.list)
      std::cerr << s.bits() << " " << (s.admissible() ? "admissible" : "inadmissible") << "\n";
  }
  json out = {{"sectors", list}, {"admissible", admissible}, {"inadmissible", 64 - admissible}};
  if (c.list) return out;
  auto t = make_torus(c);
  auto reps = all_ground_states(t, parse_mode(c.mode), sampling(c));
  json arr = json::array();
  double e = 0, p = 0;
  for (auto& r : reps) {
    arr.push_back(to_json(r));
    e += r.scalars.at("energy_density").value;
    p += r.scalars.at("pinning").value;
    tables.push_back(r);
  }
  out["ground_states"] = arr;
  out["mean_energy_density"] = e / reps.size();
  out["mean_pinning"] = p / reps.size();
  return out;
}

json cmd_single_anyon(const RunConfig& c, std::vector<ExperimentReport>& tables) {
  auto t = make_torus(c);
  auto rep = single_anyon(t, parse_mode(c.mode), sampling(c));
  tables.push_back(rep);
  return {{"report", to_json(rep)}};
}

json cmd_degeneracy(const RunConfig& c) {
  auto t = make_torus(c);
  auto rep = degeneracy_scan(t, c.trials, c.seed, parse_ensemble(c.ensemble));
  return {{"report", to_json(rep)}, {"ensemble", c.ensemble}};
}

json cmd_fidelity(const RunConfig& c) {
  if (c.r >= 0 || c.g >= 0 || c.b >= 0) {
    auto f = fidelity_bounds(c.r, c.g, c.b, c.sites);
    return {{"inputs", {{"R", c.r}, {"G", c.g}, {"B", c.b}, {"n_sites", c.sites}}},
            {"lower", f.lower},
            {"upper", f.upper},
            {"per_site_lower", f.per_site_lower},
            {"per_site_upper", f.per_site_upper}};
  }
  auto t = make_torus(c);
  auto cfg = prep_config(c, t);
  ExperimentReport rep;
  if (parse_mode(c.mode) == Mode::Sampled && cfg.noise && cfg.noise->any()) {
    rep = noisy_prep_report(t, cfg, sampling(c));
  } else {
    if (cfg.forced.empty())
      for (int s = 0; s < t.num_stars(); ++s) cfg.forced[s] = 0;
    auto st = std::move(prepare(t, cfg).state);
    rep = parse_mode(c.mode) == Mode::Exact ? exact_report(t, *st, cfg.sector)
                                            : sampled_report(t, *st, cfg.sector, sampling(c));
  }
  json out;
  for (const char* k : {"projector_R", "projector_G", "projector_B", "fidelity_lower",
                        "fidelity_upper", "fidelity_per_site_lower"})
    out[k] = {{"value", rep.scalars.at(k).value}, {"stderr", rep.scalars.at(k).stderr_}};
  out["discarded"] = rep.discarded;
  return out;
}

json cmd_anyon_table(const RunConfig& c) {
  auto md = anyons::modular_data();
  json out = {{"modular_data", to_json(md)}};
  json dict = json::array();
  for (const auto& row : anyons::d4_dictionary())
    dict.push_back({{"conjugacy_class", row.conjugacy_class},
                    {"centralizer", row.centralizer},
                    {"irrep", row.irrep},
                    {"label", row.label},
                    {"dim", row.dim},
                    {"T", anyons::to_string(row.t)}});
  out["d4_dictionary"] = dict;
  if (c.fuse.size() == 2) {
    auto a = anyons::parse_anyon(c.fuse[0]);
    auto b = anyons::parse_anyon(c.fuse[1]);
    out["fusion"] = {{"a", c.fuse[0]}, {"b", c.fuse[1]},
                     {"result", anyons::fusion_string(anyons::fuse(a, b))}};
  }
  auto bp = anyons::braid_and_fuse(anyons::parse_anyon("m_G"), anyons::parse_anyon("m_B"));
  out["m_G_around_m_B"] = {{"first_pair", anyons::anyon_name(bp.first_pair)},
                           {"second_pair", anyons::anyon_name(bp.second_pair)}};
  return out;
}

struct Check {
  std::string name;
  bool ok;
};

json cmd_selftest(const RunConfig& c) {
  auto t = make_torus(c);
  std::vector<Check> checks;
  auto psi0 = ground_state(t);
  auto rep = exact_report(t, *psi0, SectorSpec{});
  bool ground = true;
  for (const auto& e : rep.stars) ground &= std::abs(e.value - 1.0) < 1e-10;
  for (const auto& e : rep.triangles) ground &= std::abs(e.value - 1.0) < 1e-10;
  for (const auto& e : rep.logicals) ground &= std::abs(e.value - 1.0) < 1e-10;
  checks.push_back({"ground_state_stabilized", ground});
  bool constraint = true;
  try {
    constraint_check(t);
  } catch (const Error&) {
    constraint = false;
  }
  checks.push_back({"star_logical_constraint", constraint});
  int admissible = 0;
  for (const auto& s : enumerate_sectors()) admissible += s.admissible();
  checks.push_back({"sector_count_22", admissible == 22});
  auto gs = all_ground_states(t, Mode::Exact);
  bool all_ok = gs.size() == 22;
  for (const auto& r : gs)
    all_ok &= std::abs(r.scalars.at("energy_density").value + 1.0) < 1e-10 &&
              std::abs(r.scalars.at("pinning").value - 1.0) < 1e-10;
  checks.push_back({"all_ground_states", all_ok});
  auto fuse_run = run_braid(t, *psi0, fusion_braid());
  checks.push_back({"pair_fusion_identity", fidelity(*psi0, *fuse_run.state) > 1 - 1e-10});
  auto bor = borromean_exact(t, *psi0, BorromeanVariant::RGB);
  checks.push_back({"borromean_phase_pi", std::abs(bor.value.real() + 1.0) < 1e-9});
  auto sa = single_anyon(t);
  checks.push_back({"single_anyon", sa.scalars.at("negative_stars").value == 1.0});
  auto deg = degeneracy_scan(t, 220, c.seed);
  checks.push_back({"degeneracy_forbidden_zero", deg.scalars.at("forbidden_counts").value == 0.0});
  json arr = json::array();
  bool pass = true;
  for (const auto& ch : checks) {
    arr.push_back({{"check", ch.name}, {"passed", ch.ok}});
    pass &= ch.ok;
  }
  if (!pass) {
    std::cout << json{{"checks", arr}, {"passed", false}}.dump(2) << "\n";
    throw Error(ErrorCode::Internal, "selftest failed");
  }
  return {{"checks", arr}, {"passed", true}};
}

void merge_config_file(const std::string& path, RunConfig& c, const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config file: ") + e.what());
  }
  auto given = [&](const std::string& flag) {
    for (const auto* sub : app.get_subcommands()) {
      const auto* opt = sub->get_option_no_throw("--" + flag);
      if (opt && opt->count() > 0) return true;
    }
    return false;
  };
  auto set = [&](const char* key, auto& field) {
    if (j.contains(key) && !given(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  static const std::set<std::string> known = {"size", "variant", "sector", "mode", "shots", "seed",
                                              "noise", "noisy", "mitigate", "precision", "backend",
                                              "threads", "trials", "ensemble"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw Error(ErrorCode::InvalidArgument, "unknown config key '" + k + "'");
  set("size", c.size);
  set("variant", c.variant);
  set("sector", c.sector);
  set("mode", c.mode);
  set("shots", c.shots);
  set("seed", c.seed);
  set("noisy", c.noisy);
  set("mitigate", c.mitigate);
  set("precision", c.precision);
  set("backend", c.backend);
  set("threads", c.threads);
  set("trials", c.trials);
  set("ensemble", c.ensemble);
  if (j.contains("noise") && !given("noise")) c.noise_file = j.at("noise").get<std::string>();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  if (const char* env = std::getenv("D4_THREADS")) c.threads = std::atoi(env);
  std::string config_file;

  CLI::App app{"Exact simulator for the twisted D4 quantum double on a kagome torus"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* sub, bool sampling_opts) {
    sub->add_option("--size", c.size, "torus size LxL (smallest valid: 3x3)");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("-o,--output", c.output, "output JSON path (default stdout)");
    sub->add_option("--config", config_file, "JSON config merged under the flags");
    sub->add_option("--threads", c.threads, "worker threads (default D4_THREADS or hardware)");
    if (sampling_opts) {
      sub->add_option("--mode", c.mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
      sub->add_option("--shots", c.shots, "shots per measurement setting");
      sub->add_option("--noise", c.noise_file, "noise model JSON file");
      sub->add_flag("--noisy", c.noisy, "use the default noise model");
      sub->add_flag("--mitigate", c.mitigate, "readout-corrected stabilizer estimators");
      sub->add_option("--csv", c.csv, "per-stabilizer CSV table");
    }
  };
  auto prep_opts = [&](CLI::App* sub) {
    sub->add_option("--variant", c.variant, "naive or compiled")->check(CLI::IsMember({"naive", "compiled"}));
    sub->add_option("--sector", c.sector, "target logical sector bits RH GH BH RV GV BV, bit = (1-Z)/2");
    sub->add_option("--precision", c.precision, "c64 or c128")->check(CLI::IsMember({"c64", "c128"}));
    sub->add_option("--backend", c.backend, "dense or sparse")->check(CLI::IsMember({"dense", "sparse"}));
    sub->add_option("--force-ancilla-outcomes", c.force, "all0, all1 or star=bit,...");
  };

  auto* prepare_cmd = app.add_subcommand("prepare", "run the adaptive preparation circuit");
  common(prepare_cmd, true);
  prep_opts(prepare_cmd);
  prepare_cmd->add_flag("--dry-run", c.dry_run, "report compiled costs only");

  auto* stab_cmd = app.add_subcommand("stabilizers", "stabilizer and logical expectation map");
  common(stab_cmd, true);
  prep_opts(stab_cmd);

  auto* braid_cmd = app.add_subcommand("braid", "create, move and fuse anyon pairs");
  common(braid_cmd, false);
  braid_cmd->add_option("--sequence", c.braid, "fusion or ring")->check(CLI::IsMember({"fusion", "ring"}));

  auto* bor_cmd = app.add_subcommand("borromean", "Borromean-ring braid phase");
  common(bor_cmd, true);
  bor_cmd->add_option("--variant", c.borromean, "rgb, rb or gb");
  bor_cmd->add_option("--schedule", c.schedule, "blocked or interleaved")
      ->check(CLI::IsMember({"blocked", "interleaved"}));

  auto* sec_cmd = app.add_subcommand("sectors", "logical sectors and the 22 ground states");
  common(sec_cmd, true);
  sec_cmd->add_flag("--list", c.list, "only list admissibility of the 64 sectors");

  auto* sa_cmd = app.add_subcommand("single-anyon", "X_GV X_RH on the ground state");
  common(sa_cmd, true);

  auto* deg_cmd = app.add_subcommand("degeneracy-scan", "random states projected to the ground space");
  common(deg_cmd, false);
  deg_cmd->add_option("--trials", c.trials, "number of trials");
  deg_cmd->add_option("--ensemble", c.ensemble, "gaussian or product")
      ->check(CLI::IsMember({"gaussian", "product"}));

  auto* fid_cmd = app.add_subcommand("fidelity-bound", "fidelity bounds from R, G, B projectors");
  common(fid_cmd, true);
  prep_opts(fid_cmd);
  fid_cmd->add_option("--R", c.r, "<R>");
  fid_cmd->add_option("--G", c.g, "<G>");
  fid_cmd->add_option("--B", c.b, "<B>");
  fid_cmd->add_option("--sites", c.sites, "number of sites for per-site bounds");

  auto* any_cmd = app.add_subcommand("anyon-table", "S, T, dimensions and fusion of the 22 anyons");
  common(any_cmd, false);
  any_cmd->add_option("--fuse", c.fuse, "two anyon labels to fuse")->expected(2);

  auto* self_cmd = app.add_subcommand("selftest", "exact-mode invariant suite");
  common(self_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << json{{"error", "UsageError"}, {"class", "usage"}, {"message", e.what()}, {"exit_code", 2}}
                     .dump(2)
              << "\n";
    return 2;
  }

  auto* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  try {
    if (!config_file.empty()) merge_config_file(config_file, c, app);
    if (c.threads < 0) throw Error(ErrorCode::InvalidArgument, "threads must be >= 0");
    if (c.shots < 1) throw Error(ErrorCode::InvalidArgument, "shots must be positive");
    std::vector<ExperimentReport> tables;
    json payload;
    if (c.command == "prepare") payload = cmd_prepare(c, tables);
    else if (c.command == "stabilizers") payload = cmd_stabilizers(c, tables);
    else if (c.command == "braid") payload = cmd_braid(c);
    else if (c.command == "borromean") payload = cmd_borromean(c);
    else if (c.command == "sectors") payload = cmd_sectors(c, tables);
    else if (c.command == "single-anyon") payload = cmd_single_anyon(c, tables);
    else if (c.command == "degeneracy-scan") payload = cmd_degeneracy(c);
    else if (c.command == "fidelity-bound") payload = cmd_fidelity(c);
    else if (c.command == "anyon-table") payload = cmd_anyon_table(c);
    else payload = cmd_selftest(c);
    json out = {{"schema_version", kReportSchemaVersion},
                {"command", c.command},
                {"config", run_config_json(c)},
                {"result", payload}};
    write_text(c.output, out.dump(2) + "\n");
    if (!c.csv.empty() && !tables.empty()) write_text(c.csv, reports_csv(tables));
    return 0;
  } catch (const Error& e) {
    std::cout << error_json(e).dump(2) << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cout << json{{"error", "Internal"}, {"class", "internal"}, {"message", e.what()}, {"exit_code", 4}}
                     .dump(2)
              << "\n";
    return 4;
  }
}
