#include "d4/serialize.hpp"

#include <iomanip>
#include <set>
#include <sstream>

namespace d4 {

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k))
      throw Error(ErrorCode::InvalidArgument, std::string("unknown ") + what + " key '" + k + "'");
}

template <class T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad value for '") + key + "': " + e.what());
  }
}

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"stderr", e.stderr_}}; }

Estimate estimate_from(const json& j) {
  return {j.at("value").get<double>(), j.at("stderr").get<double>()};
}

const char* slot_name(int k) {
  static const char* names[6] = {"RH", "GH", "BH", "RV", "GV", "BV"};
  return names[k];
}

std::string gauss_string(anyons::Gauss g) { return anyons::to_string(g); }

}  // namespace

json to_json(const NoiseModel& m) {
  return {{"p_depol2", m.p_depol2},
          {"p_read_0given1", m.p_read_0given1},
          {"p_read_1given0", m.p_read_1given0},
          {"gate_enabled", m.gate_enabled},
          {"readout_enabled", m.readout_enabled}};
}

NoiseModel noise_from_json(const json& j, NoiseModel base) {
  reject_unknown(j, {"p_depol2", "p_read_0given1", "p_read_1given0", "gate_enabled", "readout_enabled"},
                 "noise");
  take(j, "p_depol2", base.p_depol2);
  take(j, "p_read_0given1", base.p_read_0given1);
  take(j, "p_read_1given0", base.p_read_1given0);
  take(j, "gate_enabled", base.gate_enabled);
  take(j, "readout_enabled", base.readout_enabled);
  base.validate();
  return base;
}

json to_json(const SectorSpec& s) {
  return {{"bits", s.bits()}, {"z", s.z}, {"admissible", s.admissible()}};
}

SectorSpec sector_from_json(const json& j) {
  if (j.is_string()) return SectorSpec::from_bits(j.get<std::string>());
  if (j.is_object() && j.contains("bits")) return SectorSpec::from_bits(j.at("bits").get<std::string>());
  if (j.is_object() && j.contains("z")) {
    SectorSpec s;
    auto z = j.at("z").get<std::vector<int>>();
    if (z.size() != 6) throw Error(ErrorCode::InvalidArgument, "sector needs six signs");
    for (int k = 0; k < 6; ++k) {
      if (z[k] != 1 && z[k] != -1) throw Error(ErrorCode::InvalidArgument, "sector signs must be +-1");
      s.z[k] = z[k];
    }
    return s;
  }
  throw Error(ErrorCode::InvalidArgument, "sector must be a bit string or an object");
}

json to_json(const CostReport& c) {
  return {{"two_qubit_gates", c.two_qubit_gates},
          {"one_qubit_gates", c.one_qubit_gates},
          {"peak_register", c.peak_register},
          {"depth", c.depth},
          {"measurements", c.measurements}};
}

json to_json(const PrepConfig& c) {
  json forced = json::object();
  for (auto [s, b] : c.forced) forced[std::to_string(s)] = b;
  return {{"lx", c.lx},
          {"ly", c.ly},
          {"variant", variant_name(c.variant)},
          {"sector", c.sector.bits()},
          {"seed", c.seed},
          {"noise", c.noise ? to_json(*c.noise) : json(nullptr)},
          {"discard_on_odd_herald", c.discard_on_odd_herald},
          {"error_on_herald", c.error_on_herald},
          {"register_cap", c.register_cap},
          {"forced", forced},
          {"feed_forward", c.feed_forward == FeedForwardMode::Dynamic ? "dynamic" : "static"},
          {"sector_method", c.sector_method == SectorMethod::Loops ? "loops" : "basis"},
          {"backend", backend_name(c.backend)},
          {"precision", precision_name(c.precision)},
          {"threads", c.threads}};
}

PrepConfig prep_config_from_json(const json& j, PrepConfig base) {
  reject_unknown(j,
                 {"lx", "ly", "variant", "sector", "seed", "noise", "discard_on_odd_herald",
                  "error_on_herald", "register_cap", "forced", "feed_forward", "sector_method",
                  "backend", "precision", "threads"},
                 "config");
  take(j, "lx", base.lx);
  take(j, "ly", base.ly);
  take(j, "seed", base.seed);
  take(j, "discard_on_odd_herald", base.discard_on_odd_herald);
  take(j, "error_on_herald", base.error_on_herald);
  take(j, "register_cap", base.register_cap);
  take(j, "threads", base.threads);
  if (j.contains("variant")) base.variant = parse_variant(j.at("variant").get<std::string>());
  if (j.contains("sector")) base.sector = sector_from_json(j.at("sector"));
  if (j.contains("noise")) {
    if (j.at("noise").is_null())
      base.noise.reset();
    else
      base.noise = noise_from_json(j.at("noise"), base.noise.value_or(NoiseModel{}));
  }
  if (j.contains("forced")) {
    base.forced.clear();
    for (const auto& [k, v] : j.at("forced").items()) {
      int bit = v.get<int>();
      if (bit != 0 && bit != 1) throw Error(ErrorCode::InvalidArgument, "forced outcomes are bits");
      base.forced[std::stoi(k)] = bit;
    }
  }
  if (j.contains("feed_forward")) {
    auto s = j.at("feed_forward").get<std::string>();
    if (s != "dynamic" && s != "static")
      throw Error(ErrorCode::InvalidArgument, "feed_forward is 'dynamic' or 'static'");
    base.feed_forward = s == "dynamic" ? FeedForwardMode::Dynamic : FeedForwardMode::Static;
  }
  if (j.contains("sector_method")) {
    auto s = j.at("sector_method").get<std::string>();
    if (s != "loops" && s != "basis")
      throw Error(ErrorCode::InvalidArgument, "sector_method is 'loops' or 'basis'");
    base.sector_method = s == "loops" ? SectorMethod::Loops : SectorMethod::Basis;
  }
  if (j.contains("backend")) base.backend = parse_backend(j.at("backend").get<std::string>());
  if (j.contains("precision")) base.precision = parse_precision(j.at("precision").get<std::string>());
  return base;
}

json to_json(const Instruction& in) {
  json j = {{"op", op_name(in.op)}};
  if (!in.qubits.empty()) j["qubits"] = in.qubits;
  if (!in.controls.empty()) j["controls"] = in.controls;
  if (in.op == Op::ZZPhase || in.op == Op::ZZZPhase) j["theta"] = in.theta;
  if (in.op == Op::Alloc) j["plus"] = in.plus;
  if (!in.label.empty()) j["label"] = in.label;
  if (!in.condition.empty()) j["condition"] = in.condition;
  if (in.body) j["body"] = to_json(*in.body);
  return j;
}

json to_json(const Program& p) {
  json arr = json::array();
  for (const auto& in : p.ins) arr.push_back(to_json(in));
  return arr;
}

json to_json(const KagomeTorus& t) {
  json stars = json::array();
  for (int s = 0; s < t.num_stars(); ++s) {
    auto c = t.star_coord(s);
    stars.push_back({{"index", s},
                     {"i", c.i},
                     {"j", c.j},
                     {"color", std::string(1, color_char(t.star_color(s)))},
                     {"hexagon", t.hexagon(s)},
                     {"tips", t.tips(s)}});
  }
  json tris = json::array();
  for (int k = 0; k < t.num_triangles(); ++k) {
    const auto& tr = t.triangle(k);
    tris.push_back({{"index", k},
                    {"star", tr.star},
                    {"color", std::string(1, color_char(tr.color))},
                    {"vertices", tr.vertices}});
  }
  return {{"lx", t.lx()},        {"ly", t.ly()},     {"twist", t.twist()},
          {"num_vertices", t.num_vertices()}, {"stars", stars}, {"triangles", tris}};
}

json to_json(const ExperimentReport& r) {
  json stars = json::array(), tris = json::array(), logicals = json::object(), scalars = json::object();
  for (const auto& e : r.stars) stars.push_back(estimate_json(e));
  for (const auto& e : r.triangles) tris.push_back(estimate_json(e));
  for (int k = 0; k < 6; ++k) logicals[slot_name(k)] = estimate_json(r.logicals[k]);
  for (const auto& [k, e] : r.scalars) scalars[k] = estimate_json(e);
  json series = json::object();
  for (const auto& [k, v] : r.series) series[k] = v;
  return {{"schema_version", kReportSchemaVersion},
          {"experiment", r.experiment},
          {"torus", {{"lx", r.lx}, {"ly", r.ly}}},
          {"mode", mode_name(r.mode)},
          {"sector", r.sector ? to_json(*r.sector) : json(nullptr)},
          {"stars", stars},
          {"triangles", tris},
          {"logicals", logicals},
          {"scalars", scalars},
          {"series", series},
          {"shots", r.shots},
          {"discarded", r.discarded},
          {"seed", r.seed},
          {"noise", r.noise ? to_json(*r.noise) : json(nullptr)}};
}

ExperimentReport report_from_json(const json& j) {
  if (j.at("schema_version").get<int>() != kReportSchemaVersion)
    throw Error(ErrorCode::InvalidArgument, "unsupported report schema version");
  ExperimentReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.lx = j.at("torus").at("lx").get<int>();
  r.ly = j.at("torus").at("ly").get<int>();
  r.mode = parse_mode(j.at("mode").get<std::string>());
  if (!j.at("sector").is_null()) r.sector = sector_from_json(j.at("sector"));
  for (const auto& e : j.at("stars")) r.stars.push_back(estimate_from(e));
  for (const auto& e : j.at("triangles")) r.triangles.push_back(estimate_from(e));
  for (int k = 0; k < 6; ++k) r.logicals[k] = estimate_from(j.at("logicals").at(slot_name(k)));
  for (const auto& [k, e] : j.at("scalars").items()) r.scalars[k] = estimate_from(e);
  for (const auto& [k, v] : j.at("series").items()) r.series[k] = v.get<std::vector<double>>();
  r.shots = j.at("shots").get<int>();
  r.discarded = j.at("discarded").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("noise").is_null()) r.noise = noise_from_json(j.at("noise"));
  return r;
}

std::string reports_csv(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  os << std::setprecision(10);
  std::size_t ns = 0, nt = 0;
  for (const auto& r : reports) {
    ns = std::max(ns, r.stars.size());
    nt = std::max(nt, r.triangles.size());
  }
  os << "experiment,sector";
  for (std::size_t s = 0; s < ns; ++s) os << ",A" << s << ",A" << s << "_err";
  for (std::size_t t = 0; t < nt; ++t) os << ",B" << t << ",B" << t << "_err";
  for (int k = 0; k < 6; ++k) os << ",Z_" << slot_name(k) << ",Z_" << slot_name(k) << "_err";
  os << ",energy_density,energy_density_err,pinning,pinning_err\n";
  for (const auto& r : reports) {
    os << r.experiment << "," << (r.sector ? r.sector->bits() : "");
    for (std::size_t s = 0; s < ns; ++s) {
      if (s < r.stars.size())
        os << "," << r.stars[s].value << "," << r.stars[s].stderr_;
      else
        os << ",,";
    }
    for (std::size_t t = 0; t < nt; ++t) {
      if (t < r.triangles.size())
        os << "," << r.triangles[t].value << "," << r.triangles[t].stderr_;
      else
        os << ",,";
    }
    for (int k = 0; k < 6; ++k) os << "," << r.logicals[k].value << "," << r.logicals[k].stderr_;
    for (const char* key : {"energy_density", "pinning"}) {
      auto it = r.scalars.find(key);
      if (it != r.scalars.end())
        os << "," << it->second.value << "," << it->second.stderr_;
      else
        os << ",,";
    }
    os << "\n";
  }
  return os.str();
}

json to_json(const anyons::ModularData& md) {
  json s8 = json::array(), t = json::array();
  for (const auto& row : md.s8) {
    json r = json::array();
    for (auto g : row) r.push_back(gauss_string(g));
    s8.push_back(r);
  }
  for (auto g : md.t) t.push_back(gauss_string(g));
  return {{"labels", md.names}, {"dims", md.dims}, {"S_times_8", s8}, {"T", t}};
}

json error_json(const Error& e) {
  const char* cls = "usage";
  if (error_class(e.code()) == ErrorClass::Resource) cls = "resource";
  if (error_class(e.code()) == ErrorClass::Internal) cls = "internal";
  return {{"error", error_name(e.code())}, {"class", cls}, {"message", e.what()}, {"exit_code", exit_code(e)}};
}

int exit_code(const Error& e) {
  switch (error_class(e.code())) {
    case ErrorClass::Resource:
      return 3;
    case ErrorClass::Internal:
      return 4;
    default:
      return 2;
  }
}

}  // namespace d4
