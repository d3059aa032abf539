#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "d4/anyons.hpp"
#include "d4/experiments.hpp"
#include "d4/modelops.hpp"
#include "d4/prep.hpp"
#include "d4/serialize.hpp"

namespace py = pybind11;
using namespace d4;

// Everything crosses the boundary as JSON text; the Python package decodes it.
namespace {

std::string prepare_json(int lx, int ly, const std::string& variant, const std::string& sector,
                         std::uint64_t seed, const std::map<int, int>& forced, const std::string& mode,
                         int shots) {
  auto t = KagomeTorus::build(lx, ly);
  PrepConfig cfg;
  cfg.lx = lx;
  cfg.ly = ly;
  cfg.variant = parse_variant(variant);
  cfg.sector = SectorSpec::from_bits(sector);
  cfg.seed = seed;
  cfg.forced = forced;
  auto r = prepare(t, cfg);
  SamplingOptions opts;
  opts.shots = shots;
  opts.seed = seed;
  auto rep = parse_mode(mode) == Mode::Exact ? exact_report(t, *r.state, cfg.sector)
                                             : sampled_report(t, *r.state, cfg.sector, opts);
  rep.experiment = "prepare";
  rep.seed = seed;
  json out = {{"cost", to_json(r.cost)}, {"herald", r.herald}, {"admissible", r.admissible},
              {"ancilla_outcomes", r.outcomes}, {"report", to_json(rep)}};
  return out.dump();
}

std::string cost_json(int lx, int ly, const std::string& variant) {
  auto t = KagomeTorus::build(lx, ly);
  return to_json(compile_prep(t, parse_variant(variant)).cost).dump();
}

std::string sectors_json() {
  json arr = json::array();
  for (const auto& s : enumerate_sectors())
    arr.push_back({{"bits", s.bits()}, {"admissible", s.admissible()}});
  return arr.dump();
}

std::string borromean_json(int lx, int ly, const std::string& variant) {
  auto t = KagomeTorus::build(lx, ly);
  auto psi0 = ground_state(t);
  auto e = borromean_exact(t, *psi0, parse_borromean_variant(variant));
  return json{{"re", e.value.real()}, {"im", e.value.imag()}, {"phase", e.phase}}.dump();
}

std::string degeneracy_json(int lx, int ly, int trials, std::uint64_t seed) {
  auto t = KagomeTorus::build(lx, ly);
  return to_json(degeneracy_scan(t, trials, seed)).dump();
}

std::string bounds_json(double r, double g, double b, int n) {
  auto f = fidelity_bounds(r, g, b, n);
  return json{{"lower", f.lower},
              {"upper", f.upper},
              {"per_site_lower", f.per_site_lower},
              {"per_site_upper", f.per_site_upper}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<Error>(m, "D4Error", PyExc_RuntimeError);
  m.attr("SCHEMA_VERSION") = kReportSchemaVersion;
  m.def("torus", [](int lx, int ly) { return to_json(KagomeTorus::build(lx, ly)).dump(); });
  m.def("prepare", &prepare_json, py::arg("lx"), py::arg("ly"), py::arg("variant"),
        py::arg("sector"), py::arg("seed"), py::arg("forced"), py::arg("mode"), py::arg("shots"));
  m.def("cost", &cost_json);
  m.def("sectors", &sectors_json);
  m.def("borromean", &borromean_json);
  m.def("degeneracy_scan", &degeneracy_json);
  m.def("fidelity_bounds", &bounds_json);
  m.def("anyon_table", [] { return to_json(anyons::modular_data()).dump(); });
  m.def("fuse", [](const std::string& a, const std::string& b) {
    return anyons::fusion_string(anyons::fuse(anyons::parse_anyon(a), anyons::parse_anyon(b)));
  });
}
