#pragma once

#include <string>
#include <vector>

#include "d4/anyons.hpp"
#include "d4/error.hpp"
#include "d4/experiments.hpp"
#include "d4/lattice.hpp"
#include "d4/noise.hpp"
#include "d4/prep.hpp"
#include "d4/program.hpp"
#include "json.hpp"

namespace d4 {

using json = nlohmann::json;

json to_json(const NoiseModel& m);
// keys absent from j keep the values of `base`; unknown keys raise InvalidArgument
NoiseModel noise_from_json(const json& j, NoiseModel base = {});

json to_json(const SectorSpec& s);
SectorSpec sector_from_json(const json& j);  // "010001" or {"bits": ...} or {"z": [...]}

json to_json(const CostReport& c);
json to_json(const PrepConfig& c);
PrepConfig prep_config_from_json(const json& j, PrepConfig base = {});

json to_json(const Instruction& in);
json to_json(const Program& p);
json to_json(const KagomeTorus& t);

json to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const json& j);

// one row per report: sector bits, every <A_s>, every <B_t>, six logicals, energy density, pinning
std::string reports_csv(const std::vector<ExperimentReport>& reports);

json to_json(const anyons::ModularData& md);

json error_json(const Error& e);
int exit_code(const Error& e);  // usage 2, resource 3, internal 4

}  // namespace d4
