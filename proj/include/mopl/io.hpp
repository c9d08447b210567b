// Copyright 2025 The mopl authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOPL_IO_HPP_
#define MOPL_IO_HPP_

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "mopl/learner.hpp"
#include "mopl/simulation.hpp"

namespace mopl {

// File-system failures, as opposed to validation failures; the CLI maps
// these to exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

struct DatasetMeta {
  std::size_t d = 0;
  std::optional<Policy> logging_policy;
  std::string created_by;
  int schema_version = 1;
};

// --- enum <-> string names used across files and the CLI ---
std::string to_string(EstimatorKind kind);       // "ips" / "snips"
std::string to_string(EssMethod method);         // "clt", "p2", "p2r", ...
std::string to_string(CodFamily family);         // "uniform" / "normal"
EstimatorKind estimator_kind_from_string(const std::string& name);
EssMethod ess_method_from_string(const std::string& name);

// Shortest round-trip decimal form; infinities render as "inf"/"-inf".
std::string format_double(double value);

// --- policy descriptors ---
nlohmann::json policy_to_json(const Policy& policy);
Policy policy_from_json(const nlohmann::json& j);

// --- dataset files: JSON meta + JSON-lines data ---
// Data lines look like {"action":[...],"reward":r,"logging_density":p} with
// reals at 17 significant digits, so write -> read is value-exact and a
// rewrite of the same dataset is byte-identical.
LoggedDataset read_dataset(const std::string& data_path,
                           const std::string& meta_path);
void write_dataset(const LoggedDataset& dataset, const std::string& data_path,
                   const std::string& meta_path);
DatasetMeta read_dataset_meta(const std::string& meta_path);

// --- reports and learning artifacts ---
nlohmann::json report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::json& j);
nlohmann::json learn_result_to_json(const LearnResult& result);

// --- run configs (seed mandatory for randomised runs) ---
CoverageConfig coverage_config_from_json(const nlohmann::json& j);
CodConfig cod_config_from_json(const nlohmann::json& j);
// CrmConfig mirror plus optional "init"; kernel given as "kernel_sigmas"
// (per-dimension list) or "kernel_sigma" (isotropic, needs d).
std::pair<CrmConfig, std::optional<ActionVector>> crm_config_from_json(
    const nlohmann::json& j, std::size_t d);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// --- CSV tables (header row, '.' decimals, LF line ends) ---
std::string coverage_table_csv(const std::vector<CoverageRow>& rows);
std::string reduction_table_csv(const std::vector<ReductionRow>& rows);
std::string cod_cdf_csv(const std::vector<CodCdfRow>& rows);
std::string cod_mass_csv(const std::vector<CodMassRow>& rows);
std::vector<CoverageRow> coverage_table_from_csv(const std::string& text);

}  // namespace mopl

#endif  // MOPL_IO_HPP_
