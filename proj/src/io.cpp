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

#include "mopl/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mopl {

namespace {
using nlohmann::json;

[[noreturn]] void line_error(const std::string& path, std::size_t line,
                             const std::string& message) {
  throw std::invalid_argument(path + ", line " + std::to_string(line) + ": " +
                              message);
}

double json_double(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(std::string("missing or non-numeric field \"") +
                                key + "\"");
  }
  return j.at(key).get<double>();
}

std::vector<double> json_doubles(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw std::invalid_argument(std::string("missing or non-array field \"") +
                                key + "\"");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) {
      throw std::invalid_argument(std::string("field \"") + key +
                                  "\" must contain numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

// JSON has no literal for infinities; keep them as tagged strings so report
// files survive a round trip.
json double_to_json(double value) {
  if (std::isfinite(value)) return value;
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

double double_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number");
}

std::string format_17g(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::uint64_t json_seed(const json& j) {
  if (!j.contains("master_seed") ||
      !j.at("master_seed").is_number_integer()) {
    throw std::invalid_argument(
        "config requires an explicit integer \"master_seed\"");
  }
  return j.at("master_seed").get<std::uint64_t>();
}
}  // namespace

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::kIps ? "ips" : "snips";
}

std::string to_string(EssMethod method) {
  switch (method) {
    case EssMethod::kCltOnly: return "clt";
    case EssMethod::kP2: return "p2";
    case EssMethod::kP2R: return "p2r";
    case EssMethod::kDInf: return "dinf";
    case EssMethod::kDInfR: return "dinfr";
  }
  return "clt";
}

std::string to_string(CodFamily family) {
  return family == CodFamily::kUniform ? "uniform" : "normal";
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
  if (name == "ips") return EstimatorKind::kIps;
  if (name == "snips") return EstimatorKind::kSnips;
  throw std::invalid_argument("unknown estimator kind \"" + name +
                              "\" (expected ips|snips)");
}

EssMethod ess_method_from_string(const std::string& name) {
  if (name == "clt") return EssMethod::kCltOnly;
  if (name == "p2") return EssMethod::kP2;
  if (name == "p2r") return EssMethod::kP2R;
  if (name == "dinf") return EssMethod::kDInf;
  if (name == "dinfr") return EssMethod::kDInfR;
  throw std::invalid_argument("unknown ess method \"" + name +
                              "\" (expected clt|p2|p2r|dinf|dinfr)");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

json policy_to_json(const Policy& policy) {
  json j;
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IsotropicGaussian>) {
          j["type"] = "isotropic_gaussian";
          j["mean"] = p.mean;
          j["sigma"] = p.sigma;
        } else if constexpr (std::is_same_v<T, DiagonalGaussian>) {
          j["type"] = "diagonal_gaussian";
          j["mean"] = p.mean;
          j["sigmas"] = p.sigmas;
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          j["type"] = "uniform_box";
          j["low"] = p.low;
          j["high"] = p.high;
        } else {
          j["type"] = "deterministic";
          j["point"] = p.point;
        }
      },
      policy.variant());
  return j;
}

Policy policy_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw std::invalid_argument("policy descriptor needs a \"type\" string");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "isotropic_gaussian") {
    return Policy{
        IsotropicGaussian{json_doubles(j, "mean"), json_double(j, "sigma")}};
  }
  if (type == "diagonal_gaussian") {
    return Policy{
        DiagonalGaussian{json_doubles(j, "mean"), json_doubles(j, "sigmas")}};
  }
  if (type == "uniform_box") {
    return Policy{UniformBox{json_doubles(j, "low"), json_doubles(j, "high")}};
  }
  if (type == "deterministic") {
    return Policy{Deterministic{json_doubles(j, "point")}};
  }
  throw std::invalid_argument("unknown policy type \"" + type + "\"");
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

DatasetMeta read_dataset_meta(const std::string& meta_path) {
  json j = load_json_file(meta_path);
  DatasetMeta meta;
  if (!j.contains("schema_version") ||
      !j.at("schema_version").is_number_integer()) {
    throw std::invalid_argument(meta_path + ": missing schema_version");
  }
  meta.schema_version = j.at("schema_version").get<int>();
  if (meta.schema_version != 1) {
    throw std::invalid_argument(meta_path + ": unknown schema_version " +
                                std::to_string(meta.schema_version));
  }
  if (!j.contains("d") || !j.at("d").is_number_integer() ||
      j.at("d").get<long long>() <= 0) {
    throw std::invalid_argument(meta_path + ": d must be a positive integer");
  }
  meta.d = j.at("d").get<std::size_t>();
  if (j.contains("created_by") && j.at("created_by").is_string()) {
    meta.created_by = j.at("created_by").get<std::string>();
  }
  if (j.contains("logging_policy") && !j.at("logging_policy").is_null()) {
    meta.logging_policy = policy_from_json(j.at("logging_policy"));
    if (meta.logging_policy->dim() != meta.d) {
      throw std::invalid_argument(meta_path +
                                  ": logging_policy dimension disagrees with d");
    }
  }
  return meta;
}

LoggedDataset read_dataset(const std::string& data_path,
                           const std::string& meta_path) {
  DatasetMeta meta = read_dataset_meta(meta_path);
  std::ifstream in(data_path);
  if (!in) throw IoError("cannot open " + data_path);

  LoggedDataset dataset;
  dataset.d = meta.d;
  dataset.logging_policy = meta.logging_policy;

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      line_error(data_path, line_number, e.what());
    }
    LoggedSample sample;
    try {
      sample.action = json_doubles(j, "action");
      sample.reward = json_double(j, "reward");
      sample.logging_density = json_double(j, "logging_density");
    } catch (const std::invalid_argument& e) {
      line_error(data_path, line_number, e.what());
    }
    if (sample.action.size() != meta.d) {
      line_error(data_path, line_number,
                 "action has length " + std::to_string(sample.action.size()) +
                     ", expected " + std::to_string(meta.d));
    }
    if (!(sample.logging_density > 0.0)) {
      line_error(data_path, line_number,
                 "logging_density must be strictly positive");
    }
    dataset.samples.push_back(std::move(sample));
  }
  dataset.validate();
  return dataset;
}

void write_dataset(const LoggedDataset& dataset, const std::string& data_path,
                   const std::string& meta_path) {
  json meta;
  meta["schema_version"] = 1;
  meta["d"] = dataset.d;
  meta["created_by"] = "mopl";
  if (dataset.logging_policy.has_value()) {
    meta["logging_policy"] = policy_to_json(*dataset.logging_policy);
  }
  write_text_file(meta_path, meta.dump(2) + "\n");

  std::string data;
  data.reserve(dataset.size() * 64);
  for (const LoggedSample& s : dataset.samples) {
    data += "{\"action\":[";
    for (std::size_t k = 0; k < s.action.size(); ++k) {
      if (k > 0) data += ',';
      data += format_17g(s.action[k]);
    }
    data += "],\"reward\":";
    data += format_17g(s.reward);
    data += ",\"logging_density\":";
    data += format_17g(s.logging_density);
    data += "}\n";
  }
  write_text_file(data_path, data);
}

json report_to_json(const EvaluationReport& report) {
  json j;
  j["kind"] = to_string(report.kind);
  j["value"] = double_to_json(report.value);
  j["variance"] = double_to_json(report.variance);
  j["ess"] = double_to_json(report.ess);
  j["n_tilde"] = double_to_json(report.n_tilde);
  j["ci_low"] = double_to_json(report.ci_low);
  j["ci_high"] = double_to_json(report.ci_high);
  j["alpha"] = report.alpha;
  j["mean_weight"] = double_to_json(report.mean_weight);
  j["max_normalized_weight"] = double_to_json(report.max_normalized_weight);
  j["support_flag"] = report.support_flag;
  return j;
}

EvaluationReport report_from_json(const json& j) {
  EvaluationReport report;
  report.kind = estimator_kind_from_string(j.at("kind").get<std::string>());
  report.value = double_from_json(j.at("value"));
  report.variance = double_from_json(j.at("variance"));
  report.ess = double_from_json(j.at("ess"));
  report.n_tilde = double_from_json(j.at("n_tilde"));
  report.ci_low = double_from_json(j.at("ci_low"));
  report.ci_high = double_from_json(j.at("ci_high"));
  report.alpha = double_from_json(j.at("alpha"));
  report.mean_weight = double_from_json(j.at("mean_weight"));
  report.max_normalized_weight =
      double_from_json(j.at("max_normalized_weight"));
  report.support_flag = j.at("support_flag").get<bool>();
  return report;
}

json learn_result_to_json(const LearnResult& result) {
  json j;
  j["mu"] = result.mu;
  json trajectory = json::array();
  for (const TrajectoryPoint& p : result.trajectory) {
    trajectory.push_back({{"iteration", p.iteration},
                          {"objective", double_to_json(p.objective)},
                          {"grad_norm", double_to_json(p.grad_norm)}});
  }
  j["trajectory"] = std::move(trajectory);
  j["final_report"] = report_to_json(result.final_report);
  return j;
}

CoverageConfig coverage_config_from_json(const json& j) {
  CoverageConfig config;
  config.master_seed = json_seed(j);
  if (j.contains("d")) config.d = j.at("d").get<std::size_t>();
  if (j.contains("logging")) {
    config.logging = policy_from_json(j.at("logging"));
  } else if (config.d != config.logging.dim()) {
    config.logging =
        Policy{IsotropicGaussian{ActionVector(config.d, 0.0), 1.0}};
  }
  if (j.contains("target_mean")) config.target_mean = json_double(j, "target_mean");
  if (j.contains("target_sigmas")) {
    config.target_sigmas = json_doubles(j, "target_sigmas");
  }
  if (j.contains("sample_sizes")) {
    config.sample_sizes.clear();
    for (const auto& v : j.at("sample_sizes")) {
      config.sample_sizes.push_back(v.get<std::size_t>());
    }
  }
  if (j.contains("replications")) {
    config.replications = j.at("replications").get<std::size_t>();
  }
  if (j.contains("alpha")) config.alpha = json_double(j, "alpha");
  if (j.contains("kinds")) {
    config.kinds.clear();
    for (const auto& v : j.at("kinds")) {
      config.kinds.push_back(estimator_kind_from_string(v.get<std::string>()));
    }
  }
  if (j.contains("methods")) {
    config.methods.clear();
    for (const auto& v : j.at("methods")) {
      config.methods.push_back(ess_method_from_string(v.get<std::string>()));
    }
  }
  config.validate();
  return config;
}

CodConfig cod_config_from_json(const json& j) {
  CodConfig config;
  config.master_seed = json_seed(j);
  if (j.contains("dims")) {
    config.dims.clear();
    for (const auto& v : j.at("dims")) {
      config.dims.push_back(v.get<std::size_t>());
    }
  }
  if (j.contains("n_samples")) {
    config.n_samples = j.at("n_samples").get<std::size_t>();
  }
  if (j.contains("normal_sigma")) {
    config.normal_sigma = json_double(j, "normal_sigma");
  }
  if (j.contains("epsilons")) config.epsilons = json_doubles(j, "epsilons");
  config.validate();
  return config;
}

std::pair<CrmConfig, std::optional<ActionVector>> crm_config_from_json(
    const json& j, std::size_t d) {
  CrmConfig config;
  if (j.contains("kind")) {
    config.kind = estimator_kind_from_string(j.at("kind").get<std::string>());
  }
  if (j.contains("ess_method")) {
    config.method = ess_method_from_string(j.at("ess_method").get<std::string>());
  }
  if (j.contains("z")) config.z = json_double(j, "z");
  if (j.contains("kernel_sigmas")) {
    config.kernel.bandwidth_sigmas = json_doubles(j, "kernel_sigmas");
  } else if (j.contains("kernel_sigma")) {
    config.kernel =
        KernelConfig::isotropic(json_double(j, "kernel_sigma"), d);
  } else {
    throw std::invalid_argument(
        "learn config requires kernel_sigma or kernel_sigmas");
  }
  if (j.contains("step_size")) config.step_size = json_double(j, "step_size");
  if (j.contains("max_iters")) {
    config.max_iters = j.at("max_iters").get<std::size_t>();
  }
  if (j.contains("grad_tol")) config.grad_tol = json_double(j, "grad_tol");
  if (j.contains("fd_step")) config.fd_step = json_double(j, "fd_step");
  config.validate();
  if (config.kernel.bandwidth_sigmas.size() != d) {
    throw std::invalid_argument("learn config kernel dimension differs from d");
  }
  std::optional<ActionVector> init;
  if (j.contains("init")) init = json_doubles(j, "init");
  return {config, init};
}

std::string coverage_table_csv(const std::vector<CoverageRow>& rows) {
  std::string out = "kind,method,target_sigma,n,coverage,mean_ci_width,mean_ess\n";
  for (const CoverageRow& row : rows) {
    out += to_string(row.kind);
    out += ',';
    out += to_string(row.method);
    out += ',';
    out += format_double(row.target_sigma);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.coverage);
    out += ',';
    out += format_double(row.mean_ci_width);
    out += ',';
    out += format_double(row.mean_ess);
    out += '\n';
  }
  return out;
}

std::string reduction_table_csv(const std::vector<ReductionRow>& rows) {
  std::string out = "kind,method,target_sigma,n_star,ratio_vs_clt\n";
  for (const ReductionRow& row : rows) {
    out += to_string(row.kind);
    out += ',';
    out += to_string(row.method);
    out += ',';
    out += format_double(row.target_sigma);
    out += ',';
    out += row.n_star.has_value() ? std::to_string(*row.n_star)
                                  : std::string("not reached");
    out += ',';
    out += row.ratio_vs_clt.has_value() ? format_double(*row.ratio_vs_clt)
                                        : std::string("not reached");
    out += '\n';
  }
  return out;
}

std::string cod_cdf_csv(const std::vector<CodCdfRow>& rows) {
  std::string out = "family,d,normalised_distance,cdf\n";
  for (const CodCdfRow& row : rows) {
    out += to_string(row.family);
    out += ',';
    out += std::to_string(row.d);
    out += ',';
    out += format_double(row.normalised_distance);
    out += ',';
    out += format_double(row.cdf);
    out += '\n';
  }
  return out;
}

std::string cod_mass_csv(const std::vector<CodMassRow>& rows) {
  std::string out =
      "family,d,epsilon,empirical_fraction,analytic_fraction,"
      "all_outside_fraction\n";
  for (const CodMassRow& row : rows) {
    out += to_string(row.family);
    out += ',';
    out += std::to_string(row.d);
    out += ',';
    out += format_double(row.epsilon);
    out += ',';
    out += format_double(row.empirical_fraction);
    out += ',';
    out += format_double(row.analytic_fraction);
    out += ',';
    out += format_double(row.all_outside_fraction);
    out += '\n';
  }
  return out;
}

std::vector<CoverageRow> coverage_table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("coverage table: empty input");
  }
  if (line != "kind,method,target_sigma,n,coverage,mean_ci_width,mean_ess") {
    throw std::invalid_argument("coverage table: unexpected header");
  }
  std::vector<CoverageRow> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string kind, method, sigma, n, coverage, width, ess;
    if (!std::getline(fields, kind, ',') || !std::getline(fields, method, ',') ||
        !std::getline(fields, sigma, ',') || !std::getline(fields, n, ',') ||
        !std::getline(fields, coverage, ',') ||
        !std::getline(fields, width, ',') || !std::getline(fields, ess)) {
      throw std::invalid_argument("coverage table, line " +
                                  std::to_string(line_number) +
                                  ": expected 7 fields");
    }
    CoverageRow row;
    row.kind = estimator_kind_from_string(kind);
    row.method = ess_method_from_string(method);
    try {
      row.target_sigma = std::stod(sigma);
      row.n = std::stoull(n);
      row.coverage = std::stod(coverage);
      row.mean_ci_width = width == "inf" ? std::numeric_limits<double>::infinity()
                                         : std::stod(width);
      row.mean_ess = std::stod(ess);
    } catch (const std::exception&) {
      throw std::invalid_argument("coverage table, line " +
                                  std::to_string(line_number) +
                                  ": malformed number");
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mopl
