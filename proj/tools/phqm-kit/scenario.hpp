#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phqm/linalg.hpp"

namespace phqm::cli {

using json = nlohmann::json;

struct RunOptions {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

struct Residual {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = true;
};

struct PlotSeries {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ResultRecord {
  json inputs;
  json outputs = json::object();
  std::vector<Residual> residuals;
  std::vector<PlotSeries> plots;
  double timing_ms = 0;
  std::optional<Error> error;

  bool passed() const;
  void check(std::string name, double value, double tolerance);
};

// Validates against the bundled JSON schema; throws Error(SchemaError).
json load_scenario(const std::string& text);

ResultRecord run(const json& scenario, const RunOptions& opt);

// Runs a single scenario or a {"scenarios": [...]} batch. Parallelism is capped
// by PHQM_THREADS.
std::vector<ResultRecord> run_all(const json& doc, const RunOptions& opt);

json to_json(const ResultRecord& r);

// 0 pass, 2 residual failure, 3 input or module error.
int exit_code(const std::vector<ResultRecord>& records);

// Headered CSV of the first plot (or the one named `kind`). Throws NothingToPlot.
void emit_plotdata(const ResultRecord& r, const std::string& kind, std::ostream& os);

// Complex numbers as [re, im]; matrices row-major.
json to_json(cplx c);
json to_json(const Vec& v);
json to_json(const Mat& m);
cplx complex_from_json(const json& j);
Vec vector_from_json(const json& j);
Mat matrix_from_json(const json& j, Eigen::Index dim_hint = 0);

}  // namespace phqm::cli
