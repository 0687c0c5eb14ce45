#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scenario.hpp"

using phqm::cli::json;

int main(int argc, char** argv) {
  CLI::App app{"phqm-kit: pseudo-Hermitian quantum mechanics toolkit"};
  std::string scenario_path, out_path, format;
  double tol = 0;
  std::uint64_t seed = 0;
  bool strict = false;
  app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
  app.add_option("--out", out_path, "output file (default stdout)");
  auto* fmt = app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  auto* tol_opt = app.add_option("--tol", tol, "linear-algebra tolerance override")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized checks");
  app.add_flag("--strict", strict, "treat domain and regime warnings as fatal");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  auto fail = [](const phqm::Error& e) {
    json j{{"error", {{"code", phqm::errc_name(e.code())}, {"message", e.what()}}}};
    std::cout << j.dump(2) << '\n';
    return 3;
  };

  json doc;
  try {
    std::ifstream in(scenario_path);
    if (!in) throw phqm::Error(phqm::Errc::SchemaError, "cannot open " + scenario_path);
    std::stringstream ss;
    ss << in.rdbuf();
    doc = phqm::cli::load_scenario(ss.str());
  } catch (const phqm::Error& e) {
    return fail(e);
  }

  phqm::cli::RunOptions opt;
  if (*tol_opt) opt.tol = tol;
  if (*seed_opt) opt.seed = seed;
  opt.strict = strict;

  json out_cfg = doc.value("output", json::object());
  if (!*fmt) format = out_cfg.value("format", "json");
  if (out_path.empty()) out_path = out_cfg.value("path", "");

  auto records = phqm::cli::run_all(doc, opt);
  int code = phqm::cli::exit_code(records);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) return fail(phqm::Error(phqm::Errc::SchemaError, "cannot write " + out_path));
  }
  std::ostream& os = out_path.empty() ? std::cout : file;

  if (format == "csv") {
    try {
      for (const auto& r : records) phqm::cli::emit_plotdata(r, out_cfg.value("plot", ""), os);
    } catch (const phqm::Error& e) {
      return fail(e);
    }
  } else if (records.size() == 1 && !doc.contains("scenarios")) {
    os << phqm::cli::to_json(records[0]).dump(2) << '\n';
  } else {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(phqm::cli::to_json(r));
    os << json{{"results", arr}}.dump(2) << '\n';
  }
  return code;
}
