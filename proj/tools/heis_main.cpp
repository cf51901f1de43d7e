#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "heis/expr.hpp"
#include "heis/jobs.hpp"

// Exit codes: 0 success, 2 config/parse error, 3 numerical tolerance
// failure, 4 internal invariant violation.
int main(int argc, char** argv) {
  CLI::App app{"Intrinsic measures of submanifolds of the Heisenberg group"};

  std::string config_path;
  std::string task;
  std::string out_path = "report.json";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> tolerance;

  app.add_option("--config", config_path, "job configuration file");
  app.add_option("--task", task,
                 "task name (measure, volume, blowup, metric-factor, coarea, catalog, "
                 "bracket-check); overrides the config");
  app.add_option("--seed", seed, "RNG seed; overrides the config");
  app.add_option("--threads", threads, "worker thread cap (0 = hardware)");
  app.add_option("--out", out_path, "report output path");
  app.add_option("--tolerance", tolerance, "check tolerance; overrides [check] rel_tol");

  CLI11_PARSE(app, argc, argv);

  try {
    heis::Config config;
    if (!config_path.empty()) {
      config = heis::Config::parse_file(config_path);
    } else if (task.empty()) {
      std::cerr << "error: provide --config and/or --task\n";
      return 2;
    }
    if (!task.empty()) config.set("", "task", task);
    if (seed) config.set("", "seed", std::to_string(*seed));
    if (threads) config.set("", "threads", std::to_string(*threads));
    if (tolerance) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", *tolerance);
      config.set("check", "rel_tol", buf);
    }

    heis::RunResult result = heis::run_job(config);
    heis::write_report(result.report, out_path);

    for (const auto& check : result.report.at("checks")) {
      std::cout << (check.at("pass").get<bool>() ? "[PASS] " : "[FAIL] ")
                << check.at("name").get<std::string>() << "  got=" << check.at("got").dump()
                << " expected=" << check.at("expected").dump() << " tol=" << check.at("tol").dump()
                << "\n";
    }
    std::cout << result.report.at("task").get<std::string>()
              << ": value=" << result.report.at("value").dump()
              << " error_estimate=" << result.report.at("error_estimate").dump() << " -> "
              << out_path << "\n";
    return result.exit_code;
  } catch (const heis::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const heis::SyntaxError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return 2;
  } catch (const heis::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
