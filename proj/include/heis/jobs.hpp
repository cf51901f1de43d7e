#pragma once

#include <string>

#include <json.hpp>

#include "heis/config.hpp"

namespace heis {

struct RunResult {
  int exit_code = 0;  // 0 ok, 3 tolerance failure (2/4 are mapped by the CLI)
  nlohmann::ordered_json report;
};

// Executes the task named in the config and assembles the report with the
// stable field order {task, inputs, value, error_estimate, checks,
// runtime_ms, seed}. runtime_ms is the only field that varies between
// identical runs.
RunResult run_job(const Config& config);

void write_report(const nlohmann::ordered_json& report, const std::string& path);

}  // namespace heis
