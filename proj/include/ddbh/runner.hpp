#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ddbh/config.hpp"

namespace ddbh {

struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunResult {
    int points = 0;
    int failed = 0;
    std::vector<std::string> files;  // CSVs, in write order
    std::string manifest;
};

using Logger = std::function<void(const std::string&)>;

/// Executes the configured task and writes CSVs plus manifest.json into c.output.
RunResult run(const RunConfig& c, const Logger& log = {});

/// omega0 at the first SFP entry of an ordered J-sweep; none if the sweep never lases.
std::optional<double> critical_lasing_frequency(const std::vector<ScanEntry>& chain);

}  // namespace ddbh
