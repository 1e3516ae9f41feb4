#pragma once

#include <map>
#include <string>
#include <vector>

#include "hag/baselines.h"
#include "hag/config.h"

namespace hag {

struct CellResult {
    std::string topic;
    std::string method;
    bool ok = false;
    std::string error;
    std::string population_path;
    std::string report_path;
    double s_dist_jsd = 0.0;
    double s_dist_kl = 0.0;
    double div_err = 0.0;
};

struct ExperimentSummary {
    std::vector<CellResult> cells;

    // Mean of each metric per method over the cells that succeeded.
    std::map<std::string, std::map<std::string, double>> method_means() const;
    nlohmann::json to_json() const;
    std::string to_text() const;
};

// Lowercased, non-alphanumerics collapsed to single dashes.
std::string slugify(const std::string& text);

// One population + report per (topic, method) cell under out_dir, plus
// summary.json / summary.txt. A failing cell is recorded and skipped; the
// rest of the grid still runs. gt_paths maps each topic to its designated
// ground-truth population file.
ExperimentSummary run_experiment(const RunConfig& config,
                                 const std::vector<std::string>& topics,
                                 const std::vector<Method>& methods,
                                 const std::map<std::string, std::string>& gt_paths,
                                 const std::string& out_dir);

}  // namespace hag
