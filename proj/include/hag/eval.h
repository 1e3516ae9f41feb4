#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hag/embedder.h"
#include "hag/judge.h"
#include "hag/metrics.h"
#include "hag/persona.h"
#include "hag/provider.h"
#include "hag/schema.h"

namespace hag {

struct EvalConfig {
    bool offline = true;  // skip judge and archetype scoring
    std::size_t archetype_k = 4;
    double epsilon = 1e-6;
    std::uint64_t seed = 0;
    double z = 1.96;
    double sigma = 1.0;
    double error_margin = 0.2;
    ProviderParams params;
};

struct EvalReport {
    std::string topic;
    std::string generator;
    std::size_t gen_size = 0;
    std::size_t gt_size = 0;
    FidelityResult jsd;   // S_dist under Jensen-Shannon
    FidelityResult kl;    // S_dist under Kullback-Leibler
    DiversityResult diversity;
    std::optional<int> arch_rel;
    std::optional<double> ind_con;
    std::size_t judge_sample = 0;
    std::optional<std::string> judge_error;  // set when judging failed mid-run
    nlohmann::json archetypes = nlohmann::json::array();
    nlohmann::json config_echo = nlohmann::json::object();

    nlohmann::json to_json() const;
    static EvalReport from_json(const nlohmann::json& doc);
    static EvalReport load(const std::string& path);
    void save(const std::string& path) const;
};

// Full evaluation pass. Alignment metrics always run; archetype and consistency
// scoring need an embedder and judge and are skipped offline. A judge
// failure downgrades to a partial report instead of aborting.
EvalReport evaluate(const Population& gen, const Population& gt, const DimensionSchema& schema,
                    const EvalConfig& config, Embedder* embedder = nullptr,
                    ChatBackend* judge = nullptr);

}  // namespace hag
