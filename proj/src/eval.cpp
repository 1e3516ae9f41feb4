#include "hag/eval.h"

#include "hag/errors.h"
#include "hag/util.h"

namespace hag {

namespace {

nlohmann::json fidelity_to_json(const FidelityResult& result) {
    return nlohmann::json{{"mean", result.mean},
                          {"per_dimension", result.per_dimension},
                          {"excluded", result.excluded}};
}

FidelityResult fidelity_from_json(const nlohmann::json& doc) {
    FidelityResult result;
    result.mean = doc.at("mean").get<double>();
    result.per_dimension = doc.at("per_dimension").get<std::map<std::string, double>>();
    result.excluded = doc.at("excluded").get<std::vector<std::string>>();
    return result;
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
    nlohmann::json doc{
        {"format_version", kFormatVersion},
        {"artifact_type", "report"},
        {"topic", topic},
        {"generator", generator},
        {"gen_size", gen_size},
        {"gt_size", gt_size},
        {"jsd", fidelity_to_json(jsd)},
        {"kl", fidelity_to_json(kl)},
        {"diversity",
         {{"mean", diversity.mean},
          {"gs_gen", diversity.gs_gen},
          {"gs_gt", diversity.gs_gt},
          {"excluded", diversity.excluded}}},
        {"judge_sample", judge_sample},
        {"archetypes", archetypes},
        {"config", config_echo},
    };
    if (arch_rel) doc["arch_rel"] = *arch_rel;
    if (ind_con) doc["ind_con"] = *ind_con;
    if (judge_error) doc["judge_error"] = *judge_error;
    return doc;
}

EvalReport EvalReport::from_json(const nlohmann::json& doc) {
    if (!doc.contains("format_version") ||
        doc["format_version"].get<std::string>() != kFormatVersion)
        throw HagError(Errc::FormatVersionMismatch, "report file format_version mismatch");
    EvalReport report;
    try {
        report.topic = doc.at("topic").get<std::string>();
        report.generator = doc.at("generator").get<std::string>();
        report.gen_size = doc.at("gen_size").get<std::size_t>();
        report.gt_size = doc.at("gt_size").get<std::size_t>();
        report.jsd = fidelity_from_json(doc.at("jsd"));
        report.kl = fidelity_from_json(doc.at("kl"));
        const auto& div = doc.at("diversity");
        report.diversity.mean = div.at("mean").get<double>();
        report.diversity.gs_gen = div.at("gs_gen").get<std::map<std::string, double>>();
        report.diversity.gs_gt = div.at("gs_gt").get<std::map<std::string, double>>();
        report.diversity.excluded = div.at("excluded").get<std::vector<std::string>>();
        report.judge_sample = doc.at("judge_sample").get<std::size_t>();
        report.archetypes = doc.value("archetypes", nlohmann::json::array());
        report.config_echo = doc.value("config", nlohmann::json::object());
        if (doc.contains("arch_rel")) report.arch_rel = doc["arch_rel"].get<int>();
        if (doc.contains("ind_con")) report.ind_con = doc["ind_con"].get<double>();
        if (doc.contains("judge_error"))
            report.judge_error = doc["judge_error"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw HagError(Errc::InvariantViolation, std::string("malformed report: ") + e.what());
    }
    return report;
}

EvalReport EvalReport::load(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableSource, std::string("report file: ") + e.what());
    }
    return from_json(doc);
}

void EvalReport::save(const std::string& path) const {
    write_file(path, to_json().dump(2) + "\n");
}

EvalReport evaluate(const Population& gen, const Population& gt, const DimensionSchema& schema,
                    const EvalConfig& config, Embedder* embedder, ChatBackend* judge) {
    EvalReport report;
    report.topic = gen.topic.empty() ? gt.topic : gen.topic;
    report.generator = gen.meta.generator;
    report.gen_size = gen.size();
    report.gt_size = gt.size();
    report.jsd = dist_fidelity(gen, gt, schema, DivergenceMetric::Jsd, config.epsilon);
    report.kl = dist_fidelity(gen, gt, schema, DivergenceMetric::Kl, config.epsilon);
    report.diversity = diversity_error(gen, gt, schema);
    report.config_echo = {{"offline", config.offline},
                          {"archetype_k", config.archetype_k},
                          {"epsilon", config.epsilon},
                          {"seed", config.seed},
                          {"z", config.z},
                          {"sigma", config.sigma},
                          {"error_margin", config.error_margin}};

    if (config.offline || embedder == nullptr || judge == nullptr) return report;

    try {
        const std::size_t k = std::min(config.archetype_k, gen.size());
        const auto archetypes = archetype_centroids(gen, *embedder, k, config.seed);
        for (const auto& archetype : archetypes)
            report.archetypes.push_back({{"share", archetype.share},
                                         {"cluster_size", archetype.cluster_size},
                                         {"persona", archetype.representative.to_json()}});
        report.arch_rel = judge_archetypes(*judge, report.topic, archetypes, config.params);
        const auto consistency =
            judge_consistency(*judge, report.topic, gen, config.seed, config.params);
        report.ind_con = consistency.mean;
        report.judge_sample = consistency.sample_size;
    } catch (const HagError& e) {
        report.judge_error = e.what();
    }
    return report;
}

}  // namespace hag
