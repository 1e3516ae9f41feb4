#include "hag/experiment.h"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "hag/eval.h"
#include "hag/util.h"

namespace hag {

std::string slugify(const std::string& text) {
    std::string slug;
    bool pending_dash = false;
    for (char c : to_lower(text)) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            if (pending_dash && !slug.empty()) slug.push_back('-');
            pending_dash = false;
            slug.push_back(c);
        } else {
            pending_dash = true;
        }
    }
    return slug.empty() ? "topic" : slug;
}

std::map<std::string, std::map<std::string, double>> ExperimentSummary::method_means() const {
    std::map<std::string, std::map<std::string, double>> means;
    std::map<std::string, std::size_t> counts;
    for (const auto& cell : cells) {
        if (!cell.ok) continue;
        auto& m = means[cell.method];
        m["s_dist_jsd"] += cell.s_dist_jsd;
        m["s_dist_kl"] += cell.s_dist_kl;
        m["div_err"] += cell.div_err;
        ++counts[cell.method];
    }
    for (auto& [method, m] : means)
        for (auto& [name, value] : m) value /= static_cast<double>(counts[method]);
    return means;
}

nlohmann::json ExperimentSummary::to_json() const {
    nlohmann::json jcells = nlohmann::json::array();
    for (const auto& cell : cells) {
        nlohmann::json jc{{"topic", cell.topic},
                          {"method", cell.method},
                          {"ok", cell.ok},
                          {"population", cell.population_path},
                          {"report", cell.report_path}};
        if (cell.ok) {
            jc["s_dist_jsd"] = cell.s_dist_jsd;
            jc["s_dist_kl"] = cell.s_dist_kl;
            jc["div_err"] = cell.div_err;
        } else {
            jc["error"] = cell.error;
        }
        jcells.push_back(std::move(jc));
    }
    return nlohmann::json{{"format_version", kFormatVersion},
                          {"artifact_type", "summary"},
                          {"cells", jcells},
                          {"method_means", method_means()}};
}

std::string ExperimentSummary::to_text() const {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %-16s %12s %12s %12s  %s\n", "topic", "method",
                  "S_dist(JSD)", "S_dist(KL)", "DivErr", "status");
    out << line;
    for (const auto& cell : cells) {
        if (cell.ok) {
            std::snprintf(line, sizeof line, "%-28s %-16s %12.4f %12.4f %12.4f  %s\n",
                          cell.topic.substr(0, 28).c_str(), cell.method.c_str(),
                          cell.s_dist_jsd, cell.s_dist_kl, cell.div_err, "ok");
        } else {
            std::snprintf(line, sizeof line, "%-28s %-16s %12s %12s %12s  %s\n",
                          cell.topic.substr(0, 28).c_str(), cell.method.c_str(), "-", "-", "-",
                          ("failed: " + cell.error).c_str());
        }
        out << line;
    }
    out << "\nper-method means over successful cells:\n";
    for (const auto& [method, m] : method_means()) {
        std::snprintf(line, sizeof line, "%-16s %12.4f %12.4f %12.4f\n", method.c_str(),
                      m.at("s_dist_jsd"), m.at("s_dist_kl"), m.at("div_err"));
        out << line;
    }
    return out.str();
}

ExperimentSummary run_experiment(const RunConfig& config,
                                 const std::vector<std::string>& topics,
                                 const std::vector<Method>& methods,
                                 const std::map<std::string, std::string>& gt_paths,
                                 const std::string& out_dir) {
    if (topics.empty() || methods.empty())
        throw HagError(Errc::ConfigError, "need at least one topic and one method");
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "trees");
    fs::create_directories(fs::path(out_dir) / "populations");
    fs::create_directories(fs::path(out_dir) / "reports");

    const DimensionSchema schema =
        config.schema_path.empty() ? default_schema() : DimensionSchema::load(config.schema_path);
    Harmonizer harmonizer = config.harmonization_path.empty()
                                ? default_harmonizer()
                                : Harmonizer::load(config.harmonization_path);
    PersonaDatabase db;
    if (!config.db_path.empty()) db = ingest_database(config.db_path, schema, harmonizer);

    auto backend = make_backend(config);
    auto embedder = make_embedder(config);
    WkmProvider provider(backend, &harmonizer);

    ExperimentSummary summary;
    std::map<std::string, DistributionTree> tree_cache;

    for (const auto& topic : topics) {
        for (const Method method : methods) {
            CellResult cell;
            cell.topic = topic;
            cell.method = method_name(method);
            const std::string stem = slugify(topic) + "-" + cell.method;
            try {
                Population population;
                switch (method) {
                    case Method::Hag: {
                        auto it = tree_cache.find(topic);
                        if (it == tree_cache.end()) {
                            DistributionTree tree =
                                build_tree(topic, schema, provider, config.params);
                            if (config.min_path_prob > 0.0)
                                tree = prune(tree, config.min_path_prob);
                            save_tree(tree, (fs::path(out_dir) / "trees" /
                                             (slugify(topic) + ".json"))
                                                .string());
                            it = tree_cache.emplace(topic, std::move(tree)).first;
                        }
                        population = instantiate(it->second, db, config.n, provider,
                                                 config.seed, schema, config.params);
                        break;
                    }
                    case Method::HagFlat:
                        population = hag_flat(provider, topic, config.n, schema, db,
                                              config.seed, config.params);
                        break;
                    case Method::RandomSelect:
                        population = random_select(db, config.n, config.seed);
                        break;
                    case Method::TopicRetrieval:
                        population = topic_retrieval(db, topic, config.n, *embedder);
                        break;
                    case Method::LlmGenerate:
                        population =
                            llm_generate(provider, topic, config.n, schema, config.params);
                        break;
                }
                population.topic = topic;
                population.meta.extra["config"] = config.echo();
                if (!backend->deterministic()) population.meta.created_at = utc_now();
                cell.population_path =
                    (fs::path(out_dir) / "populations" / (stem + ".json")).string();
                population.save(cell.population_path);

                auto gt_it = gt_paths.find(topic);
                if (gt_it == gt_paths.end())
                    throw HagError(Errc::ConfigError, "no ground truth for topic " + topic);
                const Population gt = Population::load(gt_it->second);

                EvalConfig eval_config;
                eval_config.offline = config.offline;
                eval_config.archetype_k = config.archetype_k;
                eval_config.epsilon = config.epsilon;
                eval_config.seed = config.seed;
                eval_config.params = config.params;
                EvalReport report = evaluate(population, gt, schema, eval_config,
                                             embedder.get(), backend.get());
                report.config_echo["run"] = config.echo();
                cell.report_path = (fs::path(out_dir) / "reports" / (stem + ".json")).string();
                report.save(cell.report_path);

                cell.s_dist_jsd = report.jsd.mean;
                cell.s_dist_kl = report.kl.mean;
                cell.div_err = report.diversity.mean;
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.ok = false;
                cell.error = e.what();
            }
            summary.cells.push_back(std::move(cell));
        }
    }

    write_file((fs::path(out_dir) / "summary.json").string(), summary.to_json().dump(2) + "\n");
    write_file((fs::path(out_dir) / "summary.txt").string(), summary.to_text());
    return summary;
}

}  // namespace hag
