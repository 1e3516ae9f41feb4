#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "hag/baselines.h"
#include "hag/bench.h"
#include "hag/config.h"
#include "hag/errors.h"
#include "hag/eval.h"
#include "hag/experiment.h"
#include "hag/grounding.h"
#include "hag/inspect.h"
#include "hag/tree.h"
#include "hag/util.h"

namespace {

using namespace hag;

// Options shared by every generating subcommand; merged over config-file
// values only when given on the command line.
struct CommonFlags {
    std::string config_path;
    std::string provider;
    std::string transcript;
    std::string mock_tables;
    std::string db_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int max_depth = 0;
    int max_branches = 0;
    int retries = -1;
    double temperature = -1.0;
    bool offline = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--provider", flags.provider, "mock | http | replay");
    cmd->add_option("--transcript", flags.transcript,
                    "transcript JSONL to record (mock/http) or replay from");
    cmd->add_option("--mock-tables", flags.mock_tables, "mock answer tables (JSON)");
    cmd->add_option("--db", flags.db_path, "persona database (CSV or JSONL)");
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--max-depth", flags.max_depth, "most prioritized dimensions");
    cmd->add_option("--max-branches", flags.max_branches, "most values per dimension");
    cmd->add_option("--retries", flags.retries, "repair re-prompts per request");
    cmd->add_option("--temperature", flags.temperature, "provider sampling temperature");
    cmd->add_flag("--offline", flags.offline, "forbid all network access");
}

RunConfig assemble_config(const CLI::App* cmd, const CommonFlags& flags) {
    RunConfig config;
    if (!flags.config_path.empty()) config = RunConfig::from_file(flags.config_path);
    config.apply_env();
    if (cmd->count("--provider")) config.provider_mode = flags.provider;
    if (cmd->count("--transcript")) config.transcript = flags.transcript;
    if (cmd->count("--mock-tables")) config.mock_tables = flags.mock_tables;
    if (cmd->count("--db")) config.db_path = flags.db_path;
    if (cmd->count("--seed")) {
        config.seed = flags.seed;
        config.mock_seed = flags.seed;
    }
    if (cmd->count("--max-depth")) config.params.max_depth = flags.max_depth;
    if (cmd->count("--max-branches")) config.params.max_branches = flags.max_branches;
    if (cmd->count("--retries")) config.params.retries = flags.retries;
    if (cmd->count("--temperature")) config.params.temperature = flags.temperature;
    if (flags.offline) {
        config.offline = true;
        setenv("HAG_OFFLINE", "1", 1);
    }
    return config;
}

PersonaDatabase load_db(const RunConfig& config, const DimensionSchema& schema) {
    if (config.db_path.empty()) return PersonaDatabase{};
    return ingest_database(config.db_path, schema, default_harmonizer());
}

void stamp(Population& population, const RunConfig& config,
           const std::shared_ptr<ChatBackend>& backend) {
    population.meta.extra["config"] = config.echo();
    if (backend && !backend->deterministic()) population.meta.created_at = utc_now();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical agent population generation and evaluation"};
    app.require_subcommand(1);

    // tree build
    auto* tree_cmd = app.add_subcommand("tree", "distribution tree operations");
    tree_cmd->require_subcommand(1);
    auto* tree_build = tree_cmd->add_subcommand("build", "construct a topic-adaptive tree");
    CommonFlags tree_flags;
    std::string tree_topic;
    std::string tree_out = "tree.json";
    double tree_min_path_prob = 0.0;
    tree_build->add_option("--topic", tree_topic, "topic to condition on")->required();
    tree_build->add_option("--out", tree_out, "output file");
    tree_build->add_option("--min-path-prob", tree_min_path_prob,
                           "prune leaves below this path probability");
    add_common(tree_build, tree_flags);

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "hierarchical grounded population");
    CommonFlags generate_flags;
    std::string generate_topic;
    std::string generate_tree_path;
    std::string generate_out = "population.json";
    std::size_t generate_n = 100;
    double generate_min_path_prob = 0.0;
    generate_cmd->add_option("--topic", generate_topic, "topic to condition on");
    generate_cmd->add_option("--tree", generate_tree_path, "reuse an existing tree file");
    generate_cmd->add_option("--size", generate_n, "population size")->required();
    generate_cmd->add_option("--out", generate_out, "output file");
    generate_cmd->add_option("--min-path-prob", generate_min_path_prob,
                             "prune leaves below this path probability");
    add_common(generate_cmd, generate_flags);

    // baseline
    auto* baseline_cmd = app.add_subcommand("baseline", "comparison generators");
    CommonFlags baseline_flags;
    std::string baseline_method;
    std::string baseline_topic;
    std::string baseline_out = "population.json";
    std::size_t baseline_n = 100;
    baseline_cmd
        ->add_option("--method", baseline_method,
                     "random_select | topic_retrieval | llm_generate | hag_flat | hag")
        ->required();
    baseline_cmd->add_option("--topic", baseline_topic, "topic to condition on");
    baseline_cmd->add_option("--size", baseline_n, "population size")->required();
    baseline_cmd->add_option("--out", baseline_out, "output file");
    add_common(baseline_cmd, baseline_flags);

    // bench build
    auto* bench_cmd = app.add_subcommand("bench", "ground-truth benchmark operations");
    bench_cmd->require_subcommand(1);
    auto* bench_build = bench_cmd->add_subcommand("build", "infer a GT population from a corpus");
    CommonFlags bench_flags;
    std::string bench_corpus;
    std::string bench_theme;
    std::string bench_topic;
    std::string bench_out = "benchmark.json";
    bool bench_force = false;
    std::size_t bench_min_tokens = 15;
    std::size_t bench_min_texts = 1;
    std::size_t bench_max_texts = 0;
    bench_build->add_option("--corpus", bench_corpus, "JSONL corpus of posts")->required();
    bench_build->add_option("--theme", bench_theme, "corpus theme to keep (empty = all)");
    bench_build->add_option("--topic", bench_topic, "topic label for the population");
    bench_build->add_option("--out", bench_out, "output file");
    bench_build->add_flag("--force", bench_force, "skip the 50-user volume check");
    bench_build->add_option("--min-tokens", bench_min_tokens, "shortest text kept");
    bench_build->add_option("--min-texts", bench_min_texts, "fewest texts per user");
    bench_build->add_option("--max-texts", bench_max_texts, "most texts per user (0 = all)");
    add_common(bench_build, bench_flags);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a population against ground truth");
    CommonFlags eval_flags;
    std::string eval_gen;
    std::string eval_gt;
    std::string eval_out = "report.json";
    std::size_t eval_k = 4;
    double eval_epsilon = 1e-6;
    bool eval_judge = false;
    eval_cmd->add_option("--gen", eval_gen, "generated population file")->required();
    eval_cmd->add_option("--gt", eval_gt, "ground-truth population file")->required();
    eval_cmd->add_option("--out", eval_out, "report file");
    eval_cmd->add_option("--k", eval_k, "archetype count");
    eval_cmd->add_option("--epsilon", eval_epsilon, "KL smoothing epsilon");
    eval_cmd->add_flag("--judge", eval_judge, "run archetype and consistency judging");
    add_common(eval_cmd, eval_flags);

    // run
    auto* run_cmd = app.add_subcommand("run", "topic x method experiment grid");
    CommonFlags run_flags;
    std::string run_topics;
    std::string run_methods = "hag,hag_flat,random_select,topic_retrieval,llm_generate";
    std::string run_gt;
    std::string run_out;
    std::string run_label = "experiment";
    std::size_t run_n = 100;
    run_cmd->add_option("--topics", run_topics, "comma-separated topics")->required();
    run_cmd->add_option("--methods", run_methods, "comma-separated methods");
    run_cmd->add_option("--gt", run_gt,
                        "ground-truth population file, or directory of <topic-slug>.json")
        ->required();
    run_cmd->add_option("--out", run_out, "output directory (default runs/<stamp>-<label>)");
    run_cmd->add_option("--label", run_label, "run directory label");
    run_cmd->add_option("--size", run_n, "population size per cell");
    add_common(run_cmd, run_flags);

    // inspect
    auto* inspect_cmd = app.add_subcommand("inspect", "render an artifact file");
    std::string inspect_path;
    inspect_cmd->add_option("path", inspect_path, "artifact file")->required();

    // export embeddings
    auto* export_cmd = app.add_subcommand("export", "export derived data");
    export_cmd->require_subcommand(1);
    auto* export_embeddings =
        export_cmd->add_subcommand("embeddings", "persona embeddings as JSONL");
    std::string export_pop;
    std::string export_out = "embeddings.jsonl";
    std::size_t export_dim = 64;
    export_embeddings->add_option("--pop", export_pop, "population file")->required();
    export_embeddings->add_option("--out", export_out, "output JSONL");
    export_embeddings->add_option("--dim", export_dim, "embedding dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        const DimensionSchema& schema = default_schema();

        if (tree_build->parsed()) {
            RunConfig config = assemble_config(tree_build, tree_flags);
            auto backend = make_backend(config);
            WkmProvider provider(backend);
            DistributionTree tree = build_tree(tree_topic, schema, provider, config.params);
            if (tree_min_path_prob > 0.0) tree = prune(tree, tree_min_path_prob);
            tree.meta["config"] = config.echo();
            save_tree(tree, tree_out);
            std::cout << "wrote " << tree_out << " (" << enumerate_leaves(tree).size()
                      << " leaves)\n";
        } else if (generate_cmd->parsed()) {
            RunConfig config = assemble_config(generate_cmd, generate_flags);
            config.n = generate_n;
            auto backend = make_backend(config);
            WkmProvider provider(backend);
            DistributionTree tree;
            if (!generate_tree_path.empty()) {
                tree = load_tree(generate_tree_path);
            } else if (!generate_topic.empty()) {
                tree = build_tree(generate_topic, schema, provider, config.params);
            } else {
                throw HagError(Errc::ConfigError, "generate needs --topic or --tree");
            }
            if (generate_min_path_prob > 0.0) tree = prune(tree, generate_min_path_prob);
            PersonaDatabase db = load_db(config, schema);
            Population population =
                instantiate(tree, db, config.n, provider, config.seed, schema, config.params);
            stamp(population, config, backend);
            population.save(generate_out);
            std::cout << "wrote " << generate_out << " (" << population.size()
                      << " members)\n";
        } else if (baseline_cmd->parsed()) {
            RunConfig config = assemble_config(baseline_cmd, baseline_flags);
            config.n = baseline_n;
            const Method method = method_from_name(baseline_method);
            auto backend = make_backend(config);
            WkmProvider provider(backend);
            PersonaDatabase db = load_db(config, schema);
            Population population;
            switch (method) {
                case Method::RandomSelect:
                    population = random_select(db, config.n, config.seed);
                    break;
                case Method::TopicRetrieval: {
                    auto embedder = make_embedder(config);
                    population = topic_retrieval(db, baseline_topic, config.n, *embedder);
                    break;
                }
                case Method::LlmGenerate:
                    population =
                        llm_generate(provider, baseline_topic, config.n, schema, config.params);
                    break;
                case Method::HagFlat:
                    population = hag_flat(provider, baseline_topic, config.n, schema, db,
                                          config.seed, config.params);
                    break;
                case Method::Hag: {
                    DistributionTree tree =
                        build_tree(baseline_topic, schema, provider, config.params);
                    population = instantiate(tree, db, config.n, provider, config.seed, schema,
                                             config.params);
                    break;
                }
            }
            population.topic = baseline_topic;
            stamp(population, config, backend);
            population.save(baseline_out);
            std::cout << "wrote " << baseline_out << " (" << population.size() << " members, "
                      << method_name(method) << ")\n";
        } else if (bench_build->parsed()) {
            RunConfig config = assemble_config(bench_build, bench_flags);
            auto backend = make_backend(config);
            FilterPolicy policy;
            policy.min_tokens = bench_min_tokens;
            policy.min_texts = bench_min_texts;
            policy.max_texts = bench_max_texts;
            FilterStats stats;
            Population population =
                build_benchmark(bench_corpus, bench_theme,
                                bench_topic.empty() ? bench_theme : bench_topic, *backend,
                                policy, bench_force, config.params, &stats);
            stamp(population, config, backend);
            population.save(bench_out);
            std::cout << "wrote " << bench_out << " (" << population.size() << " users, "
                      << stats.posts_read << " posts read)\n";
        } else if (eval_cmd->parsed()) {
            RunConfig config = assemble_config(eval_cmd, eval_flags);
            const Population gen = Population::load(eval_gen);
            const Population gt = Population::load(eval_gt);
            // --judge means "score with the configured backend"; a mock judge
            // is fine under the offline guard, an http one is refused by
            // make_backend before any socket opens.
            EvalConfig eval_config;
            eval_config.offline = !eval_judge;
            eval_config.archetype_k = eval_k;
            eval_config.epsilon = eval_epsilon;
            eval_config.seed = config.seed;
            eval_config.params = config.params;
            auto embedder = make_embedder(config);
            std::shared_ptr<ChatBackend> judge;
            if (!eval_config.offline) judge = make_backend(config);
            EvalReport report =
                evaluate(gen, gt, schema, eval_config, embedder.get(), judge.get());
            report.config_echo["run"] = config.echo();
            report.save(eval_out);
            std::cout << "wrote " << eval_out << " (S_dist JSD " << report.jsd.mean << ")\n";
        } else if (run_cmd->parsed()) {
            RunConfig config = assemble_config(run_cmd, run_flags);
            config.n = run_n;
            std::vector<std::string> topics;
            for (auto& topic : split(run_topics, ','))
                if (!trim(topic).empty()) topics.push_back(trim(topic));
            std::vector<Method> methods;
            for (auto& name : split(run_methods, ','))
                if (!trim(name).empty()) methods.push_back(method_from_name(trim(name)));

            std::map<std::string, std::string> gt_paths;
            namespace fs = std::filesystem;
            for (const auto& topic : topics) {
                if (fs::is_directory(run_gt))
                    gt_paths[topic] = (fs::path(run_gt) / (slugify(topic) + ".json")).string();
                else
                    gt_paths[topic] = run_gt;
            }
            std::string out_dir = run_out;
            if (out_dir.empty())
                out_dir = (fs::path(config.output_dir) /
                           (utc_now() + "-" + slugify(run_label)))
                              .string();
            const ExperimentSummary summary =
                run_experiment(config, topics, methods, gt_paths, out_dir);
            std::cout << summary.to_text() << "\nwrote " << out_dir << "\n";
            for (const auto& cell : summary.cells)
                if (!cell.ok)
                    std::cerr << "cell failed: " << cell.topic << " / " << cell.method << ": "
                              << cell.error << "\n";
        } else if (inspect_cmd->parsed()) {
            std::cout << inspect_artifact(inspect_path);
        } else if (export_embeddings->parsed()) {
            const Population population = Population::load(export_pop);
            HashEmbedder embedder(export_dim);
            std::vector<std::string> texts;
            for (const auto& record : population.members)
                texts.push_back(record.free_text ? *record.free_text
                                                 : render_persona_text(record));
            const auto vectors = embedder.embed(texts);
            std::ostringstream out;
            for (std::size_t i = 0; i < vectors.size(); ++i) {
                nlohmann::json line{
                    {"id", population.members[i].source_id.value_or(std::to_string(i))},
                    {"vector", vectors[i]}};
                out << line.dump() << "\n";
            }
            write_file(export_out, out.str());
            std::cout << "wrote " << export_out << " (" << vectors.size() << " vectors)\n";
        }
        return 0;
    } catch (const HagError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return errc_exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
