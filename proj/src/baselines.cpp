#include "hag/baselines.h"

#include <algorithm>

#include "hag/errors.h"
#include "hag/util.h"

namespace hag {

const char* method_name(Method method) {
    switch (method) {
        case Method::RandomSelect: return "random_select";
        case Method::TopicRetrieval: return "topic_retrieval";
        case Method::LlmGenerate: return "llm_generate";
        case Method::HagFlat: return "hag_flat";
        case Method::Hag: return "hag";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    const std::string lowered = to_lower(name);
    if (lowered == "random_select") return Method::RandomSelect;
    if (lowered == "topic_retrieval") return Method::TopicRetrieval;
    if (lowered == "llm_generate") return Method::LlmGenerate;
    if (lowered == "hag_flat") return Method::HagFlat;
    if (lowered == "hag") return Method::Hag;
    throw HagError(Errc::ConfigError, "unknown method: " + name);
}

Population random_select(const PersonaDatabase& db, std::size_t N, std::uint64_t seed) {
    if (db.empty()) throw HagError(Errc::EmptyDatabase, "cannot sample an empty database");
    if (N == 0) throw HagError(Errc::InvalidSize, "population size must be >= 1");

    Population population;
    Rng rng(seed);
    const bool with_replacement = db.size() < N;
    if (with_replacement) {
        for (std::size_t i = 0; i < N; ++i)
            population.members.push_back(db.records()[rng.next_index(db.size())]);
    } else {
        std::vector<std::size_t> ids(db.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
        shuffle(ids, rng);
        for (std::size_t i = 0; i < N; ++i)
            population.members.push_back(db.records()[ids[i]]);
    }
    population.meta.generator = method_name(Method::RandomSelect);
    population.meta.seed = seed;
    population.meta.extra["with_replacement"] = with_replacement;
    return population;
}

Population topic_retrieval(const PersonaDatabase& db, const std::string& topic, std::size_t N,
                           Embedder& embedder) {
    if (N == 0) throw HagError(Errc::InvalidSize, "population size must be >= 1");
    if (db.size() < N)
        throw HagError(Errc::InvalidSize,
                       "database holds " + std::to_string(db.size()) + " records, need " +
                           std::to_string(N));

    const auto topic_vec = embedder.embed({topic}).front();

    std::vector<double> similarity(db.size());
    constexpr std::size_t kBatch = 32;
    for (std::size_t start = 0; start < db.size(); start += kBatch) {
        const std::size_t end = std::min(db.size(), start + kBatch);
        std::vector<std::string> texts;
        texts.reserve(end - start);
        for (std::size_t i = start; i < end; ++i) {
            const auto& record = db.records()[i];
            texts.push_back(record.free_text ? *record.free_text
                                             : render_persona_text(record));
        }
        const auto vectors = embedder.embed(texts);
        for (std::size_t i = start; i < end; ++i)
            similarity[i] = cosine_similarity(vectors[i - start], topic_vec);
    }

    std::vector<std::size_t> order(db.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (similarity[a] != similarity[b]) return similarity[a] > similarity[b];
        return a < b;
    });

    Population population;
    population.topic = topic;
    nlohmann::json scores = nlohmann::json::array();
    for (std::size_t i = 0; i < N; ++i) {
        const auto& record = db.records()[order[i]];
        population.members.push_back(record);
        scores.push_back({{"record", order[i]},
                          {"source_id", record.source_id.value_or("")},
                          {"similarity", similarity[order[i]]}});
    }
    population.meta.generator = method_name(Method::TopicRetrieval);
    population.meta.provider_fingerprint = embedder.fingerprint();
    population.meta.extra["similarity"] = scores;
    return population;
}

Population llm_generate(KnowledgeProvider& provider, const std::string& topic, std::size_t N,
                        const DimensionSchema& schema, const ProviderParams& params,
                        std::size_t batch_size) {
    if (N == 0) throw HagError(Errc::InvalidSize, "population size must be >= 1");
    if (batch_size == 0) throw HagError(Errc::ConfigError, "batch_size must be >= 1");

    Population population;
    population.topic = topic;
    // Enough batches for one fully invalid response per good one, plus slack
    // for small N; beyond that the provider is broken.
    const std::size_t max_batches = 2 * ((N + batch_size - 1) / batch_size) + 8;
    std::size_t batches = 0;
    std::size_t dropped = 0;
    while (population.members.size() < N) {
        if (batches >= max_batches)
            throw HagError(Errc::GenerationBudgetExceeded,
                           std::to_string(batches) + " batches yielded only " +
                               std::to_string(population.members.size()) + " of " +
                               std::to_string(N) + " valid personas");
        const std::size_t want =
            std::min(batch_size, N - population.members.size());
        auto records = provider.generate_batch(topic, schema, static_cast<int>(want),
                                               static_cast<int>(batches), params);
        dropped += want > records.size() ? want - records.size() : 0;
        for (auto& record : records) {
            if (population.members.size() == N) break;
            population.members.push_back(std::move(record));
        }
        ++batches;
    }
    population.meta.generator = method_name(Method::LlmGenerate);
    population.meta.provider_fingerprint = provider.fingerprint();
    population.meta.extra["batches"] = batches;
    population.meta.extra["dropped"] = dropped;
    return population;
}

DistributionTree build_flat_tree(KnowledgeProvider& provider, const std::string& topic,
                                 const DimensionSchema& schema, const ProviderParams& params) {
    params.validate();
    DistributionTree tree;
    tree.topic = topic;
    tree.root.edge_weight = 1.0;
    tree.dim_sequence = provider.prioritize_dims(topic, schema, params);

    // One call per dimension, all with empty ancestor context; the joint is
    // the outer product of the resulting marginals by construction.
    std::vector<std::vector<WeightedValue>> marginals;
    for (const auto& dim_id : tree.dim_sequence) {
        const Dimension& dim = schema.at(dim_id);
        std::optional<std::vector<std::string>> allowed;
        if (dim.vocabulary) allowed = *dim.vocabulary;
        marginals.push_back(
            provider.infer_conditional(topic, dim_id, PersonaVector{}, params, allowed));
    }

    std::vector<TreeNode> layer;  // assembled bottom-up
    for (std::size_t level = marginals.size(); level-- > 0;) {
        std::vector<TreeNode> parents;
        for (const auto& wv : marginals[level]) {
            TreeNode node;
            node.dimension_id = tree.dim_sequence[level];
            node.value = wv.label;
            node.edge_weight = wv.weight;
            node.children = layer;
            parents.push_back(std::move(node));
        }
        layer = std::move(parents);
    }
    tree.root.children = std::move(layer);
    validate_tree(tree);
    tree.meta["provider_fingerprint"] = provider.fingerprint();
    tree.meta["flat"] = true;
    return tree;
}

Population hag_flat(KnowledgeProvider& provider, const std::string& topic, std::size_t N,
                    const DimensionSchema& schema, const PersonaDatabase& db,
                    std::uint64_t seed, const ProviderParams& params) {
    const DistributionTree tree = build_flat_tree(provider, topic, schema, params);
    Population population = instantiate(tree, db, N, provider, seed, schema, params);
    population.meta.generator = method_name(Method::HagFlat);
    return population;
}

}  // namespace hag
