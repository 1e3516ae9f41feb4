#pragma once

#include <cstdint>
#include <string>

#include "hag/database.h"
#include "hag/embedder.h"
#include "hag/grounding.h"
#include "hag/provider.h"

namespace hag {

enum class Method { RandomSelect, TopicRetrieval, LlmGenerate, HagFlat, Hag };

const char* method_name(Method method);
Method method_from_name(const std::string& name);

struct GeneratorSpec {
    Method method = Method::Hag;
    std::string topic;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

// Uniform sample from the database: without replacement when it is large
// enough, with replacement otherwise (flagged in meta).
Population random_select(const PersonaDatabase& db, std::size_t N, std::uint64_t seed);

// Top-N records by cosine similarity between each rendered persona text and
// the topic embedding. Ties break toward the lower record id.
Population topic_retrieval(const PersonaDatabase& db, const std::string& topic, std::size_t N,
                           Embedder& embedder);

// End-to-end synthesis: batched persona generation until N valid records
// accumulate. Invalid completions are dropped and regenerated; the call
// budget bounds runaway providers.
Population llm_generate(KnowledgeProvider& provider, const std::string& topic, std::size_t N,
                        const DimensionSchema& schema,
                        const ProviderParams& params = ProviderParams{},
                        std::size_t batch_size = 10);

// Ablation: every dimension's distribution inferred from the topic alone
// (empty ancestor context), joined as an outer product, then grounded
// through the same instantiation path as the hierarchical method.
Population hag_flat(KnowledgeProvider& provider, const std::string& topic, std::size_t N,
                    const DimensionSchema& schema, const PersonaDatabase& db,
                    std::uint64_t seed, const ProviderParams& params = ProviderParams{});

// The flat product tree underlying hag_flat, exposed for inspection.
DistributionTree build_flat_tree(KnowledgeProvider& provider, const std::string& topic,
                                 const DimensionSchema& schema, const ProviderParams& params);

}  // namespace hag
