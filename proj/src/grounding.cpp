#include "hag/grounding.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "hag/util.h"

namespace hag {

nlohmann::json LeafAllocation::to_json() const {
    return nlohmann::json{{"persona", persona.key()},
                          {"target", target},
                          {"available", available},
                          {"tag", tag == CoverageTag::Hit ? "HIT" : "MISS"},
                          {"sampled_ids", sampled_ids},
                          {"augment_gap", augment_gap}};
}

std::vector<std::size_t> allocate_counts(const std::vector<LeafPersona>& leaves,
                                         std::size_t N) {
    if (N == 0) throw HagError(Errc::InvalidSize, "allocation size must be >= 1");
    if (leaves.empty()) throw HagError(Errc::InvalidSize, "no leaves to allocate over");

    std::vector<std::size_t> counts(leaves.size());
    std::vector<double> remainders(leaves.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const double quota = static_cast<double>(N) * leaves[i].path_prob;
        counts[i] = static_cast<std::size_t>(std::floor(quota));
        remainders[i] = quota - std::floor(quota);
        assigned += counts[i];
    }

    std::vector<std::size_t> order(leaves.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
        if (leaves[a].path_prob != leaves[b].path_prob)
            return leaves[a].path_prob > leaves[b].path_prob;
        return leaves[a].persona.key() < leaves[b].persona.key();
    });

    // Floors can undershoot by more than the leaf count only if the input
    // masses were badly off; a cyclic pass stays total-preserving anyway.
    for (std::size_t i = 0; assigned < N; i = (i + 1) % order.size()) {
        ++counts[order[i]];
        ++assigned;
    }
    return counts;
}

namespace {

std::vector<PersonaRecord> sample_matching(const PersonaDatabase& db,
                                           const PersonaVector& persona, std::size_t limit,
                                           Rng& rng, std::set<std::size_t>* used) {
    std::vector<std::size_t> ids = db.matching(persona);
    if (used) {
        ids.erase(std::remove_if(ids.begin(), ids.end(),
                                 [&](std::size_t id) { return used->count(id) > 0; }),
                  ids.end());
    }
    shuffle(ids, rng);
    if (ids.size() > limit) ids.resize(limit);
    std::vector<PersonaRecord> records;
    records.reserve(ids.size());
    for (std::size_t id : ids) {
        if (used) used->insert(id);
        records.push_back(db.records()[id]);
    }
    return records;
}

// Offline augmentation: copy a record matching the longest satisfiable
// prefix of the leaf path, then overwrite the constrained dimensions.
PersonaRecord resample_augment(const PersonaDatabase& db, const PersonaVector& leaf, Rng& rng) {
    for (std::size_t len = leaf.size() + 1; len-- > 0;) {
        const auto ids = db.matching(leaf.prefix(len));
        if (ids.empty()) continue;
        PersonaRecord record = db.records()[ids[rng.next_index(ids.size())]];
        for (const auto& a : leaf.assignments()) record.values[a.dimension_id] = a.label;
        record.provenance = Provenance::Augmented;
        record.source_id.reset();
        record.free_text = render_persona_text(record);
        return record;
    }
    throw HagError(Errc::AugmentationExhausted,
                   "no database record shares any prefix of " + leaf.key());
}

}  // namespace

std::vector<PersonaRecord> retrieve(const PersonaDatabase& db, const PersonaVector& persona,
                                    std::size_t limit, std::uint64_t seed) {
    Rng rng(seed);
    return sample_matching(db, persona, limit, rng, nullptr);
}

Population instantiate(const DistributionTree& tree, const PersonaDatabase& db, std::size_t N,
                       KnowledgeProvider& provider, std::uint64_t seed,
                       const DimensionSchema& schema, const ProviderParams& params) {
    if (N == 0) throw HagError(Errc::InvalidSize, "population size must be >= 1");
    const auto leaves = enumerate_leaves(tree);
    if (leaves.empty()) throw HagError(Errc::InvalidSize, "tree has no leaves");
    const auto counts = allocate_counts(leaves, N);

    Population population;
    population.topic = tree.topic;
    Rng rng(seed);
    std::set<std::size_t> used;
    nlohmann::json report = nlohmann::json::array();

    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const auto& leaf = leaves[i];
        LeafAllocation alloc;
        alloc.persona = leaf.persona;
        alloc.target = counts[i];
        alloc.available = db.count_matching(leaf.persona);
        alloc.tag = alloc.available >= alloc.target ? CoverageTag::Hit : CoverageTag::Miss;

        auto sampled = sample_matching(db, leaf.persona, alloc.target, rng, &used);
        for (const auto& record : sampled)
            alloc.sampled_ids.push_back(record.source_id.value_or(""));
        alloc.augment_gap = alloc.target - sampled.size();

        for (auto& record : sampled) population.members.push_back(std::move(record));
        for (std::size_t g = 0; g < alloc.augment_gap; ++g) {
            if (provider.can_generate()) {
                try {
                    population.members.push_back(
                        provider.generate_persona(tree.topic, leaf.persona, schema, params));
                } catch (const HagError& e) {
                    if (e.code() == Errc::ConstraintViolatedInResponse)
                        throw HagError(Errc::AugmentationExhausted,
                                       "constrained generation kept failing for " +
                                           leaf.persona.key() + ": " + e.what());
                    throw;
                }
            } else {
                population.members.push_back(resample_augment(db, leaf.persona, rng));
            }
        }
        report.push_back(alloc.to_json());
    }

    population.meta.generator = "hag";
    population.meta.seed = seed;
    population.meta.provider_fingerprint = provider.fingerprint();
    population.meta.extra["allocation"] = report;
    population.meta.extra["dim_sequence"] = tree.dim_sequence;
    return population;
}

}  // namespace hag
