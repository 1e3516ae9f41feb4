#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hag/database.h"
#include "hag/persona.h"
#include "hag/provider.h"
#include "hag/tree.h"

namespace hag {

enum class CoverageTag { Hit, Miss };

// Per-leaf accounting of the grounding pass: target seats, database supply,
// what was actually sampled, and the synthetic remainder.
struct LeafAllocation {
    PersonaVector persona;
    std::size_t target = 0;
    std::size_t available = 0;
    CoverageTag tag = CoverageTag::Miss;
    std::vector<std::string> sampled_ids;
    std::size_t augment_gap = 0;

    nlohmann::json to_json() const;
};

// Largest-remainder apportionment of N seats over the leaves, aligned with
// the input order. Sums exactly to N; every count is within 1 of N * prob.
// Ties go to the larger remainder, then larger probability, then the
// lexicographically first persona.
std::vector<std::size_t> allocate_counts(const std::vector<LeafPersona>& leaves, std::size_t N);

// Seeded uniform sample (without replacement) of records matching every
// assignment. Returns min(limit, matches) records.
std::vector<PersonaRecord> retrieve(const PersonaDatabase& db, const PersonaVector& persona,
                                    std::size_t limit, std::uint64_t seed);

// Stage 2: allocate seats per leaf, fill from the database first, then
// synthesize the deficit constrained to each leaf's path. Population meta
// carries the full allocation report.
Population instantiate(const DistributionTree& tree, const PersonaDatabase& db, std::size_t N,
                       KnowledgeProvider& provider, std::uint64_t seed,
                       const DimensionSchema& schema,
                       const ProviderParams& params = ProviderParams{});

}  // namespace hag
