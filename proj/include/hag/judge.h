#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hag/cluster.h"
#include "hag/provider.h"

namespace hag {

// One joint judgment over all archetypes: integer 1-5. Out-of-range or
// unparsable scores are re-asked up to params.retries times, then
// MalformedJudgeResponse.
int judge_archetypes(ChatBackend& judge, const std::string& topic,
                     const std::vector<Archetype>& archetypes, const ProviderParams& params);

struct ConsistencyResult {
    double mean = 0.0;
    std::size_t sample_size = 0;
    std::vector<int> scores;  // aligned with sampled member order
};

// Per-record consistency scores over an adaptively sized seeded sample.
ConsistencyResult judge_consistency(ChatBackend& judge, const std::string& topic,
                                    const Population& population, std::uint64_t seed,
                                    const ProviderParams& params);

}  // namespace hag
