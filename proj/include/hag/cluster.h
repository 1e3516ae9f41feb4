#pragma once

#include <cstdint>
#include <vector>

#include "hag/embedder.h"
#include "hag/persona.h"

namespace hag {

struct Archetype {
    PersonaRecord representative;  // actual member nearest the centroid
    std::size_t member_index = 0;  // its position in the population
    double share = 0.0;
    std::size_t cluster_size = 0;
};

// K-means over rendered-persona embeddings: seeded first center, greedy
// farthest-point seeding for the rest, Lloyd iterations with a fixed cap,
// deterministic tie-breaks. Archetypes come back ordered by share
// descending. Throws PopulationTooSmall when pop.size() < K.
std::vector<Archetype> archetype_centroids(const Population& population, Embedder& embedder,
                                           std::size_t K, std::uint64_t seed);

// Core k-means on prepared points; exposed for testing against brute force.
// Returns cluster assignment per point.
std::vector<std::size_t> kmeans_assign(const std::vector<std::vector<double>>& points,
                                       std::size_t K, std::uint64_t seed,
                                       std::size_t max_iterations = 100);

}  // namespace hag
