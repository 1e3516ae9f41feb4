#include "hag/cluster.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hag/errors.h"
#include "hag/util.h"

namespace hag {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

std::size_t nearest_center(const std::vector<double>& point,
                           const std::vector<std::vector<double>>& centers) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::max();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = squared_distance(point, centers[c]);
        if (d < best_dist) {
            best_dist = d;
            best = c;
        }
    }
    return best;
}

}  // namespace

std::vector<std::size_t> kmeans_assign(const std::vector<std::vector<double>>& points,
                                       std::size_t K, std::uint64_t seed,
                                       std::size_t max_iterations) {
    if (K == 0) throw HagError(Errc::ConfigError, "K must be >= 1");
    if (points.size() < K)
        throw HagError(Errc::PopulationTooSmall,
                       std::to_string(points.size()) + " points for K=" + std::to_string(K));

    // Greedy farthest-point seeding after a seeded first pick: spreads
    // centers deterministically without k-means++'s randomness.
    Rng rng(seed);
    std::vector<std::vector<double>> centers;
    centers.push_back(points[rng.next_index(points.size())]);
    while (centers.size() < K) {
        std::size_t farthest = 0;
        double farthest_dist = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double nearest = std::numeric_limits<double>::max();
            for (const auto& center : centers)
                nearest = std::min(nearest, squared_distance(points[i], center));
            if (nearest > farthest_dist) {
                farthest_dist = nearest;
                farthest = i;
            }
        }
        centers.push_back(points[farthest]);
    }

    std::vector<std::size_t> assignment(points.size(), 0);
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const std::size_t c = nearest_center(points[i], centers);
            if (c != assignment[i]) {
                assignment[i] = c;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        std::vector<std::vector<double>> sums(K,
                                              std::vector<double>(points.front().size(), 0.0));
        std::vector<std::size_t> counts(K, 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            ++counts[assignment[i]];
            for (std::size_t d = 0; d < points[i].size(); ++d)
                sums[assignment[i]][d] += points[i][d];
        }
        for (std::size_t c = 0; c < K; ++c) {
            if (counts[c] == 0) {
                // Reseed an empty cluster with the point farthest from its
                // current center.
                std::size_t farthest = 0;
                double farthest_dist = -1.0;
                for (std::size_t i = 0; i < points.size(); ++i) {
                    const double d = squared_distance(points[i], centers[assignment[i]]);
                    if (d > farthest_dist) {
                        farthest_dist = d;
                        farthest = i;
                    }
                }
                centers[c] = points[farthest];
                assignment[farthest] = c;
                continue;
            }
            for (std::size_t d = 0; d < sums[c].size(); ++d)
                centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }
    }
    return assignment;
}

std::vector<Archetype> archetype_centroids(const Population& population, Embedder& embedder,
                                           std::size_t K, std::uint64_t seed) {
    if (population.members.empty())
        throw HagError(Errc::EmptyPopulation, "population is empty");
    if (population.size() < K)
        throw HagError(Errc::PopulationTooSmall,
                       "population of " + std::to_string(population.size()) +
                           " cannot support K=" + std::to_string(K));

    std::vector<std::string> texts;
    texts.reserve(population.size());
    for (const auto& record : population.members)
        texts.push_back(record.free_text ? *record.free_text : render_persona_text(record));
    std::vector<std::vector<double>> points;
    constexpr std::size_t kBatch = 32;
    for (std::size_t start = 0; start < texts.size(); start += kBatch) {
        const std::size_t end = std::min(texts.size(), start + kBatch);
        auto batch = embedder.embed(
            std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                     texts.begin() + static_cast<std::ptrdiff_t>(end)));
        for (auto& vec : batch) points.push_back(std::move(vec));
    }

    const auto assignment = kmeans_assign(points, K, seed);

    std::vector<std::vector<double>> centers(K, std::vector<double>(points.front().size(), 0.0));
    std::vector<std::size_t> counts(K, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        ++counts[assignment[i]];
        for (std::size_t d = 0; d < points[i].size(); ++d)
            centers[assignment[i]][d] += points[i][d];
    }
    for (std::size_t c = 0; c < K; ++c)
        if (counts[c] > 0)
            for (double& v : centers[c]) v /= static_cast<double>(counts[c]);

    std::vector<Archetype> archetypes;
    for (std::size_t c = 0; c < K; ++c) {
        if (counts[c] == 0) continue;
        std::size_t best = points.size();
        double best_dist = std::numeric_limits<double>::max();
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (assignment[i] != c) continue;
            const double d = squared_distance(points[i], centers[c]);
            if (d < best_dist) {
                best_dist = d;
                best = i;
            }
        }
        Archetype archetype;
        archetype.representative = population.members[best];
        archetype.member_index = best;
        archetype.cluster_size = counts[c];
        archetype.share =
            static_cast<double>(counts[c]) / static_cast<double>(population.size());
        archetypes.push_back(std::move(archetype));
    }
    std::sort(archetypes.begin(), archetypes.end(), [](const Archetype& a, const Archetype& b) {
        if (a.share != b.share) return a.share > b.share;
        return a.member_index < b.member_index;
    });
    return archetypes;
}

}  // namespace hag
