#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "hag/persona.h"
#include "hag/schema.h"

namespace hag {

// Jensen-Shannon divergence, base-2 logarithm, over the union of category
// labels. Symmetric, bounded to [0,1], 0 iff P = Q.
double jsd(const Distribution& p, const Distribution& q);

// KL(P || Q), base-2. Q is smoothed by adding epsilon to every category of
// the union support and renormalizing, so the result is finite even when Q
// misses mass where P has it.
double kl(const Distribution& p, const Distribution& q, double epsilon = 1e-6);

// Gini-Simpson diversity 1 - sum p_i^2. 0 for a degenerate distribution and
// for an empty one.
double gini_simpson(const Distribution& p);

enum class DivergenceMetric { Jsd, Kl };

struct FidelityResult {
    double mean = 0.0;
    std::map<std::string, double> per_dimension;
    // Dimensions with no known-label observations on one side; not averaged.
    std::vector<std::string> excluded;
};

// Mean per-dimension divergence between the two populations' marginals.
// Throws NoEvaluableDimensions when every dimension is excluded.
FidelityResult dist_fidelity(const Population& gen, const Population& gt,
                             const DimensionSchema& schema, DivergenceMetric metric,
                             double epsilon = 1e-6);

struct DiversityResult {
    double mean = 0.0;
    std::map<std::string, double> gs_gen;
    std::map<std::string, double> gs_gt;
    std::vector<std::string> excluded;
};

// Mean absolute Gini-Simpson gap across evaluable dimensions.
DiversityResult diversity_error(const Population& gen, const Population& gt,
                                const DimensionSchema& schema);

// Joint empirical distribution over the given dimensions; category labels
// are "dim=label|dim=label" path keys. Records with an Unknown on any of
// the dimensions are excluded and the rest renormalized.
Distribution joint_distribution(const Population& population,
                                const std::vector<std::string>& dimension_ids,
                                const DimensionSchema& schema);

struct SamplingPlan {
    std::size_t population = 0;  // M
    double z = 1.96;
    double sigma = 1.0;
    double error = 0.2;  // E
    std::size_t sample = 0;  // n
};

// Sample size with finite population correction: n0 = (Z*sigma/E)^2,
// n = min(M, max(30, ceil(n0 / (1 + (n0-1)/M)))).
std::size_t adaptive_sample_size(std::size_t M, double Z = 1.96, double sigma = 1.0,
                                 double E = 0.2);

SamplingPlan sampling_plan(std::size_t M, double Z = 1.96, double sigma = 1.0, double E = 0.2);

}  // namespace hag
