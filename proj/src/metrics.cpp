#include "hag/metrics.h"

#include <cmath>
#include <set>

#include "hag/errors.h"

namespace hag {

namespace {

constexpr double kLog2 = 0.6931471805599453;  // ln 2

double log2_safe(double x) { return std::log(x) / kLog2; }

std::set<std::string> union_support(const Distribution& p, const Distribution& q) {
    std::set<std::string> labels;
    for (const auto& [label, prob] : p.entries) labels.insert(label);
    for (const auto& [label, prob] : q.entries) labels.insert(label);
    return labels;
}

void require_comparable(const Distribution& p, const Distribution& q) {
    if (p.dimension_id != q.dimension_id)
        throw HagError(Errc::DimensionMismatch,
                       "cannot compare " + p.dimension_id + " with " + q.dimension_id);
    if (p.empty() || q.empty())
        throw HagError(Errc::InvariantViolation,
                       "divergence needs non-empty distributions (" + p.dimension_id + ")");
}

}  // namespace

double jsd(const Distribution& p, const Distribution& q) {
    require_comparable(p, q);
    double sum = 0.0;
    for (const auto& label : union_support(p, q)) {
        const double pi = p.probability(label);
        const double qi = q.probability(label);
        const double mi = 0.5 * (pi + qi);
        if (pi > 0.0) sum += 0.5 * pi * log2_safe(pi / mi);
        if (qi > 0.0) sum += 0.5 * qi * log2_safe(qi / mi);
    }
    if (sum < 0.0) sum = 0.0;  // clip fp residue
    if (sum > 1.0) sum = 1.0;
    return sum;
}

double kl(const Distribution& p, const Distribution& q, double epsilon) {
    require_comparable(p, q);
    if (epsilon <= 0.0) throw HagError(Errc::ConfigError, "epsilon must be > 0");
    const auto labels = union_support(p, q);
    double q_mass = 0.0;
    for (const auto& label : labels) q_mass += q.probability(label) + epsilon;
    double sum = 0.0;
    for (const auto& label : labels) {
        const double pi = p.probability(label);
        if (pi <= 0.0) continue;
        const double qi = (q.probability(label) + epsilon) / q_mass;
        sum += pi * log2_safe(pi / qi);
    }
    return sum < 0.0 ? 0.0 : sum;
}

double gini_simpson(const Distribution& p) {
    if (p.entries.empty()) return 0.0;
    double sum_sq = 0.0;
    for (const auto& [label, prob] : p.entries) sum_sq += prob * prob;
    const double gs = 1.0 - sum_sq;
    return gs < 0.0 ? 0.0 : gs;
}

FidelityResult dist_fidelity(const Population& gen, const Population& gt,
                             const DimensionSchema& schema, DivergenceMetric metric,
                             double epsilon) {
    if (gen.members.empty() || gt.members.empty())
        throw HagError(Errc::EmptyPopulation, "both populations must be non-empty");
    FidelityResult result;
    double total = 0.0;
    for (const auto& dim : schema.dimensions()) {
        const Distribution d_gen = marginal(gen, dim.id, schema);
        const Distribution d_gt = marginal(gt, dim.id, schema);
        if (d_gen.empty() || d_gt.empty()) {
            result.excluded.push_back(dim.id);
            continue;
        }
        const double value = metric == DivergenceMetric::Jsd ? jsd(d_gen, d_gt)
                                                             : kl(d_gen, d_gt, epsilon);
        result.per_dimension[dim.id] = value;
        total += value;
    }
    if (result.per_dimension.empty())
        throw HagError(Errc::NoEvaluableDimensions,
                       "every dimension lacked known labels on one side");
    result.mean = total / static_cast<double>(result.per_dimension.size());
    return result;
}

DiversityResult diversity_error(const Population& gen, const Population& gt,
                                const DimensionSchema& schema) {
    if (gen.members.empty() || gt.members.empty())
        throw HagError(Errc::EmptyPopulation, "both populations must be non-empty");
    DiversityResult result;
    double total = 0.0;
    std::size_t evaluated = 0;
    for (const auto& dim : schema.dimensions()) {
        const Distribution d_gen = marginal(gen, dim.id, schema);
        const Distribution d_gt = marginal(gt, dim.id, schema);
        if (d_gen.empty() || d_gt.empty()) {
            result.excluded.push_back(dim.id);
            continue;
        }
        const double gs_gen = gini_simpson(d_gen);
        const double gs_gt = gini_simpson(d_gt);
        result.gs_gen[dim.id] = gs_gen;
        result.gs_gt[dim.id] = gs_gt;
        total += std::abs(gs_gen - gs_gt);
        ++evaluated;
    }
    if (evaluated == 0)
        throw HagError(Errc::NoEvaluableDimensions,
                       "every dimension lacked known labels on one side");
    result.mean = total / static_cast<double>(evaluated);
    return result;
}

Distribution joint_distribution(const Population& population,
                                const std::vector<std::string>& dimension_ids,
                                const DimensionSchema& schema) {
    if (population.members.empty())
        throw HagError(Errc::EmptyPopulation, "population is empty");
    if (dimension_ids.empty())
        throw HagError(Errc::UnknownDimension, "joint distribution needs dimensions");
    for (const auto& id : dimension_ids)
        if (!schema.has(id)) throw HagError(Errc::UnknownDimension, id);

    Distribution joint;
    std::string joint_id = "joint";
    for (const auto& id : dimension_ids) joint_id += ":" + id;
    joint.dimension_id = joint_id;

    std::map<std::string, std::size_t> counts;
    std::size_t known = 0;
    for (const auto& record : population.members) {
        std::string key;
        bool has_unknown = false;
        for (const auto& id : dimension_ids) {
            auto it = record.values.find(id);
            if (it == record.values.end() || it->second == kUnknownLabel) {
                has_unknown = true;
                break;
            }
            if (!key.empty()) key += "|";
            key += id + "=" + it->second;
        }
        if (has_unknown) continue;
        ++counts[key];
        ++known;
    }
    for (const auto& [key, count] : counts)
        joint.entries[key] = static_cast<double>(count) / static_cast<double>(known);
    return joint;
}

std::size_t adaptive_sample_size(std::size_t M, double Z, double sigma, double E) {
    if (M == 0) throw HagError(Errc::InvalidSize, "population must be >= 1");
    if (E <= 0.0) throw HagError(Errc::ConfigError, "error margin must be > 0");
    const double n0 = (Z * sigma / E) * (Z * sigma / E);
    const double corrected = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(M));
    const auto n = static_cast<std::size_t>(std::ceil(corrected));
    return std::min(M, std::max<std::size_t>(30, n));
}

SamplingPlan sampling_plan(std::size_t M, double Z, double sigma, double E) {
    SamplingPlan plan;
    plan.population = M;
    plan.z = Z;
    plan.sigma = sigma;
    plan.error = E;
    plan.sample = adaptive_sample_size(M, Z, sigma, E);
    return plan;
}

}  // namespace hag
