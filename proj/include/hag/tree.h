#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hag/errors.h"
#include "hag/persona.h"
#include "hag/provider.h"
#include "hag/schema.h"

namespace hag {

// One value of one demographic dimension; edge_weight is the conditional
// probability of this value given the ancestor path.
struct TreeNode {
    std::string dimension_id;
    std::string value;
    double edge_weight = 0.0;
    std::vector<TreeNode> children;
};

// Topic-rooted hierarchy over an ordered dimension sequence. The root is
// virtual (carries no value); its children form the first layer.
struct DistributionTree {
    std::string topic;
    std::vector<std::string> dim_sequence;
    TreeNode root;
    nlohmann::json meta = nlohmann::json::object();
};

struct LeafPersona {
    PersonaVector persona;
    double path_prob = 0.0;
};

// Thrown when construction dies partway; carries whatever subtree had been
// assembled, with meta.failed_path naming the context that failed. code()
// is the underlying provider error so callers classify it unchanged.
class PartialTreeError : public HagError {
  public:
    PartialTreeError(Errc cause, const std::string& message, DistributionTree salvage)
        : HagError(cause, message), salvage_(std::move(salvage)) {}
    const DistributionTree& salvage() const { return salvage_; }

  private:
    DistributionTree salvage_;
};

DistributionTree build_tree(const std::string& topic, const DimensionSchema& schema,
                            KnowledgeProvider& provider, const ProviderParams& params);

// Depth-first, left-to-right. Path probabilities are products of edge
// weights (accumulated in log space for deep trees) and sum to 1 ± 1e-6.
std::vector<LeafPersona> enumerate_leaves(const DistributionTree& tree);

// Drops every subtree whose prefix probability falls below min_path_prob,
// then renormalizes surviving sibling groups. Throws AllPruned when the
// root loses all children.
DistributionTree prune(const DistributionTree& tree, double min_path_prob);

// Structural checks: sibling sums 1 ± 1e-9, weights in [0,1], uniform child
// dimension per group, and (when require_full_depth) every leaf at depth
// |dim_sequence|. Throws InvariantViolation or PartialTree.
void validate_tree(const DistributionTree& tree, bool require_full_depth = true);

nlohmann::json serialize_tree(const DistributionTree& tree);
DistributionTree deserialize_tree(const nlohmann::json& doc);
DistributionTree load_tree(const std::string& path);
void save_tree(const DistributionTree& tree, const std::string& path);

}  // namespace hag
