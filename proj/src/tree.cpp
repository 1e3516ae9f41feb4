#include "hag/tree.h"

#include <cmath>

#include "hag/util.h"

namespace hag {

namespace {

constexpr double kSiblingTolerance = 1e-9;
constexpr double kLeafMassTolerance = 1e-6;
// Beyond this depth edge products are accumulated as log sums.
constexpr std::size_t kLogSpaceDepth = 8;

void expand(TreeNode& node, const PersonaVector& context, std::size_t level,
            const std::string& topic, const DimensionSchema& schema,
            KnowledgeProvider& provider, const ProviderParams& params,
            const std::vector<std::string>& dims) {
    if (level >= dims.size()) return;
    const Dimension& dim = schema.at(dims[level]);
    std::optional<std::vector<std::string>> allowed;
    if (dim.vocabulary) allowed = *dim.vocabulary;
    auto values = provider.infer_conditional(topic, dim.id, context, params, allowed);
    for (const auto& wv : values) {
        TreeNode child;
        child.dimension_id = dim.id;
        child.value = wv.label;
        child.edge_weight = wv.weight;
        node.children.push_back(std::move(child));
    }
    for (auto& child : node.children) {
        expand(child, context.extended(dim.id, child.value), level + 1, topic, schema,
               provider, params, dims);
    }
}

void collect_leaves(const TreeNode& node, PersonaVector path, double prob, double log_prob,
                    bool use_log, std::vector<LeafPersona>& out) {
    if (node.children.empty()) {
        out.push_back({std::move(path), use_log ? std::exp(log_prob) : prob});
        return;
    }
    for (const auto& child : node.children) {
        collect_leaves(child, path.extended(child.dimension_id, child.value),
                       prob * child.edge_weight,
                       log_prob + std::log(std::max(child.edge_weight, 1e-300)), use_log, out);
    }
}

void validate_node(const TreeNode& node, std::size_t depth,
                   const std::vector<std::string>& dims, bool require_full_depth) {
    if (node.children.empty()) {
        if (require_full_depth && depth != dims.size())
            throw HagError(Errc::PartialTree,
                           "leaf at depth " + std::to_string(depth) + " but tree declares " +
                               std::to_string(dims.size()) + " dimensions");
        return;
    }
    if (depth >= dims.size())
        throw HagError(Errc::InvariantViolation, "tree deeper than its dimension sequence");
    double sum = 0.0;
    for (const auto& child : node.children) {
        if (child.dimension_id != dims[depth])
            throw HagError(Errc::InvariantViolation,
                           "child dimension " + child.dimension_id + " at level " +
                               std::to_string(depth) + " should be " + dims[depth]);
        if (child.value.empty())
            throw HagError(Errc::InvariantViolation, "empty node value");
        if (child.edge_weight < 0.0 || child.edge_weight > 1.0)
            throw HagError(Errc::InvariantViolation,
                           "edge weight outside [0,1]: " + std::to_string(child.edge_weight));
        sum += child.edge_weight;
    }
    if (std::abs(sum - 1.0) > kSiblingTolerance)
        throw HagError(Errc::InvariantViolation,
                       "sibling weights sum to " + std::to_string(sum) + " at level " +
                           std::to_string(depth));
    for (const auto& child : node.children)
        validate_node(child, depth + 1, dims, require_full_depth);
}

nlohmann::json node_to_json(const TreeNode& node) {
    nlohmann::json children = nlohmann::json::array();
    for (const auto& child : node.children) children.push_back(node_to_json(child));
    return nlohmann::json{{"dimension_id", node.dimension_id},
                          {"value", node.value},
                          {"edge_weight", node.edge_weight},
                          {"children", children}};
}

TreeNode node_from_json(const nlohmann::json& doc) {
    TreeNode node;
    node.dimension_id = doc.at("dimension_id").get<std::string>();
    node.value = doc.at("value").get<std::string>();
    node.edge_weight = doc.at("edge_weight").get<double>();
    for (const auto& child : doc.at("children")) node.children.push_back(node_from_json(child));
    return node;
}

TreeNode prune_node(const TreeNode& node, double prefix_prob, double min_path_prob,
                    bool& survives) {
    TreeNode kept;
    kept.dimension_id = node.dimension_id;
    kept.value = node.value;
    kept.edge_weight = node.edge_weight;
    if (node.children.empty()) {
        survives = prefix_prob >= min_path_prob;
        return kept;
    }
    double surviving_sum = 0.0;
    for (const auto& child : node.children) {
        const double child_prefix = prefix_prob * child.edge_weight;
        if (child_prefix < min_path_prob) continue;
        bool child_survives = false;
        TreeNode pruned_child = prune_node(child, child_prefix, min_path_prob, child_survives);
        if (!child_survives) continue;
        surviving_sum += pruned_child.edge_weight;
        kept.children.push_back(std::move(pruned_child));
    }
    if (kept.children.empty()) {
        survives = false;
        return kept;
    }
    for (auto& child : kept.children) child.edge_weight /= surviving_sum;
    survives = true;
    return kept;
}

}  // namespace

DistributionTree build_tree(const std::string& topic, const DimensionSchema& schema,
                            KnowledgeProvider& provider, const ProviderParams& params) {
    params.validate();
    DistributionTree tree;
    tree.topic = topic;
    tree.root.edge_weight = 1.0;
    tree.dim_sequence = provider.prioritize_dims(topic, schema, params);
    try {
        expand(tree.root, PersonaVector{}, 0, topic, schema, provider, params,
               tree.dim_sequence);
    } catch (const HagError& e) {
        tree.meta["partial"] = true;
        // The failing context is embedded in the provider's message; record
        // what was asked for at the point of failure.
        tree.meta["failure"] = e.what();
        throw PartialTreeError(e.code(),
                               std::string("tree construction stopped: ") + e.what(), tree);
    }
    validate_tree(tree);
    tree.meta["provider_fingerprint"] = provider.fingerprint();
    tree.meta["params"] = {{"max_depth", params.max_depth},
                           {"max_branches", params.max_branches},
                           {"temperature", params.temperature},
                           {"retries", params.retries}};
    return tree;
}

std::vector<LeafPersona> enumerate_leaves(const DistributionTree& tree) {
    std::vector<LeafPersona> leaves;
    if (tree.root.children.empty()) return leaves;
    const bool use_log = tree.dim_sequence.size() > kLogSpaceDepth;
    for (const auto& child : tree.root.children) {
        collect_leaves(child, PersonaVector{}.extended(child.dimension_id, child.value),
                       child.edge_weight, std::log(std::max(child.edge_weight, 1e-300)),
                       use_log, leaves);
    }
    return leaves;
}

DistributionTree prune(const DistributionTree& tree, double min_path_prob) {
    if (min_path_prob < 0.0 || min_path_prob >= 1.0)
        throw HagError(Errc::ConfigError, "min_path_prob must lie in [0, 1)");
    DistributionTree out;
    out.topic = tree.topic;
    out.dim_sequence = tree.dim_sequence;
    out.meta = tree.meta;
    out.root.edge_weight = 1.0;
    bool survives = false;
    TreeNode pruned = prune_node(tree.root, 1.0, min_path_prob, survives);
    if (!survives || pruned.children.empty())
        throw HagError(Errc::AllPruned, "no leaf clears min_path_prob=" +
                                            std::to_string(min_path_prob));
    out.root.children = std::move(pruned.children);
    if (min_path_prob > 0.0) out.meta["min_path_prob"] = min_path_prob;
    return out;
}

void validate_tree(const DistributionTree& tree, bool require_full_depth) {
    if (tree.root.children.empty()) {
        if (!tree.dim_sequence.empty() && require_full_depth)
            throw HagError(Errc::PartialTree, "tree has dimensions but no nodes");
        return;
    }
    if (tree.dim_sequence.empty())
        throw HagError(Errc::InvariantViolation, "tree has nodes but no dimension sequence");
    validate_node(tree.root, 0, tree.dim_sequence, require_full_depth);
    double mass = 0.0;
    for (const auto& leaf : enumerate_leaves(tree)) mass += leaf.path_prob;
    if (std::abs(mass - 1.0) > kLeafMassTolerance)
        throw HagError(Errc::InvariantViolation,
                       "leaf probabilities sum to " + std::to_string(mass));
}

nlohmann::json serialize_tree(const DistributionTree& tree) {
    return nlohmann::json{{"format_version", kFormatVersion},
                          {"artifact_type", "tree"},
                          {"topic", tree.topic},
                          {"dim_sequence", tree.dim_sequence},
                          {"root", {{"children", node_to_json(tree.root)["children"]}}},
                          {"meta", tree.meta}};
}

DistributionTree deserialize_tree(const nlohmann::json& doc) {
    if (!doc.contains("format_version") ||
        doc["format_version"].get<std::string>() != kFormatVersion)
        throw HagError(Errc::FormatVersionMismatch,
                       "tree file format_version is not " + std::string(kFormatVersion));
    DistributionTree tree;
    try {
        tree.topic = doc.at("topic").get<std::string>();
        tree.dim_sequence = doc.at("dim_sequence").get<std::vector<std::string>>();
        tree.root.edge_weight = 1.0;
        for (const auto& child : doc.at("root").at("children"))
            tree.root.children.push_back(node_from_json(child));
        tree.meta = doc.value("meta", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw HagError(Errc::InvariantViolation, std::string("malformed tree file: ") + e.what());
    }
    const bool partial = tree.meta.value("partial", false);
    validate_tree(tree, /*require_full_depth=*/!partial);
    return tree;
}

DistributionTree load_tree(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableSource, std::string("tree file: ") + e.what());
    }
    return deserialize_tree(doc);
}

void save_tree(const DistributionTree& tree, const std::string& path) {
    write_file(path, serialize_tree(tree).dump(2) + "\n");
}

}  // namespace hag
