#include "hag/inspect.h"

#include <cstdio>
#include <map>
#include <sstream>

#include "hag/errors.h"
#include "hag/eval.h"
#include "hag/persona.h"
#include "hag/schema.h"
#include "hag/tree.h"
#include "hag/util.h"

namespace hag {

namespace {

void render_node(const TreeNode& node, std::size_t depth, std::ostringstream& out) {
    out << std::string(depth * 2, ' ') << node.dimension_id << " = " << node.value;
    char buf[32];
    std::snprintf(buf, sizeof buf, " (w=%.4f)", node.edge_weight);
    out << buf << "\n";
    for (const auto& child : node.children) render_node(child, depth + 1, out);
}

std::string render_tree(const DistributionTree& tree) {
    std::ostringstream out;
    out << "tree: " << tree.topic << "\n";
    out << "dimensions: " << join(tree.dim_sequence, " -> ") << "\n";
    for (const auto& child : tree.root.children) render_node(child, 1, out);
    const auto leaves = enumerate_leaves(tree);
    out << "leaves: " << leaves.size() << "\n";
    return out.str();
}

std::string render_population(const Population& population) {
    std::ostringstream out;
    out << "population: " << population.size() << " members";
    if (!population.topic.empty()) out << ", topic: " << population.topic;
    if (!population.meta.generator.empty()) out << ", generator: " << population.meta.generator;
    out << "\n";
    std::size_t real = 0;
    for (const auto& record : population.members)
        if (record.provenance == Provenance::Real) ++real;
    out << "provenance: " << real << " real, " << (population.size() - real) << " augmented\n";

    const DimensionSchema& schema = default_schema();
    char line[128];
    for (const auto& dim : schema.dimensions()) {
        std::map<std::string, std::size_t> counts;
        for (const auto& record : population.members) {
            auto it = record.values.find(dim.id);
            if (it != record.values.end()) ++counts[it->second];
        }
        if (counts.empty()) continue;
        out << "\n" << dim.name << ":\n";
        for (const auto& [label, count] : counts) {
            std::snprintf(line, sizeof line, "  %-28s %6zu  %5.1f%%\n", label.substr(0, 28).c_str(),
                          count, 100.0 * static_cast<double>(count) /
                                     static_cast<double>(population.size()));
            out << line;
        }
    }
    return out.str();
}

std::string render_report(const EvalReport& report) {
    std::ostringstream out;
    out << "report: " << report.generator << " vs ground truth";
    if (!report.topic.empty()) out << " on \"" << report.topic << "\"";
    out << "\nsizes: gen " << report.gen_size << ", gt " << report.gt_size << "\n";
    char line[128];
    std::snprintf(line, sizeof line, "%-24s %10.4f\n", "S_dist (JSD)", report.jsd.mean);
    out << line;
    std::snprintf(line, sizeof line, "%-24s %10.4f\n", "S_dist (KL)", report.kl.mean);
    out << line;
    std::snprintf(line, sizeof line, "%-24s %10.4f\n", "diversity error",
                  report.diversity.mean);
    out << line;
    if (report.arch_rel) {
        std::snprintf(line, sizeof line, "%-24s %10d\n", "archetype relevance",
                      *report.arch_rel);
        out << line;
    }
    if (report.ind_con) {
        std::snprintf(line, sizeof line, "%-24s %10.2f  (n=%zu)\n", "individual consistency",
                      *report.ind_con, report.judge_sample);
        out << line;
    }
    if (report.judge_error) out << "judge error: " << *report.judge_error << "\n";
    out << "\nper-dimension JSD:\n";
    for (const auto& [dim, value] : report.jsd.per_dimension) {
        std::snprintf(line, sizeof line, "  %-22s %10.4f\n", dim.c_str(), value);
        out << line;
    }
    if (!report.jsd.excluded.empty())
        out << "excluded dimensions: " << join(report.jsd.excluded, ", ") << "\n";
    return out.str();
}

}  // namespace

std::string inspect_artifact(const std::string& path) {
    std::string content;
    try {
        content = read_file(path);
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableSource, std::string("artifact: ") + e.what());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw HagError(Errc::UnknownArtifactType,
                       "not a JSON artifact (parse stopped at byte " +
                           std::to_string(e.byte) + ")");
    }
    if (!doc.is_object() || !doc.contains("artifact_type"))
        throw HagError(Errc::UnknownArtifactType, "file has no artifact_type field");

    const std::string type = doc["artifact_type"].get<std::string>();
    if (type == "tree") return render_tree(deserialize_tree(doc));
    if (type == "population") return render_population(Population::from_json(doc));
    if (type == "report") return render_report(EvalReport::from_json(doc));
    if (type == "summary") {
        std::ostringstream out;
        out << "experiment summary: " << doc.value("cells", nlohmann::json::array()).size()
            << " cells\n"
            << doc.dump(2) << "\n";
        return out.str();
    }
    throw HagError(Errc::UnknownArtifactType, "unrecognized artifact_type: " + type);
}

}  // namespace hag
