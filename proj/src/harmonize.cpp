#include "hag/harmonize.h"

#include <cstdlib>

#include <nlohmann/json.hpp>

#include "hag/errors.h"
#include "hag/util.h"

namespace hag {

namespace {

bool parse_int(const std::string& s, long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (end == nullptr || *end != '\0') return false;
    out = v;
    return true;
}

}  // namespace

void Harmonizer::set_mapping(const std::string& dimension_id, const std::string& raw,
                             const std::string& label) {
    tables_[dimension_id][raw] = label;
}

std::string Harmonizer::harmonize(const Dimension& dim, const std::string& raw) const {
    const std::string value = trim(raw);
    if (value.empty() || value == kUnknownLabel) return kUnknownLabel;

    long as_int = 0;
    const bool is_int = parse_int(value, as_int);
    // WVS negative codes mean "no answer" / "not asked".
    if (is_int && as_int < 0) return kUnknownLabel;

    if (auto t = tables_.find(dim.id); t != tables_.end()) {
        if (auto m = t->second.find(value); m != t->second.end()) return m->second;
    }
    if (dim.id == "age" && is_int) return age_bracket_for(static_cast<int>(as_int));
    return value;  // pass through, validation decides acceptability
}

nlohmann::json Harmonizer::to_json() const {
    nlohmann::json doc{{"format_version", kFormatVersion}, {"artifact_type", "harmonization"}};
    doc["tables"] = tables_;
    return doc;
}

Harmonizer Harmonizer::from_json(const nlohmann::json& doc) {
    if (!doc.contains("format_version") || doc["format_version"] != kFormatVersion)
        throw HagError(Errc::FormatVersionMismatch, "harmonization format_version != " + kFormatVersion);
    Harmonizer h;
    if (doc.contains("tables"))
        h.tables_ = doc["tables"].get<std::map<std::string, std::map<std::string, std::string>>>();
    return h;
}

Harmonizer Harmonizer::load(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableSource, std::string("harmonization file: ") + e.what());
    }
    return from_json(doc);
}

const Harmonizer& default_harmonizer() {
    static const Harmonizer table = [] {
        Harmonizer h;
        h.set_mapping("gender", "1", "Male");
        h.set_mapping("gender", "2", "Female");

        h.set_mapping("marital_status", "1", "Married");
        h.set_mapping("marital_status", "2", "Living together");
        h.set_mapping("marital_status", "3", "Divorced");
        h.set_mapping("marital_status", "4", "Separated");
        h.set_mapping("marital_status", "5", "Widowed");
        h.set_mapping("marital_status", "6", "Single");

        h.set_mapping("education", "0", "No formal education");
        h.set_mapping("education", "1", "Primary");
        h.set_mapping("education", "2", "Lower secondary");
        h.set_mapping("education", "3", "Upper secondary");
        h.set_mapping("education", "4", "Post-secondary");
        h.set_mapping("education", "5", "Short-cycle tertiary");
        h.set_mapping("education", "6", "Bachelor");
        h.set_mapping("education", "7", "Master");
        h.set_mapping("education", "8", "Doctoral");

        // income deciles 1-10 folded into quintile labels
        h.set_mapping("income_level", "1", "Low");
        h.set_mapping("income_level", "2", "Low");
        h.set_mapping("income_level", "3", "Lower middle");
        h.set_mapping("income_level", "4", "Lower middle");
        h.set_mapping("income_level", "5", "Middle");
        h.set_mapping("income_level", "6", "Middle");
        h.set_mapping("income_level", "7", "Upper middle");
        h.set_mapping("income_level", "8", "Upper middle");
        h.set_mapping("income_level", "9", "High");
        h.set_mapping("income_level", "10", "High");

        h.set_mapping("financial_status", "1", "Saved money");
        h.set_mapping("financial_status", "2", "Just got by");
        h.set_mapping("financial_status", "3", "Spent some savings");
        h.set_mapping("financial_status", "4", "Spent savings and borrowed");

        h.set_mapping("social_class", "1", "Upper class");
        h.set_mapping("social_class", "2", "Upper middle class");
        h.set_mapping("social_class", "3", "Lower middle class");
        h.set_mapping("social_class", "4", "Working class");
        h.set_mapping("social_class", "5", "Lower class");

        h.set_mapping("religion", "0", "No religion");
        h.set_mapping("religion", "1", "Roman Catholic");
        h.set_mapping("religion", "2", "Protestant");
        h.set_mapping("religion", "3", "Orthodox");
        h.set_mapping("religion", "4", "Jew");
        h.set_mapping("religion", "5", "Muslim");
        h.set_mapping("religion", "6", "Hindu");
        h.set_mapping("religion", "7", "Buddhist");
        h.set_mapping("religion", "8", "Other");
        return h;
    }();
    return table;
}

}  // namespace hag
