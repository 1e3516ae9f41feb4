#include "hag/schema.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hag/errors.h"
#include "hag/util.h"

namespace hag {

const char* category_name(DimensionCategory c) {
    switch (c) {
        case DimensionCategory::BasicDemographics: return "BasicDemographics";
        case DimensionCategory::SocioEconomicStatus: return "SocioEconomicStatus";
        case DimensionCategory::CulturalIdentity: return "CulturalIdentity";
    }
    return "BasicDemographics";
}

DimensionCategory category_from_name(const std::string& name) {
    if (name == "BasicDemographics") return DimensionCategory::BasicDemographics;
    if (name == "SocioEconomicStatus") return DimensionCategory::SocioEconomicStatus;
    if (name == "CulturalIdentity") return DimensionCategory::CulturalIdentity;
    throw HagError(Errc::SchemaMismatch, "unknown dimension category: " + name);
}

bool Dimension::allows_label(const std::string& label) const {
    if (label == kUnknownLabel) return true;
    if (!vocabulary) return !label.empty();
    return std::find(vocabulary->begin(), vocabulary->end(), label) != vocabulary->end();
}

DimensionSchema::DimensionSchema(std::vector<Dimension> dimensions) : dims_(std::move(dimensions)) {
    std::set<std::string> seen;
    for (const auto& d : dims_) {
        if (d.id.empty()) throw HagError(Errc::SchemaMismatch, "dimension with empty id");
        if (!seen.insert(d.id).second)
            throw HagError(Errc::SchemaMismatch, "duplicate dimension id: " + d.id);
        if (d.vocabulary) {
            std::set<std::string> labels;
            for (const auto& v : *d.vocabulary) {
                if (v.empty())
                    throw HagError(Errc::SchemaMismatch, "empty vocabulary label in " + d.id);
                if (!labels.insert(v).second)
                    throw HagError(Errc::SchemaMismatch,
                                   "duplicate vocabulary label '" + v + "' in " + d.id);
            }
        }
    }
}

bool DimensionSchema::has(const std::string& id) const {
    return std::any_of(dims_.begin(), dims_.end(), [&](const Dimension& d) { return d.id == id; });
}

const Dimension& DimensionSchema::at(const std::string& id) const {
    for (const auto& d : dims_) {
        if (d.id == id) return d;
    }
    throw HagError(Errc::UnknownDimension, "no such dimension: " + id);
}

std::optional<std::string> DimensionSchema::resolve_name(const std::string& name) const {
    const std::string needle = to_lower(trim(name));
    for (const auto& d : dims_) {
        if (to_lower(d.id) == needle || to_lower(d.name) == needle) return d.id;
    }
    return std::nullopt;
}

nlohmann::json DimensionSchema::to_json() const {
    nlohmann::json dims = nlohmann::json::array();
    for (const auto& d : dims_) {
        nlohmann::json jd{{"id", d.id},
                          {"name", d.name},
                          {"category", category_name(d.category)},
                          {"source_code", d.source_code}};
        if (d.vocabulary) jd["vocabulary"] = *d.vocabulary;
        dims.push_back(jd);
    }
    return nlohmann::json{{"format_version", kFormatVersion},
                          {"artifact_type", "schema"},
                          {"dimensions", dims}};
}

DimensionSchema DimensionSchema::from_json(const nlohmann::json& doc) {
    if (!doc.contains("format_version") || doc["format_version"] != kFormatVersion)
        throw HagError(Errc::FormatVersionMismatch, "schema document format_version != " + kFormatVersion);
    std::vector<Dimension> dims;
    for (const auto& jd : doc.at("dimensions")) {
        Dimension d;
        d.id = jd.at("id").get<std::string>();
        d.name = jd.at("name").get<std::string>();
        d.category = category_from_name(jd.at("category").get<std::string>());
        d.source_code = jd.value("source_code", "");
        if (jd.contains("vocabulary")) d.vocabulary = jd["vocabulary"].get<std::vector<std::string>>();
        dims.push_back(std::move(d));
    }
    return DimensionSchema(std::move(dims));
}

DimensionSchema DimensionSchema::load(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableSource, std::string("schema file: ") + e.what());
    }
    return from_json(doc);
}

void DimensionSchema::save(const std::string& path) const { write_file(path, to_json().dump(2) + "\n"); }

const std::vector<std::string>& age_bracket_labels() {
    static const std::vector<std::string> brackets{"Under 18", "18-24", "25-34", "35-44",
                                                   "45-54",    "55-64", "65+"};
    return brackets;
}

std::string age_bracket_for(int age) {
    if (age < 18) return "Under 18";
    if (age <= 24) return "18-24";
    if (age <= 34) return "25-34";
    if (age <= 44) return "35-44";
    if (age <= 54) return "45-54";
    if (age <= 64) return "55-64";
    return "65+";
}

const DimensionSchema& default_schema() {
    static const DimensionSchema schema = [] {
        using C = DimensionCategory;
        std::vector<Dimension> dims;
        auto open = [&](const char* id, const char* name, C cat, const char* code) {
            dims.push_back(Dimension{id, name, cat, code, std::nullopt});
        };
        auto closed = [&](const char* id, const char* name, C cat, const char* code,
                          std::vector<std::string> vocab) {
            dims.push_back(Dimension{id, name, cat, code, std::move(vocab)});
        };

        open("country", "Country", C::BasicDemographics, "B_COUNTRY");
        open("language", "Language", C::BasicDemographics, "S_INTLANGUAGE");
        closed("gender", "Gender", C::BasicDemographics, "Q260", {"Male", "Female"});
        closed("age", "Age", C::BasicDemographics, "Q262", age_bracket_labels());
        closed("marital_status", "Marital status", C::BasicDemographics, "Q273",
               {"Married", "Living together", "Divorced", "Separated", "Widowed", "Single"});
        closed("education", "Education", C::SocioEconomicStatus, "Q275",
               {"No formal education", "Primary", "Lower secondary", "Upper secondary",
                "Post-secondary", "Short-cycle tertiary", "Bachelor", "Master", "Doctoral"});
        open("occupation", "Occupation", C::SocioEconomicStatus, "Q281");
        closed("income_level", "Income level", C::SocioEconomicStatus, "Q288",
               {"Low", "Lower middle", "Middle", "Upper middle", "High"});
        closed("financial_status", "Financial status", C::SocioEconomicStatus, "Q286",
               {"Saved money", "Just got by", "Spent some savings",
                "Spent savings and borrowed"});
        closed("social_class", "Social class", C::SocioEconomicStatus, "Q287",
               {"Upper class", "Upper middle class", "Lower middle class", "Working class",
                "Lower class"});
        closed("religion", "Religion", C::CulturalIdentity, "Q289",
               {"No religion", "Roman Catholic", "Protestant", "Orthodox", "Jew", "Muslim",
                "Hindu", "Buddhist", "Other"});
        open("ethnicity", "Ethnicity", C::CulturalIdentity, "Q290");
        return DimensionSchema(std::move(dims));
    }();
    return schema;
}

}  // namespace hag
