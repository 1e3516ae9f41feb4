#include "hag/persona.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hag/errors.h"
#include "hag/util.h"

namespace hag {

PersonaVector::PersonaVector(std::vector<AttributeValue> assignments)
    : assignments_(std::move(assignments)) {
    std::set<std::string> seen;
    for (const auto& a : assignments_) {
        if (!seen.insert(a.dimension_id).second)
            throw HagError(Errc::InvariantViolation,
                           "persona vector repeats dimension " + a.dimension_id);
    }
}

bool PersonaVector::has(const std::string& dimension_id) const {
    return std::any_of(assignments_.begin(), assignments_.end(),
                       [&](const AttributeValue& a) { return a.dimension_id == dimension_id; });
}

std::optional<std::string> PersonaVector::label_of(const std::string& dimension_id) const {
    for (const auto& a : assignments_) {
        if (a.dimension_id == dimension_id) return a.label;
    }
    return std::nullopt;
}

PersonaVector PersonaVector::extended(const AttributeValue& next) const {
    std::vector<AttributeValue> vs = assignments_;
    vs.push_back(next);
    return PersonaVector(std::move(vs));
}

PersonaVector PersonaVector::prefix(std::size_t length) const {
    std::vector<AttributeValue> vs(assignments_.begin(),
                                   assignments_.begin() + std::min(length, assignments_.size()));
    return PersonaVector(std::move(vs));
}

std::string PersonaVector::key() const {
    std::string out;
    for (std::size_t i = 0; i < assignments_.size(); ++i) {
        if (i > 0) out += '|';
        out += assignments_[i].dimension_id;
        out += '=';
        out += assignments_[i].label;
    }
    return out;
}

const char* provenance_name(Provenance p) {
    return p == Provenance::Real ? "real" : "augmented";
}

Provenance provenance_from_name(const std::string& name) {
    if (name == "real") return Provenance::Real;
    if (name == "augmented") return Provenance::Augmented;
    throw HagError(Errc::InvariantViolation, "unknown provenance: " + name);
}

const std::string& PersonaRecord::label(const std::string& dimension_id) const {
    auto it = values.find(dimension_id);
    if (it == values.end())
        throw HagError(Errc::UnknownDimension, "record has no value for " + dimension_id);
    return it->second;
}

bool PersonaRecord::matches(const PersonaVector& constraints) const {
    for (const auto& a : constraints.assignments()) {
        auto it = values.find(a.dimension_id);
        if (it == values.end() || it->second != a.label) return false;
    }
    return true;
}

nlohmann::json PersonaRecord::to_json() const {
    nlohmann::json j{{"values", values}, {"provenance", provenance_name(provenance)}};
    if (source_id) j["source_id"] = *source_id;
    if (free_text) j["free_text"] = *free_text;
    return j;
}

PersonaRecord PersonaRecord::from_json(const nlohmann::json& j) {
    PersonaRecord r;
    r.values = j.at("values").get<std::map<std::string, std::string>>();
    r.provenance = provenance_from_name(j.at("provenance").get<std::string>());
    if (j.contains("source_id")) r.source_id = j["source_id"].get<std::string>();
    if (j.contains("free_text")) r.free_text = j["free_text"].get<std::string>();
    return r;
}

nlohmann::json Population::to_json() const {
    nlohmann::json jmeta{{"generator", meta.generator},
                         {"seed", meta.seed},
                         {"provider_fingerprint", meta.provider_fingerprint}};
    if (!meta.created_at.empty()) jmeta["created_at"] = meta.created_at;
    if (!meta.extra.empty()) jmeta["extra"] = meta.extra;
    nlohmann::json jmembers = nlohmann::json::array();
    for (const auto& m : members) jmembers.push_back(m.to_json());
    return nlohmann::json{{"format_version", kFormatVersion},
                          {"artifact_type", "population"},
                          {"topic", topic},
                          {"size", members.size()},
                          {"meta", jmeta},
                          {"members", jmembers}};
}

Population Population::from_json(const nlohmann::json& j) {
    if (!j.contains("format_version") || j["format_version"] != kFormatVersion)
        throw HagError(Errc::FormatVersionMismatch, "population format_version != " + kFormatVersion);
    if (j.value("artifact_type", "") != "population")
        throw HagError(Errc::UnknownArtifactType, "not a population artifact");
    Population p;
    p.topic = j.at("topic").get<std::string>();
    const auto& jm = j.at("meta");
    p.meta.generator = jm.value("generator", "");
    p.meta.seed = jm.value("seed", std::uint64_t{0});
    p.meta.provider_fingerprint = jm.value("provider_fingerprint", "");
    p.meta.created_at = jm.value("created_at", "");
    if (jm.contains("extra")) p.meta.extra = jm["extra"];
    for (const auto& m : j.at("members")) p.members.push_back(PersonaRecord::from_json(m));
    if (j.at("size").get<std::size_t>() != p.members.size())
        throw HagError(Errc::InvariantViolation, "population size field disagrees with member count");
    return p;
}

Population Population::load(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableSource, std::string("population file: ") + e.what());
    }
    return from_json(doc);
}

void Population::save(const std::string& path) const { write_file(path, to_json().dump(2) + "\n"); }

double Distribution::probability(const std::string& label) const {
    auto it = entries.find(label);
    return it == entries.end() ? 0.0 : it->second;
}

void Distribution::validate() const {
    if (entries.empty()) return;
    double sum = 0.0;
    for (const auto& [label, p] : entries) {
        if (p < 0.0)
            throw HagError(Errc::InvariantViolation,
                           "negative probability for '" + label + "' in " + dimension_id);
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw HagError(Errc::InvariantViolation,
                       "probabilities of " + dimension_id + " sum to " + std::to_string(sum));
}

std::vector<Violation> validate_record(const PersonaRecord& record, const DimensionSchema& schema) {
    std::vector<Violation> out;
    for (const auto& d : schema.dimensions()) {
        auto it = record.values.find(d.id);
        if (it == record.values.end()) {
            out.push_back({ViolationKind::MissingDimension, d.id, "missing dimension " + d.id});
            continue;
        }
        if (!d.allows_label(it->second)) {
            out.push_back({ViolationKind::UnknownLabel, d.id,
                           "label '" + it->second + "' not allowed for " + d.id});
        }
    }
    for (const auto& [id, label] : record.values) {
        if (!schema.has(id))
            out.push_back({ViolationKind::UnknownDimension, id, "dimension not in schema: " + id});
    }
    return out;
}

Distribution marginal(const Population& population, const std::string& dimension_id,
                      const DimensionSchema& schema) {
    if (population.members.empty())
        throw HagError(Errc::EmptyPopulation, "marginal over empty population");
    if (!schema.has(dimension_id))
        throw HagError(Errc::UnknownDimension, "marginal over unknown dimension " + dimension_id);

    std::map<std::string, std::size_t> counts;
    std::size_t known = 0;
    for (const auto& m : population.members) {
        auto it = m.values.find(dimension_id);
        if (it == m.values.end() || it->second == kUnknownLabel) continue;
        ++counts[it->second];
        ++known;
    }
    Distribution dist{dimension_id, {}};
    for (const auto& [label, c] : counts)
        dist.entries[label] = static_cast<double>(c) / static_cast<double>(known);
    return dist;
}

std::string render_persona_text(const PersonaRecord& record) {
    auto get = [&](const char* id) -> std::string {
        auto it = record.values.find(id);
        return it == record.values.end() ? kUnknownLabel : it->second;
    };
    std::ostringstream ss;
    ss << "A " << get("age") << " " << get("gender") << " from " << get("country")
       << " speaking " << get("language") << ", " << get("marital_status") << "; education: "
       << get("education") << "; working as " << get("occupation") << "; income level: "
       << get("income_level") << "; financial status: " << get("financial_status")
       << "; social class: " << get("social_class") << "; religion: " << get("religion")
       << "; ethnicity: " << get("ethnicity") << ".";
    return ss.str();
}

}  // namespace hag
