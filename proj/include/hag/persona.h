#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hag/schema.h"

namespace hag {

struct AttributeValue {
    std::string dimension_id;
    std::string label;

    bool operator==(const AttributeValue&) const = default;
};

// Ordered assignment over a prefix of the prioritized dimension sequence.
// This is the tree path / leaf identity, not a full profile.
class PersonaVector {
public:
    PersonaVector() = default;
    explicit PersonaVector(std::vector<AttributeValue> assignments);

    const std::vector<AttributeValue>& assignments() const { return assignments_; }
    std::size_t size() const { return assignments_.size(); }
    bool empty() const { return assignments_.empty(); }

    bool has(const std::string& dimension_id) const;
    std::optional<std::string> label_of(const std::string& dimension_id) const;

    PersonaVector extended(const AttributeValue& next) const;
    PersonaVector extended(const std::string& dimension_id, const std::string& label) const {
        return extended(AttributeValue{dimension_id, label});
    }
    PersonaVector prefix(std::size_t length) const;

    // Canonical rendering "dim=label|dim=label", used as a deterministic map
    // key and tie-break ordering.
    std::string key() const;

    bool operator==(const PersonaVector&) const = default;

private:
    std::vector<AttributeValue> assignments_;
};

enum class Provenance { Real, Augmented };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

struct PersonaRecord {
    std::map<std::string, std::string> values;  // dimension_id -> label, all 12 present
    Provenance provenance = Provenance::Real;
    std::optional<std::string> source_id;
    std::optional<std::string> free_text;

    const std::string& label(const std::string& dimension_id) const;
    bool matches(const PersonaVector& constraints) const;

    nlohmann::json to_json() const;
    static PersonaRecord from_json(const nlohmann::json& j);
};

struct PopulationMeta {
    std::string generator;
    std::uint64_t seed = 0;
    std::string provider_fingerprint;
    std::string created_at;  // empty in deterministic mode
    nlohmann::json extra = nlohmann::json::object();
};

struct Population {
    std::string topic;
    std::vector<PersonaRecord> members;
    PopulationMeta meta;

    std::size_t size() const { return members.size(); }

    nlohmann::json to_json() const;
    static Population from_json(const nlohmann::json& j);
    static Population load(const std::string& path);
    void save(const std::string& path) const;
};

// Marginal distribution of one dimension: label -> probability. Probabilities
// sum to 1 unless the distribution is empty (every observation was Unknown).
struct Distribution {
    std::string dimension_id;
    std::map<std::string, double> entries;

    bool empty() const { return entries.empty(); }
    double probability(const std::string& label) const;
    void validate() const;  // throws InvariantViolation on bad mass
};

enum class ViolationKind { MissingDimension, UnknownLabel, UnknownDimension };

struct Violation {
    ViolationKind kind;
    std::string dimension_id;
    std::string message;
};

// Violations are data, not failures: an empty list means the record is valid.
std::vector<Violation> validate_record(const PersonaRecord& record, const DimensionSchema& schema);

// Empirical marginal over the observed labels of one dimension. "Unknown"
// observations are excluded; probabilities are counts over the known total.
Distribution marginal(const Population& population, const std::string& dimension_id,
                      const DimensionSchema& schema);

// One-sentence textual rendering of a record, used for embeddings.
std::string render_persona_text(const PersonaRecord& record);

}  // namespace hag
