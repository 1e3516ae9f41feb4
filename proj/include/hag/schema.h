#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hag {

// Reserved label for values the source data could not determine. Accepted by
// every dimension regardless of vocabulary and skipped when computing marginals.
inline const std::string kUnknownLabel = "Unknown";

inline const std::string kFormatVersion = "1";

enum class DimensionCategory {
    BasicDemographics,
    SocioEconomicStatus,
    CulturalIdentity,
};

const char* category_name(DimensionCategory c);
DimensionCategory category_from_name(const std::string& name);

struct Dimension {
    std::string id;           // stable key, e.g. "education"
    std::string name;         // display name, e.g. "Education"
    DimensionCategory category = DimensionCategory::BasicDemographics;
    std::string source_code;  // survey column, e.g. "Q275"
    // Closed list of allowed labels; open-vocabulary dimensions leave it empty.
    std::optional<std::vector<std::string>> vocabulary;

    bool has_vocabulary() const { return vocabulary.has_value(); }
    bool allows_label(const std::string& label) const;
};

class DimensionSchema {
public:
    DimensionSchema() = default;
    explicit DimensionSchema(std::vector<Dimension> dimensions);

    const std::vector<Dimension>& dimensions() const { return dims_; }
    std::size_t size() const { return dims_.size(); }

    bool has(const std::string& id) const;
    const Dimension& at(const std::string& id) const;

    // Maps a provider-returned name to a schema id: case-insensitive exact
    // match on id or display name, nothing fuzzier.
    std::optional<std::string> resolve_name(const std::string& name) const;

    nlohmann::json to_json() const;
    static DimensionSchema from_json(const nlohmann::json& doc);
    static DimensionSchema load(const std::string& path);
    void save(const std::string& path) const;

private:
    std::vector<Dimension> dims_;
};

// The 12-dimension survey schema: 5 basic demographics, 5 socio-economic,
// 2 cultural identity. Gender/Age/Marital/Education/Income/Financial/Class/
// Religion carry closed vocabularies; Country/Language/Occupation/Ethnicity
// are open.
const DimensionSchema& default_schema();

// Canonical age brackets used by the closed Age vocabulary and by the
// harmonizer when bracketing raw integer ages.
const std::vector<std::string>& age_bracket_labels();
std::string age_bracket_for(int age);

}  // namespace hag
