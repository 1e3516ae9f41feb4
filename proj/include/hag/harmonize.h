#pragma once

#include <map>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "hag/schema.h"

namespace hag {

// Maps raw survey values onto schema labels: coded categoricals (e.g. "2" ->
// "Female"), raw integer ages to brackets, survey missing codes to "Unknown".
// Values already equal to a schema label pass through untouched.
class Harmonizer {
public:
    Harmonizer() = default;

    void set_mapping(const std::string& dimension_id, const std::string& raw,
                     const std::string& label);

    std::string harmonize(const Dimension& dim, const std::string& raw) const;

    nlohmann::json to_json() const;
    static Harmonizer from_json(const nlohmann::json& doc);
    static Harmonizer load(const std::string& path);

private:
    std::map<std::string, std::map<std::string, std::string>> tables_;
};

// Built-in table covering the survey coding of the default schema's closed
// dimensions plus age bracketing.
const Harmonizer& default_harmonizer();

}  // namespace hag
