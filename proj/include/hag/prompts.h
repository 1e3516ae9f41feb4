#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hag/persona.h"
#include "hag/schema.h"

namespace hag {
namespace prompts {

// "For the topic "t"" / "For the topic "t" and a person with A = "x" and B = "y""
std::string context_clause(const std::string& topic, const PersonaVector& context,
                           const DimensionSchema& schema);

std::string prioritize_dims(const std::string& topic, const DimensionSchema& schema,
                            int max_depth);

std::string infer_conditional(const std::string& topic, const Dimension& dimension,
                              const PersonaVector& context, const DimensionSchema& schema,
                              int max_branches,
                              const std::optional<std::vector<std::string>>& allowed);

std::string generate_persona(const std::string& topic, const PersonaVector& fixed,
                             const DimensionSchema& schema);

std::string persona_batch(const std::string& topic, const DimensionSchema& schema, int count);

std::string text_to_persona(const std::string& theme, const std::string& user_text,
                            const DimensionSchema& schema);

std::string judge_archetypes(const std::string& clusters_text, const std::string& topic_context);

std::string judge_consistency(const std::string& topic_context, const std::string& profile_json);

// Shared helper: "ALLOWED VALUES" block listing the closed vocabularies.
std::string allowed_values_block(const DimensionSchema& schema);

}  // namespace prompts
}  // namespace hag
