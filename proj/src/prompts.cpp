#include "hag/prompts.h"

#include <sstream>

namespace hag {
namespace prompts {

std::string context_clause(const std::string& topic, const PersonaVector& context,
                           const DimensionSchema& schema) {
    std::ostringstream ss;
    ss << "For the topic \"" << topic << "\"";
    if (!context.empty()) {
        ss << " and a person with ";
        const auto& as = context.assignments();
        for (std::size_t i = 0; i < as.size(); ++i) {
            if (i > 0) ss << " and ";
            const std::string& name =
                schema.has(as[i].dimension_id) ? schema.at(as[i].dimension_id).name : as[i].dimension_id;
            ss << name << " = \"" << as[i].label << "\"";
        }
    }
    return ss.str();
}

std::string prioritize_dims(const std::string& topic, const DimensionSchema& schema,
                            int max_depth) {
    std::ostringstream ss;
    ss << "You are a computational sociologist. Your task is to determine the most important "
          "user profile dimensions for a social network simulation on the topic \""
       << topic << "\".\n\n"
       << "Please identify up to " << max_depth
       << " most critical demographic dimensions from the table below and rank them in "
          "descending order of their influence on people's opinions and behaviors related to "
          "this topic.\n"
       << "The dimensions in the table are:\n";
    int i = 1;
    for (const auto& d : schema.dimensions()) ss << i++ << ". " << d.name << "\n";
    ss << "\nPlease output a list in the following JSON format strictly:\n"
       << "{\n    \"dimensions\": [\"Dimension 1\", \"Dimension 2\", \"Dimension 3\"]\n}\n";
    return ss.str();
}

std::string infer_conditional(const std::string& topic, const Dimension& dimension,
                              const PersonaVector& context, const DimensionSchema& schema,
                              int max_branches,
                              const std::optional<std::vector<std::string>>& allowed) {
    std::ostringstream ss;
    ss << "You are a computational sociologist. " << context_clause(topic, context, schema)
       << ", please generate a plausible probability distribution for the dimension \""
       << dimension.name << "\".\n\n"
       << "List the primary values for this dimension and assign a probability to each.\n"
       << "Provide the most relevant and meaningful values for this context - you can provide "
          "anywhere from 1 to "
       << max_branches << " values, depending on what makes sense for the given context.\n\n"
       << "**IMPORTANT**: Choose the number of values based on what is actually meaningful and "
          "significant for this specific context.\n"
       << "- If only 1-3 categories are truly relevant, use only 1-3 values.\n"
       << "- If more categories are meaningful, you can use up to " << max_branches
       << " values.\n"
       << "- Do NOT artificially inflate the number of categories just to reach the maximum.\n\n"
       << "Focus on the most significant categories rather than trying to fill up to the "
          "maximum number.\n"
       << "The sum of all probabilities must be exactly 1.0.\n\n"
       << "Strictly adhere to the following JSON format for your output:\n"
       << "{\n    \"distribution\": [\n        {\"value\": \"Value 1\", \"probability\": "
          "0.xx},\n        ...\n    ]\n}\n";
    if (allowed && !allowed->empty()) {
        ss << "\nALLOWED VALUES for \"" << dimension.name << "\" (choose ONLY from this list): [";
        for (std::size_t i = 0; i < allowed->size(); ++i) {
            if (i > 0) ss << ", ";
            ss << "\"" << (*allowed)[i] << "\"";
        }
        ss << "]\n";
    }
    return ss.str();
}

std::string allowed_values_block(const DimensionSchema& schema) {
    std::ostringstream ss;
    for (const auto& d : schema.dimensions()) {
        if (!d.vocabulary) continue;
        ss << "- " << d.name << ": [";
        const auto& vocab = *d.vocabulary;
        for (std::size_t i = 0; i < vocab.size(); ++i) {
            if (i > 0) ss << ", ";
            ss << "\"" << vocab[i] << "\"";
        }
        ss << "]\n";
    }
    return ss.str();
}

namespace {

std::string persona_template_json(const DimensionSchema& schema) {
    std::ostringstream ss;
    ss << "{\n";
    const auto& dims = schema.dimensions();
    for (std::size_t i = 0; i < dims.size(); ++i) {
        ss << "    \"" << dims[i].id << "\": \"__FILL__\"";
        if (i + 1 < dims.size()) ss << ",";
        ss << "\n";
    }
    ss << "}";
    return ss.str();
}

}  // namespace

std::string generate_persona(const std::string& topic, const PersonaVector& fixed,
                             const DimensionSchema& schema) {
    std::ostringstream ss;
    ss << "You are a computational sociologist creating one realistic survey respondent for a "
          "simulation on the topic \""
       << topic << "\".\n\n";
    if (!fixed.empty()) {
        ss << "The persona MUST have exactly these attribute values:\n";
        for (const auto& a : fixed.assignments()) {
            const std::string& name =
                schema.has(a.dimension_id) ? schema.at(a.dimension_id).name : a.dimension_id;
            ss << "- " << name << " = \"" << a.label << "\"\n";
        }
        ss << "\n";
    }
    ss << "Fill every remaining dimension with a plausible, internally consistent value.\n\n"
       << "**ALLOWED VALUES (choose ONLY from these lists)**:\n"
       << allowed_values_block(schema) << "\n"
       << "Return a JSON object that exactly matches this template structure:\n"
       << persona_template_json(schema) << "\n";
    return ss.str();
}

std::string persona_batch(const std::string& topic, const DimensionSchema& schema, int count) {
    std::ostringstream ss;
    ss << "You are a computational sociologist creating survey respondents for a simulation on "
          "the topic \""
       << topic << "\".\n\n"
       << "Generate " << count
       << " distinct, realistic personas likely to participate in this topic. Each persona is a "
          "JSON object matching this template:\n"
       << persona_template_json(schema) << "\n\n"
       << "**ALLOWED VALUES (choose ONLY from these lists)**:\n"
       << allowed_values_block(schema) << "\n"
       << "Return strictly the JSON object:\n{\n    \"personas\": [ ... ]\n}\n";
    return ss.str();
}

std::string text_to_persona(const std::string& theme, const std::string& user_text,
                            const DimensionSchema& schema) {
    std::ostringstream ss;
    ss << "You are a computational sociologist analyzing social media posts to generate "
          "realistic user profiles.\n\n"
       << "**TASK**: Generate a user profile based on the provided social media posts from the \""
       << theme << "\" community.\n"
       << "**USER'S POSTS**:\n"
       << user_text << "\n\n"
       << "**INSTRUCTIONS**:\n"
       << "1. Analyze the user's posts to infer their demographic characteristics. Make "
          "reasonable inferences based on the content, language, and context of the posts.\n"
       << "2. Generate a realistic user profile that matches the template structure.\n"
       << "3. Replace all \"__FILL__\" placeholders with appropriate values chosen from the "
          "allowed constraints below.\n"
       << "4. If the posts provide insufficient clues for a dimension, return \"Unknown\" for "
          "it.\n\n"
       << "**ALLOWED VALUES (choose ONLY from these lists)**:\n"
       << allowed_values_block(schema) << "\n"
       << "**IMPORTANT CONSTRAINTS**:\n"
       << "- You MUST choose values ONLY from the allowed lists above. Do NOT invent new "
          "values or categories.\n"
       << "- Consider the theme context: \"" << theme
       << "\" community members may have specific characteristics.\n\n"
       << "**OUTPUT FORMAT**:\n"
       << "Return a JSON object that exactly matches this template structure:\n"
       << persona_template_json(schema) << "\n\n"
       << "Generate the user profile now:\n";
    return ss.str();
}

std::string judge_archetypes(const std::string& clusters_text, const std::string& topic_context) {
    std::ostringstream ss;
    ss << "You are an expert computational sociologist.\n\n"
       << "DOMINANT CLUSTERS:\n"
       << clusters_text << "\n\n"
       << "THEME / TOPIC CONTEXT:\n"
       << topic_context << "\n\n"
       << "Question:\n"
       << "Are these dominant archetypes (typical groups) the core stakeholders for this "
          "topic?\n"
       << "Consider whether age, education, occupation, country, language and other "
          "demographics\n"
       << "form plausible and meaningful typical user types that align with sociological "
          "expectations.\n\n"
       << "Scoring guide:\n"
       << "- 1: Archetypes are completely irrelevant or implausible for this topic\n"
       << "- 3: Archetypes are somewhat relevant but have some issues\n"
       << "- 5: Archetypes are highly relevant and plausible as core stakeholders for this "
          "topic\n\n"
       << "Return format (must be a valid JSON object):\n"
       << "{\n\"archetype_coherence_score\": <int 1-5>,\n\"reasoning\": \"<short "
          "explanation>\"\n}\n";
    return ss.str();
}

std::string judge_consistency(const std::string& topic_context, const std::string& profile_json) {
    std::ostringstream ss;
    ss << "You are a computational social scientist who studies population structure.\n\n"
       << "Given the following theme/topic and a single agent profile, evaluate whether the\n"
       << "combination of demographic attributes (such as age, education, occupation, country, "
          "etc.)\n"
       << "is internally consistent and realistic for that theme.\n\n"
       << "Topic:\n"
       << topic_context << "\n\n"
       << "Agent Profile (JSON):\n"
       << profile_json << "\n\n"
       << "Your task:\n"
       << "- Please only judge from the perspective of \"logical consistency\" and give a "
          "rating of 1-5 to indicate whether the attribute combination of the agent is "
          "reasonable and consistent in this real-world topic:\n"
       << "    1 = Very unreasonable (with obvious contradictions)\n"
       << "    3 = Generally reasonable (with some doubts but acceptable)\n"
       << "    5 = Very reasonable (there is no obvious contradiction)\n\n"
       << "Return format (must be a valid JSON object):\n"
       << "{\n  \"internal_consistency_score\": <int 1-5>,\n  \"reasoning\": \"<short text "
          "explaining the main reason for judgment>\"\n}\n";
    return ss.str();
}

}  // namespace prompts
}  // namespace hag
