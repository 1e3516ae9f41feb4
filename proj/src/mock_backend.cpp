#include "hag/mock_backend.h"

#include <algorithm>
#include <sstream>

#include "hag/errors.h"
#include "hag/schema.h"
#include "hag/util.h"

namespace hag {

namespace {

const std::map<std::string, std::vector<std::string>>& open_label_pools() {
    static const std::map<std::string, std::vector<std::string>> pools{
        {"country",
         {"United States", "India", "Brazil", "Germany", "Japan", "Nigeria", "Mexico",
          "Indonesia"}},
        {"language",
         {"English", "Hindi", "Portuguese", "German", "Japanese", "Spanish", "Arabic",
          "Mandarin"}},
        {"occupation",
         {"Teacher", "Software engineer", "Farmer", "Nurse", "Sales clerk", "Electrician",
          "Accountant", "Driver"}},
        {"ethnicity",
         {"White", "Black", "Asian", "Hispanic", "Mixed", "Indigenous", "Arab", "Other"}},
    };
    return pools;
}

std::vector<std::string> labels_for(const Dimension& dim) {
    if (dim.vocabulary) return *dim.vocabulary;
    const auto& pools = open_label_pools();
    auto it = pools.find(dim.id);
    if (it != pools.end()) return it->second;
    return {"Variant 1", "Variant 2", "Variant 3", "Variant 4", "Variant 5"};
}

std::string wrap_json(const nlohmann::json& payload) {
    return "Here is the requested JSON.\n" + payload.dump();
}

nlohmann::json distribution_json(const std::vector<WeightedValue>& values) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : values)
        arr.push_back({{"value", v.label}, {"probability", v.weight}});
    return nlohmann::json{{"distribution", arr}};
}

}  // namespace

MockChatBackend::MockChatBackend(std::uint64_t seed) : seed_(seed) {}

std::string MockChatBackend::fingerprint() const {
    return "mock:seed=" + std::to_string(seed_);
}

void MockChatBackend::set_dim_sequence(const std::string& topic,
                                       std::vector<std::string> dimension_ids) {
    std::lock_guard<std::mutex> lock(mutex_);
    dim_sequences_[topic] = std::move(dimension_ids);
}

void MockChatBackend::set_conditional(const std::string& topic, const std::string& dimension_id,
                                      const std::string& context_key,
                                      std::vector<WeightedValue> values) {
    std::lock_guard<std::mutex> lock(mutex_);
    conditionals_[topic + "|" + dimension_id + "|" + context_key] = std::move(values);
}

void MockChatBackend::set_text_persona(const std::string& context_key,
                                       std::map<std::string, std::string> values) {
    std::lock_guard<std::mutex> lock(mutex_);
    text_personas_[context_key] = std::move(values);
}

void MockChatBackend::set_judge_archetype_score(int score) {
    std::lock_guard<std::mutex> lock(mutex_);
    archetype_score_ = score;
}

void MockChatBackend::set_judge_consistency_score(int score) {
    std::lock_guard<std::mutex> lock(mutex_);
    consistency_score_ = score;
}

void MockChatBackend::push_script(RequestKind kind, std::string raw_response) {
    std::lock_guard<std::mutex> lock(mutex_);
    scripts_[static_cast<int>(kind)].push_back(std::move(raw_response));
}

void MockChatBackend::set_override(RequestKind kind, const std::string& context_key,
                                   std::string raw_response) {
    std::lock_guard<std::mutex> lock(mutex_);
    overrides_[{static_cast<int>(kind), context_key}] = std::move(raw_response);
}

void MockChatBackend::load_tables(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableSource, std::string("mock tables: ") + e.what());
    }
    if (doc.contains("dim_sequence"))
        for (auto it = doc["dim_sequence"].begin(); it != doc["dim_sequence"].end(); ++it)
            set_dim_sequence(it.key(), it.value().get<std::vector<std::string>>());
    if (doc.contains("conditionals"))
        for (auto it = doc["conditionals"].begin(); it != doc["conditionals"].end(); ++it) {
            std::vector<WeightedValue> values;
            for (const auto& entry : it.value())
                values.push_back({entry.at("value").get<std::string>(),
                                  entry.at("probability").get<double>()});
            std::lock_guard<std::mutex> lock(mutex_);
            conditionals_[it.key()] = std::move(values);
        }
    if (doc.contains("text_personas"))
        for (auto it = doc["text_personas"].begin(); it != doc["text_personas"].end(); ++it)
            set_text_persona(it.key(), it.value().get<std::map<std::string, std::string>>());
    if (doc.contains("judge_archetype_score"))
        set_judge_archetype_score(doc["judge_archetype_score"].get<int>());
    if (doc.contains("judge_consistency_score"))
        set_judge_consistency_score(doc["judge_consistency_score"].get<int>());
}

int MockChatBackend::calls(RequestKind kind) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = counters_.find(static_cast<int>(kind));
    return it == counters_.end() ? 0 : it->second;
}

int MockChatBackend::total_calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    int total = 0;
    for (const auto& [kind, count] : counters_) total += count;
    return total;
}

std::uint64_t MockChatBackend::hash_for(const ChatRequest& request) const {
    std::string key = std::string(request_kind_name(request.kind)) + "|" + request.topic + "|" +
                      request.dimension_id + "|" + request.context_key;
    return fnv1a(key, seed_ ^ 0xcbf29ce484222325ULL);
}

std::string MockChatBackend::complete(const ChatRequest& request) {
    std::lock_guard<std::mutex> lock(mutex_);
    counters_[static_cast<int>(request.kind)]++;

    auto script = scripts_.find(static_cast<int>(request.kind));
    if (script != scripts_.end() && !script->second.empty()) {
        std::string raw = script->second.front();
        script->second.erase(script->second.begin());
        return raw;
    }
    auto over = overrides_.find({static_cast<int>(request.kind), request.context_key});
    if (over == overrides_.end() && !request.context_key.empty())
        over = overrides_.find({static_cast<int>(request.kind), std::string{}});  // wildcard
    if (over != overrides_.end()) return over->second;

    switch (request.kind) {
        case RequestKind::PrioritizeDims: return answer_prioritize(request);
        case RequestKind::InferConditional: return answer_conditional(request);
        case RequestKind::GeneratePersona: return answer_persona(request);
        case RequestKind::PersonaBatch: return answer_batch(request);
        case RequestKind::TextToPersona: return answer_text_persona(request);
        case RequestKind::JudgeArchetypes:
            return wrap_json({{"archetype_coherence_score", archetype_score_},
                              {"reasoning", "Clusters are distinct and topic-aligned."}});
        case RequestKind::JudgeConsistency:
            return wrap_json({{"internal_consistency_score", consistency_score_}});
    }
    throw HagError(Errc::MalformedResponse, "unsupported request kind");
}

std::string MockChatBackend::answer_prioritize(const ChatRequest& request) {
    const DimensionSchema& schema = default_schema();
    std::vector<std::string> names;
    auto it = dim_sequences_.find(request.topic);
    if (it != dim_sequences_.end()) {
        for (const auto& id : it->second) names.push_back(schema.at(id).name);
    } else {
        int max_depth = request.hints.value("max_depth", 5);
        std::vector<std::string> ids;
        for (const auto& dim : schema.dimensions()) ids.push_back(dim.id);
        Rng rng(hash_for(request));
        shuffle(ids, rng);
        const std::size_t k =
            std::min<std::size_t>(ids.size(), static_cast<std::size_t>(std::max(1, max_depth)));
        for (std::size_t i = 0; i < k; ++i) names.push_back(schema.at(ids[i]).name);
    }
    return wrap_json({{"dimensions", names}});
}

std::string MockChatBackend::answer_conditional(const ChatRequest& request) {
    auto it = conditionals_.find(request.topic + "|" + request.dimension_id + "|" +
                                 request.context_key);
    if (it != conditionals_.end()) return wrap_json(distribution_json(it->second));

    const DimensionSchema& schema = default_schema();
    std::vector<std::string> labels;
    if (request.hints.contains("allowed"))
        labels = request.hints["allowed"].get<std::vector<std::string>>();
    else if (schema.has(request.dimension_id))
        labels = labels_for(schema.at(request.dimension_id));
    else
        labels = {"Variant 1", "Variant 2", "Variant 3"};

    int max_branches = request.hints.value("max_branches", 5);
    Rng rng(hash_for(request));
    shuffle(labels, rng);
    const std::size_t cap =
        std::min<std::size_t>(labels.size(), static_cast<std::size_t>(std::max(1, max_branches)));
    const std::size_t k = 1 + rng.next_index(cap);
    std::vector<WeightedValue> values;
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double w = 0.05 + rng.next_double();
        values.push_back({labels[i], w});
        sum += w;
    }
    for (auto& v : values) v.weight /= sum;
    return wrap_json(distribution_json(values));
}

std::string MockChatBackend::answer_persona(const ChatRequest& request) {
    const DimensionSchema& schema = default_schema();
    nlohmann::json fixed = request.hints.value("fixed", nlohmann::json::object());
    Rng rng(hash_for(request));
    nlohmann::json persona = nlohmann::json::object();
    for (const auto& dim : schema.dimensions()) {
        if (fixed.contains(dim.id)) {
            persona[dim.id] = fixed[dim.id];
            continue;
        }
        const auto labels = labels_for(dim);
        persona[dim.id] = labels[rng.next_index(labels.size())];
    }
    return wrap_json({{"persona", persona}});
}

std::string MockChatBackend::answer_batch(const ChatRequest& request) {
    const DimensionSchema& schema = default_schema();
    const int count = request.hints.value("count", 10);
    Rng rng(hash_for(request));
    nlohmann::json personas = nlohmann::json::array();
    for (int i = 0; i < count; ++i) {
        nlohmann::json persona = nlohmann::json::object();
        for (const auto& dim : schema.dimensions()) {
            const auto labels = labels_for(dim);
            persona[dim.id] = labels[rng.next_index(labels.size())];
        }
        personas.push_back(persona);
    }
    return wrap_json({{"personas", personas}});
}

std::string MockChatBackend::answer_text_persona(const ChatRequest& request) {
    auto it = text_personas_.find(request.context_key);
    if (it != text_personas_.end()) return wrap_json({{"persona", nlohmann::json(it->second)}});

    const DimensionSchema& schema = default_schema();
    Rng rng(hash_for(request));
    nlohmann::json persona = nlohmann::json::object();
    for (const auto& dim : schema.dimensions()) {
        const auto labels = labels_for(dim);
        persona[dim.id] = labels[rng.next_index(labels.size())];
    }
    return wrap_json({{"persona", persona}});
}

}  // namespace hag
