#include "hag/config.h"

#include <cstdlib>

#include "hag/errors.h"
#include "hag/http_backend.h"
#include "hag/mock_backend.h"
#include "hag/util.h"

namespace hag {

RunConfig RunConfig::from_file(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw HagError(Errc::ConfigError, std::string("config file: ") + e.what());
    }
    if (!doc.is_object()) throw HagError(Errc::ConfigError, "config root must be an object");

    RunConfig config;
    try {
        config.provider_mode = doc.value("provider_mode", config.provider_mode);
        config.base_url = doc.value("base_url", config.base_url);
        config.api_key = doc.value("api_key", config.api_key);
        config.model = doc.value("model", config.model);
        config.transcript = doc.value("transcript", config.transcript);
        config.embedder_mode = doc.value("embedder_mode", config.embedder_mode);
        config.embedder_url = doc.value("embedder_url", config.embedder_url);
        config.embedder_model = doc.value("embedder_model", config.embedder_model);
        config.embedder_dim = doc.value("embedder_dim", config.embedder_dim);
        config.seed = doc.value("seed", config.seed);
        config.mock_seed = doc.value("mock_seed", config.mock_seed);
        config.mock_tables = doc.value("mock_tables", config.mock_tables);
        config.db_path = doc.value("db_path", config.db_path);
        config.schema_path = doc.value("schema_path", config.schema_path);
        config.harmonization_path = doc.value("harmonization_path", config.harmonization_path);
        config.output_dir = doc.value("output_dir", config.output_dir);
        config.n = doc.value("n", config.n);
        // provider knobs live flat or under a "params" object; nested wins
        const nlohmann::json params =
            doc.contains("params") ? doc["params"] : nlohmann::json::object();
        config.params.max_depth =
            params.value("max_depth", doc.value("max_depth", config.params.max_depth));
        config.params.max_branches =
            params.value("max_branches", doc.value("max_branches", config.params.max_branches));
        config.params.temperature =
            params.value("temperature", doc.value("temperature", config.params.temperature));
        config.params.retries =
            params.value("retries", doc.value("retries", config.params.retries));
        config.min_path_prob = doc.value("min_path_prob", config.min_path_prob);
        config.archetype_k = doc.value("archetype_k", config.archetype_k);
        config.epsilon = doc.value("epsilon", config.epsilon);
        config.offline = doc.value("offline", config.offline);
    } catch (const nlohmann::json::exception& e) {
        throw HagError(Errc::ConfigError, std::string("config field: ") + e.what());
    }
    return config;
}

void RunConfig::apply_env() {
    if (const char* value = std::getenv("HAG_BASE_URL"); value && *value) base_url = value;
    if (const char* value = std::getenv("HAG_API_KEY"); value && *value) api_key = value;
    if (const char* value = std::getenv("HAG_MODEL"); value && *value) model = value;
    if (offline_mode()) offline = true;
}

nlohmann::json RunConfig::echo() const {
    return nlohmann::json{
        {"provider_mode", provider_mode},
        {"base_url", base_url},
        {"api_key", api_key.empty() ? "" : "<redacted>"},
        {"model", model},
        {"transcript", transcript},
        {"embedder_mode", embedder_mode},
        {"embedder_dim", embedder_dim},
        {"seed", seed},
        {"mock_seed", mock_seed},
        {"db_path", db_path},
        {"schema_path", schema_path},
        {"output_dir", output_dir},
        {"n", n},
        {"max_depth", params.max_depth},
        {"max_branches", params.max_branches},
        {"temperature", params.temperature},
        {"retries", params.retries},
        {"min_path_prob", min_path_prob},
        {"archetype_k", archetype_k},
        {"epsilon", epsilon},
        {"offline", offline},
    };
}

std::shared_ptr<ChatBackend> make_backend(const RunConfig& config) {
    std::shared_ptr<ChatBackend> backend;
    if (config.provider_mode == "mock") {
        auto mock = std::make_shared<MockChatBackend>(config.mock_seed);
        if (!config.mock_tables.empty()) mock->load_tables(config.mock_tables);
        backend = mock;
    } else if (config.provider_mode == "http") {
        if (config.offline)
            throw HagError(Errc::ConfigError,
                           "provider_mode=http conflicts with offline mode");
        HttpBackendConfig http;
        http.base_url = config.base_url;
        http.api_key = config.api_key;
        http.model = config.model;
        backend = std::make_shared<HttpChatBackend>(HttpBackendConfig::from_env(http));
    } else if (config.provider_mode == "replay") {
        if (config.transcript.empty())
            throw HagError(Errc::ConfigError, "replay mode needs a transcript path");
        return std::make_shared<ReplayChatBackend>(config.transcript);
    } else {
        throw HagError(Errc::ConfigError, "unknown provider_mode: " + config.provider_mode);
    }
    if (!config.transcript.empty())
        backend = std::make_shared<TranscriptingBackend>(backend, config.transcript);
    return backend;
}

std::unique_ptr<Embedder> make_embedder(const RunConfig& config) {
    if (config.embedder_mode == "hash")
        return std::make_unique<HashEmbedder>(config.embedder_dim);
    if (config.embedder_mode == "http") {
        if (config.offline)
            throw HagError(Errc::ConfigError,
                           "embedder_mode=http conflicts with offline mode");
        return std::make_unique<HttpEmbedder>(config.embedder_url, config.api_key,
                                              config.embedder_model, config.embedder_dim);
    }
    throw HagError(Errc::ConfigError, "unknown embedder_mode: " + config.embedder_mode);
}

}  // namespace hag
