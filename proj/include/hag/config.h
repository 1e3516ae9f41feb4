#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "hag/embedder.h"
#include "hag/provider.h"

namespace hag {

// Every knob a command needs, with working defaults. Loadable from a JSON
// file; secrets and endpoint overrides come from the environment.
struct RunConfig {
    std::string provider_mode = "mock";  // mock | http | replay
    std::string base_url;
    std::string api_key;
    std::string model = "gpt-4o";
    std::string transcript;       // recorded to (mock/http) or replayed from
    std::string embedder_mode = "hash";  // hash | http
    std::string embedder_url;
    std::string embedder_model = "text-embedding-3-small";
    std::size_t embedder_dim = 64;

    std::uint64_t seed = 0;
    std::uint64_t mock_seed = 0;
    std::string mock_tables;  // optional mock answer tables (JSON)

    std::string db_path;
    std::string schema_path;        // empty = built-in schema
    std::string harmonization_path; // empty = built-in table
    std::string output_dir = "runs";

    std::size_t n = 100;
    ProviderParams params;
    double min_path_prob = 0.0;
    std::size_t archetype_k = 4;
    double epsilon = 1e-6;
    bool offline = false;

    static RunConfig from_file(const std::string& path);
    void apply_env();  // HAG_BASE_URL, HAG_API_KEY, HAG_MODEL, HAG_OFFLINE

    // Echo embedded into artifacts; the API key is redacted.
    nlohmann::json echo() const;
};

// Chat backend per provider_mode, wrapped in a transcript recorder when
// config.transcript is set (except replay, which reads it instead).
std::shared_ptr<ChatBackend> make_backend(const RunConfig& config);
std::unique_ptr<Embedder> make_embedder(const RunConfig& config);

}  // namespace hag
