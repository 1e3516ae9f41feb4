#include "hag/http_backend.h"

#include <cstdlib>

#include <httplib.h>

#include "hag/errors.h"
#include "hag/util.h"

namespace hag {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value && *value ? std::string(value) : fallback;
}

// Splits "http://host:1234/v1" into the client origin and the path prefix.
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    std::string rest = base_url;
    std::size_t scheme_end = rest.find("://");
    std::size_t path_start =
        rest.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) return {rest, ""};
    std::string prefix = rest.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {rest.substr(0, path_start), prefix};
}

}  // namespace

bool offline_mode() {
    const char* value = std::getenv("HAG_OFFLINE");
    return value && *value && std::string(value) != "0";
}

HttpBackendConfig HttpBackendConfig::from_env() { return from_env(HttpBackendConfig{}); }

HttpBackendConfig HttpBackendConfig::from_env(HttpBackendConfig base) {
    if (base.base_url.empty()) base.base_url = env_or("HAG_BASE_URL", "");
    if (base.api_key.empty()) base.api_key = env_or("HAG_API_KEY", "");
    base.model = env_or("HAG_MODEL", base.model);
    return base;
}

struct HttpChatBackend::Impl {
    HttpBackendConfig config;
    std::string origin;
    std::string path_prefix;
};

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : impl_(new Impl) {
    if (config.base_url.empty())
        throw HagError(Errc::ConfigError, "base_url is required for the HTTP backend");
    impl_->config = std::move(config);
    auto [origin, prefix] = split_base_url(impl_->config.base_url);
    impl_->origin = origin;
    impl_->path_prefix = prefix;
}

HttpChatBackend::~HttpChatBackend() = default;

std::string HttpChatBackend::fingerprint() const {
    return "http:" + impl_->config.model + "@" + impl_->config.base_url;
}

std::string HttpChatBackend::complete(const ChatRequest& request) {
    if (offline_mode())
        throw HagError(Errc::ProviderUnreachable,
                       "HAG_OFFLINE is set; refusing to contact " + impl_->config.base_url);

    nlohmann::json body{
        {"model", impl_->config.model},
        {"messages", nlohmann::json::array({nlohmann::json{
                         {"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.temperature},
    };

    httplib::Client client(impl_->origin);
    client.set_connection_timeout(static_cast<time_t>(impl_->config.timeout_seconds));
    client.set_read_timeout(static_cast<time_t>(impl_->config.timeout_seconds));
    httplib::Headers headers;
    if (!impl_->config.api_key.empty())
        headers.emplace("Authorization", "Bearer " + impl_->config.api_key);

    auto result = client.Post(impl_->path_prefix + "/chat/completions", headers, body.dump(),
                              "application/json");
    if (!result)
        throw HagError(Errc::ProviderUnreachable,
                       "POST " + impl_->config.base_url + ": " + httplib::to_string(result.error()));
    if (result->status < 200 || result->status >= 300)
        throw HagError(Errc::ProviderUnreachable,
                       "provider returned HTTP " + std::to_string(result->status) + ": " +
                           result->body.substr(0, 200));

    try {
        nlohmann::json doc = nlohmann::json::parse(result->body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception& e) {
        throw HagError(Errc::MalformedResponse,
                       std::string("unexpected completion payload: ") + e.what());
    }
}

}  // namespace hag
