#pragma once

#include <memory>
#include <string>

#include "hag/provider.h"

namespace hag {

struct HttpBackendConfig {
    std::string base_url;  // e.g. http://localhost:8000/v1
    std::string api_key;
    std::string model = "gpt-4o";
    double timeout_seconds = 60.0;

    // Fills unset fields from HAG_BASE_URL / HAG_API_KEY / HAG_MODEL.
    static HttpBackendConfig from_env();
    static HttpBackendConfig from_env(HttpBackendConfig base);
};

// OpenAI-style chat completion client. Refuses to run when HAG_OFFLINE is
// set, before any socket is opened.
class HttpChatBackend final : public ChatBackend {
  public:
    explicit HttpChatBackend(HttpBackendConfig config);
    ~HttpChatBackend() override;

    std::string complete(const ChatRequest& request) override;
    std::string fingerprint() const override;
    bool deterministic() const override { return false; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

bool offline_mode();

}  // namespace hag
