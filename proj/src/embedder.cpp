#include "hag/embedder.h"

#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hag/errors.h"
#include "hag/http_backend.h"
#include "hag/util.h"

namespace hag {

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw HagError(Errc::DimensionMismatch, "embedding sizes differ");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

HashEmbedder::HashEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw HagError(Errc::ConfigError, "embedding dimension must be >= 1");
}

std::vector<std::vector<double>> HashEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::vector<double> vec(dimension_, 0.0);
        for (const auto& token : tokenize(to_lower(text))) {
            const std::uint64_t h = fnv1a(token);
            // Sign bit decorrelates buckets so collisions do not only add.
            const double sign = (h >> 63) ? -1.0 : 1.0;
            vec[h % dimension_] += sign;
        }
        double norm = 0.0;
        for (double v : vec) norm += v * v;
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (double& v : vec) v /= norm;
        }
        out.push_back(std::move(vec));
    }
    return out;
}

std::string HashEmbedder::fingerprint() const {
    return "hash-embedder:dim=" + std::to_string(dimension_);
}

HttpEmbedder::HttpEmbedder(std::string base_url, std::string api_key, std::string model,
                           std::size_t dimension)
    : base_url_(std::move(base_url)),
      api_key_(std::move(api_key)),
      model_(std::move(model)),
      dimension_(dimension) {
    if (base_url_.empty())
        throw HagError(Errc::ConfigError, "base_url is required for the HTTP embedder");
}

HttpEmbedder::~HttpEmbedder() = default;

std::string HttpEmbedder::fingerprint() const {
    return "http-embedder:" + model_ + "@" + base_url_;
}

std::vector<std::vector<double>> HttpEmbedder::embed(const std::vector<std::string>& texts) {
    if (offline_mode())
        throw HagError(Errc::EmbedderUnreachable,
                       "HAG_OFFLINE is set; refusing to contact " + base_url_);

    std::string origin = base_url_;
    std::string prefix;
    if (auto slash = origin.find('/', origin.find("://") == std::string::npos
                                          ? 0
                                          : origin.find("://") + 3);
        slash != std::string::npos) {
        prefix = origin.substr(slash);
        while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
        origin = origin.substr(0, slash);
    }

    httplib::Client client(origin);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    nlohmann::json body{{"model", model_}, {"input", texts}};
    auto result = client.Post(prefix + "/embeddings", headers, body.dump(), "application/json");
    if (!result)
        throw HagError(Errc::EmbedderUnreachable,
                       "POST " + base_url_ + ": " + httplib::to_string(result.error()));
    if (result->status < 200 || result->status >= 300)
        throw HagError(Errc::EmbedderUnreachable,
                       "embedder returned HTTP " + std::to_string(result->status));
    try {
        nlohmann::json doc = nlohmann::json::parse(result->body);
        std::vector<std::vector<double>> out;
        for (const auto& item : doc.at("data"))
            out.push_back(item.at("embedding").get<std::vector<double>>());
        if (out.size() != texts.size())
            throw HagError(Errc::MalformedResponse, "embedding count mismatch");
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw HagError(Errc::MalformedResponse,
                       std::string("unexpected embeddings payload: ") + e.what());
    }
}

}  // namespace hag
