#pragma once

#include <memory>
#include <string>
#include <vector>

namespace hag {

// Text-to-vector backend. Implementations must return unit-norm vectors of
// a fixed dimension so cosine similarity reduces to a dot product.
class Embedder {
  public:
    virtual ~Embedder() = default;
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
    virtual std::size_t dimension() const = 0;
    virtual std::string fingerprint() const = 0;
};

// Deterministic offline embedder: feature-hashes whitespace tokens into a
// fixed number of buckets and L2-normalizes. Token overlap drives cosine
// similarity, which is all the retrieval baseline and clustering need.
class HashEmbedder final : public Embedder {
  public:
    explicit HashEmbedder(std::size_t dimension = 64);

    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
    std::size_t dimension() const override { return dimension_; }
    std::string fingerprint() const override;

  private:
    std::size_t dimension_;
};

// OpenAI-style embeddings endpoint client; honors the offline guard.
class HttpEmbedder final : public Embedder {
  public:
    HttpEmbedder(std::string base_url, std::string api_key, std::string model,
                 std::size_t dimension);
    ~HttpEmbedder() override;

    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
    std::size_t dimension() const override { return dimension_; }
    std::string fingerprint() const override;

  private:
    std::string base_url_;
    std::string api_key_;
    std::string model_;
    std::size_t dimension_;
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace hag
