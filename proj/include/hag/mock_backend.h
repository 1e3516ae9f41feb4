#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "hag/provider.h"

namespace hag {

// Offline stand-in for a chat model. Answers are assembled from explicit
// tables where present and from seed-keyed hashes otherwise, so every
// response is a pure function of (seed, request) and runs are repeatable.
// Scripted responses and per-context overrides let tests inject faults
// through the same parsing path the real backend exercises.
class MockChatBackend final : public ChatBackend {
  public:
    explicit MockChatBackend(std::uint64_t seed = 0);

    std::string complete(const ChatRequest& request) override;
    std::string fingerprint() const override;
    bool deterministic() const override { return true; }

    // Table-driven answers. Keys: conditionals use topic|dimension|context.
    void set_dim_sequence(const std::string& topic, std::vector<std::string> dimension_ids);
    void set_conditional(const std::string& topic, const std::string& dimension_id,
                         const std::string& context_key, std::vector<WeightedValue> values);
    void set_text_persona(const std::string& context_key, std::map<std::string, std::string> values);
    void set_judge_archetype_score(int score);
    void set_judge_consistency_score(int score);

    // One-shot raw responses consumed FIFO per request kind, ahead of tables.
    void push_script(RequestKind kind, std::string raw_response);
    // Persistent raw response for every request of `kind` whose context key
    // matches; an empty context_key matches all. Survives retries, unlike a
    // one-shot script.
    void set_override(RequestKind kind, const std::string& context_key, std::string raw_response);

    void load_tables(const std::string& path);

    int calls(RequestKind kind) const;
    int total_calls() const;

  private:
    std::uint64_t hash_for(const ChatRequest& request) const;
    std::string answer_prioritize(const ChatRequest& request);
    std::string answer_conditional(const ChatRequest& request);
    std::string answer_persona(const ChatRequest& request);
    std::string answer_batch(const ChatRequest& request);
    std::string answer_text_persona(const ChatRequest& request);

    std::uint64_t seed_;
    std::map<std::string, std::vector<std::string>> dim_sequences_;
    std::map<std::string, std::vector<WeightedValue>> conditionals_;
    std::map<std::string, std::map<std::string, std::string>> text_personas_;
    int archetype_score_ = 4;
    int consistency_score_ = 4;
    std::map<int, std::vector<std::string>> scripts_;
    std::map<std::pair<int, std::string>, std::string> overrides_;
    mutable std::map<int, int> counters_;
    mutable std::mutex mutex_;
};

}  // namespace hag
