#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hag/harmonize.h"
#include "hag/persona.h"
#include "hag/provider.h"
#include "hag/schema.h"

namespace hag {

struct CorpusPost {
    std::string user_id;
    std::string timestamp;  // ISO-8601; lexicographic order is time order
    std::string text;
    std::string theme;
};

struct CorpusUser {
    std::string user_id;
    std::vector<std::pair<std::string, std::string>> texts;  // (timestamp, body), newest first
    std::string theme;
};

struct FilterPolicy {
    std::size_t min_tokens = 15;  // whitespace tokens per text
    std::string date_from;  // inclusive; empty = unbounded
    std::string date_to;
    std::size_t min_texts = 1;
    std::size_t max_texts = 0;  // 0 = unbounded
    bool strip_urls = true;
};

struct FilterStats {
    std::size_t posts_read = 0;
    std::size_t posts_short = 0;
    std::size_t posts_outside_dates = 0;
    std::size_t users_outside_text_bounds = 0;
    std::size_t users_kept = 0;
};

// JSONL, one post per line: user_id, timestamp, text, theme.
std::vector<CorpusPost> load_corpus(const std::string& path);

// Applies the policy post-by-post, then groups into users (texts newest
// first, users ordered by id). Deterministic.
std::vector<CorpusUser> filter_corpus(const std::vector<CorpusPost>& posts,
                                      const FilterPolicy& policy, FilterStats* stats = nullptr);

// One persona inferred from a user's texts. Missing dimensions become
// "Unknown"; labels outside a closed vocabulary trigger repair and then
// ConstraintViolatedInResponse. Provenance is Real: the record describes a
// real person, inferred.
PersonaRecord infer_persona(ChatBackend& backend, const CorpusUser& user,
                            const DimensionSchema& schema,
                            const ProviderParams& params = ProviderParams{},
                            const Harmonizer& harmonizer = default_harmonizer(),
                            std::size_t token_budget = 4000);

// Ground-truth population for one theme: filter, enforce the 50-user volume
// criterion (unless force), infer one persona per user.
Population build_benchmark(const std::string& corpus_path, const std::string& theme,
                           const std::string& topic, ChatBackend& backend,
                           const FilterPolicy& policy = FilterPolicy{}, bool force = false,
                           const ProviderParams& params = ProviderParams{},
                           FilterStats* stats = nullptr);

}  // namespace hag
