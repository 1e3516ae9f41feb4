#include "hag/bench.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "hag/errors.h"
#include "hag/prompts.h"
#include "hag/util.h"

namespace hag {

namespace {

constexpr std::size_t kMinUsers = 50;

bool is_url(const std::string& token) {
    return token.rfind("http://", 0) == 0 || token.rfind("https://", 0) == 0 ||
           token.rfind("www.", 0) == 0;
}

std::string strip_urls(const std::string& text) {
    std::ostringstream out;
    bool first = true;
    for (const auto& token : tokenize(text)) {
        if (is_url(token)) continue;
        if (!first) out << ' ';
        out << token;
        first = false;
    }
    return out.str();
}

}  // namespace

std::vector<CorpusPost> load_corpus(const std::string& path) {
    std::string content;
    try {
        content = read_file(path);
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableCorpus, std::string("corpus: ") + e.what());
    }
    std::vector<CorpusPost> posts;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object())
            throw HagError(Errc::UnreadableCorpus,
                           "corpus line " + std::to_string(line_no) + " is not a JSON object");
        CorpusPost post;
        try {
            post.user_id = doc.at("user_id").get<std::string>();
            post.text = doc.at("text").get<std::string>();
            post.timestamp = doc.value("timestamp", "");
            post.theme = doc.value("theme", "");
        } catch (const nlohmann::json::exception& e) {
            throw HagError(Errc::UnreadableCorpus,
                           "corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        posts.push_back(std::move(post));
    }
    return posts;
}

std::vector<CorpusUser> filter_corpus(const std::vector<CorpusPost>& posts,
                                      const FilterPolicy& policy, FilterStats* stats_out) {
    FilterStats stats;
    std::map<std::string, CorpusUser> users;
    for (const auto& post : posts) {
        ++stats.posts_read;
        const std::string body = policy.strip_urls ? strip_urls(post.text) : post.text;
        if (tokenize(body).size() < policy.min_tokens) {
            ++stats.posts_short;
            continue;
        }
        if ((!policy.date_from.empty() && post.timestamp < policy.date_from) ||
            (!policy.date_to.empty() && post.timestamp > policy.date_to)) {
            ++stats.posts_outside_dates;
            continue;
        }
        auto& user = users[post.user_id];
        user.user_id = post.user_id;
        if (user.theme.empty()) user.theme = post.theme;
        user.texts.emplace_back(post.timestamp, body);
    }

    std::vector<CorpusUser> kept;
    for (auto& [id, user] : users) {
        std::stable_sort(user.texts.begin(), user.texts.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        if (user.texts.size() < policy.min_texts ||
            (policy.max_texts > 0 && user.texts.size() > policy.max_texts)) {
            ++stats.users_outside_text_bounds;
            continue;
        }
        kept.push_back(std::move(user));
    }
    stats.users_kept = kept.size();
    if (stats_out) *stats_out = stats;
    return kept;
}

PersonaRecord infer_persona(ChatBackend& backend, const CorpusUser& user,
                            const DimensionSchema& schema, const ProviderParams& params,
                            const Harmonizer& harmonizer, std::size_t token_budget) {
    params.validate();
    if (user.texts.empty())
        throw HagError(Errc::UnreadableCorpus, "user " + user.user_id + " has no texts");

    std::ostringstream joined;
    std::size_t tokens_used = 0;
    for (const auto& [timestamp, body] : user.texts) {
        const std::size_t tokens = tokenize(body).size();
        if (tokens_used > 0 && tokens_used + tokens > token_budget) break;
        if (tokens_used > 0) joined << "\n";
        joined << body;
        tokens_used += tokens;
    }

    ChatRequest request;
    request.kind = RequestKind::TextToPersona;
    request.prompt = prompts::text_to_persona(user.theme, joined.str(), schema);
    request.temperature = params.temperature;
    request.topic = user.theme;
    request.context_key = user.user_id;

    std::string error;
    Errc final_code = Errc::MalformedResponse;
    const std::string base_prompt = request.prompt;
    for (int round = 0; round <= params.retries; ++round) {
        if (round > 0)
            request.prompt = base_prompt + "\n\nYour previous response was invalid: " + error +
                             "\nAnswer again, strictly in the required JSON format.";
        const std::string raw = backend.complete(request);
        try {
            nlohmann::json doc = parse_structured(raw);
            if (doc.contains("persona") && doc["persona"].is_object()) doc = doc["persona"];
            PersonaRecord record;
            record.provenance = Provenance::Real;
            for (auto it = doc.begin(); it != doc.end(); ++it) {
                auto id = schema.resolve_name(it.key());
                if (!id) {
                    throw HagError(Errc::MalformedResponse,
                                   "unknown dimension \"" + it.key() + "\"");
                }
                const std::string raw_label = it.value().is_string()
                                                  ? it.value().get<std::string>()
                                                  : it.value().dump();
                record.values[*id] = harmonizer.harmonize(schema.at(*id), raw_label);
            }
            for (const auto& dim : schema.dimensions())
                if (!record.values.count(dim.id)) record.values[dim.id] = kUnknownLabel;
            for (const auto& violation : validate_record(record, schema)) {
                if (violation.kind == ViolationKind::UnknownLabel)
                    throw HagError(Errc::ConstraintViolatedInResponse, violation.message);
                throw HagError(Errc::MalformedResponse, violation.message);
            }
            record.source_id = user.user_id;
            record.free_text = render_persona_text(record);
            return record;
        } catch (const HagError& e) {
            if (e.code() != Errc::MalformedResponse && e.code() != Errc::NoJsonFound &&
                e.code() != Errc::ConstraintViolatedInResponse)
                throw;
            error = e.what();
            final_code = e.code() == Errc::NoJsonFound ? Errc::MalformedResponse : e.code();
        } catch (const nlohmann::json::exception& e) {
            error = e.what();
            final_code = Errc::MalformedResponse;
        }
    }
    throw HagError(final_code,
                   "persona inference for " + user.user_id + " failed after retries: " + error);
}

Population build_benchmark(const std::string& corpus_path, const std::string& theme,
                           const std::string& topic, ChatBackend& backend,
                           const FilterPolicy& policy, bool force, const ProviderParams& params,
                           FilterStats* stats_out) {
    auto posts = load_corpus(corpus_path);
    if (!theme.empty()) {
        posts.erase(std::remove_if(posts.begin(), posts.end(),
                                   [&](const CorpusPost& p) { return p.theme != theme; }),
                    posts.end());
    }
    FilterStats stats;
    const auto users = filter_corpus(posts, policy, &stats);
    if (stats_out) *stats_out = stats;
    if (users.size() < kMinUsers && !force)
        throw HagError(Errc::InsufficientVolume,
                       std::to_string(users.size()) + " users after filtering; " +
                           std::to_string(kMinUsers) + " required");

    Population population;
    population.topic = topic;
    const DimensionSchema& schema = default_schema();
    for (const auto& user : users)
        population.members.push_back(infer_persona(backend, user, schema, params));

    population.meta.generator = "bench";
    population.meta.provider_fingerprint = backend.fingerprint();
    population.meta.extra["theme"] = theme;
    population.meta.extra["users"] = users.size();
    population.meta.extra["filter"] = {{"min_tokens", policy.min_tokens},
                                       {"min_texts", policy.min_texts},
                                       {"max_texts", policy.max_texts},
                                       {"posts_read", stats.posts_read},
                                       {"posts_short", stats.posts_short}};
    return population;
}

}  // namespace hag
