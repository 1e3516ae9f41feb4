#include "hag/judge.h"

#include <cmath>
#include <sstream>

#include "hag/errors.h"
#include "hag/metrics.h"
#include "hag/prompts.h"
#include "hag/util.h"

namespace hag {

namespace {

// Accepts integers and integral doubles; anything else is out of range.
int parse_score(const nlohmann::json& doc, const std::string& field) {
    if (!doc.contains(field)) throw HagError(Errc::MalformedJudgeResponse, "missing " + field);
    const auto& value = doc[field];
    double as_double;
    if (value.is_number()) {
        as_double = value.get<double>();
    } else if (value.is_string()) {
        try {
            as_double = std::stod(value.get<std::string>());
        } catch (const std::exception&) {
            throw HagError(Errc::MalformedJudgeResponse, field + " is not a number");
        }
    } else {
        throw HagError(Errc::MalformedJudgeResponse, field + " is not a number");
    }
    if (as_double != std::floor(as_double) || as_double < 1.0 || as_double > 5.0)
        throw HagError(Errc::MalformedJudgeResponse,
                       field + " must be an integer between 1 and 5, got " +
                           std::to_string(as_double));
    return static_cast<int>(as_double);
}

int ask_for_score(ChatBackend& judge, ChatRequest request, const std::string& field,
                  int retries) {
    std::string error;
    const std::string base_prompt = request.prompt;
    for (int round = 0; round <= retries; ++round) {
        if (round > 0)
            request.prompt = base_prompt + "\n\nYour previous response was invalid: " + error +
                             "\nAnswer again, strictly in the required JSON format.";
        const std::string raw = judge.complete(request);
        try {
            return parse_score(parse_structured(raw), field);
        } catch (const HagError& e) {
            if (e.code() != Errc::MalformedJudgeResponse && e.code() != Errc::NoJsonFound)
                throw;
            error = e.what();
        }
    }
    throw HagError(Errc::MalformedJudgeResponse, "judge failed after retries: " + error);
}

}  // namespace

int judge_archetypes(ChatBackend& judge, const std::string& topic,
                     const std::vector<Archetype>& archetypes, const ProviderParams& params) {
    params.validate();
    if (archetypes.empty())
        throw HagError(Errc::PopulationTooSmall, "no archetypes to judge");

    std::ostringstream clusters;
    for (std::size_t i = 0; i < archetypes.size(); ++i) {
        const auto& a = archetypes[i];
        clusters << "Archetype " << (i + 1) << " (share "
                 << static_cast<int>(std::lround(a.share * 100)) << "%): "
                 << (a.representative.free_text ? *a.representative.free_text
                                                : render_persona_text(a.representative))
                 << "\n";
    }

    ChatRequest request;
    request.kind = RequestKind::JudgeArchetypes;
    request.prompt = prompts::judge_archetypes(clusters.str(), topic);
    request.temperature = params.temperature;
    request.topic = topic;
    request.hints = {{"archetypes", archetypes.size()}};
    return ask_for_score(judge, request, "archetype_coherence_score", params.retries);
}

ConsistencyResult judge_consistency(ChatBackend& judge, const std::string& topic,
                                    const Population& population, std::uint64_t seed,
                                    const ProviderParams& params) {
    params.validate();
    if (population.members.empty())
        throw HagError(Errc::EmptyPopulation, "population is empty");

    const std::size_t n = adaptive_sample_size(population.size());
    std::vector<std::size_t> ids(population.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    Rng rng(seed);
    shuffle(ids, rng);
    ids.resize(n);

    ConsistencyResult result;
    result.sample_size = n;
    double total = 0.0;
    for (std::size_t id : ids) {
        const auto& record = population.members[id];
        ChatRequest request;
        request.kind = RequestKind::JudgeConsistency;
        request.prompt = prompts::judge_consistency(topic, record.to_json().dump());
        request.temperature = params.temperature;
        request.topic = topic;
        request.context_key = "member=" + std::to_string(id);
        const int score =
            ask_for_score(judge, request, "internal_consistency_score", params.retries);
        result.scores.push_back(score);
        total += score;
    }
    result.mean = total / static_cast<double>(result.scores.size());
    return result;
}

}  // namespace hag
