#include "hag/provider.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hag/errors.h"
#include "hag/prompts.h"
#include "hag/util.h"

namespace hag {

void ProviderParams::validate() const {
    if (max_depth < 1) throw HagError(Errc::ConfigError, "max_depth must be >= 1");
    if (max_branches < 1) throw HagError(Errc::ConfigError, "max_branches must be >= 1");
    if (retries < 0) throw HagError(Errc::ConfigError, "retries must be >= 0");
}

void normalize_weights(std::vector<WeightedValue>& values) {
    double sum = 0.0;
    for (const auto& v : values) sum += v.weight;
    if (values.empty() || sum <= 0.0)
        throw HagError(Errc::EmptyDistribution, "no positive mass to normalize");
    for (auto& v : values) v.weight /= sum;
}

const char* request_kind_name(RequestKind kind) {
    switch (kind) {
        case RequestKind::PrioritizeDims: return "prioritize_dims";
        case RequestKind::InferConditional: return "infer_conditional";
        case RequestKind::GeneratePersona: return "generate_persona";
        case RequestKind::PersonaBatch: return "persona_batch";
        case RequestKind::TextToPersona: return "text_to_persona";
        case RequestKind::JudgeArchetypes: return "judge_archetypes";
        case RequestKind::JudgeConsistency: return "judge_consistency";
    }
    return "unknown";
}

TranscriptingBackend::TranscriptingBackend(std::shared_ptr<ChatBackend> inner, std::string path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

std::string TranscriptingBackend::complete(const ChatRequest& request) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string response = inner_->complete(request);
    long latency_ms = 0;
    if (!inner_->deterministic()) {
        latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    }
    nlohmann::json line{{"kind", request_kind_name(request.kind)},
                        {"request", request.prompt},
                        {"response", response},
                        {"latency_ms", latency_ms}};
    std::lock_guard<std::mutex> lock(mutex_);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw HagError(Errc::UnreadableSource, "cannot append transcript: " + path_);
    out << line.dump() << "\n";
    return response;
}

ReplayChatBackend::ReplayChatBackend(const std::string& transcript_path) {
    std::string content;
    try {
        content = read_file(transcript_path);
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableSource, std::string("transcript: ") + e.what());
    }
    std::istringstream in(content);
    std::string line;
    std::size_t entries = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            responses_[j.at("request").get<std::string>()].push_back(
                j.at("response").get<std::string>());
        } catch (const std::exception& e) {
            throw HagError(Errc::UnreadableSource,
                           std::string("bad transcript line: ") + e.what());
        }
        ++entries;
    }
    std::ostringstream fp;
    fp << "replay:" << std::hex << fnv1a(content) << ":" << std::dec << entries;
    fingerprint_ = fp.str();
}

std::string ReplayChatBackend::complete(const ChatRequest& request) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = responses_.find(request.prompt);
    if (it == responses_.end() || it->second.empty())
        throw HagError(Errc::ProviderUnreachable,
                       "transcript has no recorded response for this request");
    std::string response = it->second.front();
    it->second.erase(it->second.begin());
    return response;
}

nlohmann::json parse_structured(const std::string& raw) {
    for (std::size_t start = 0; start < raw.size(); ++start) {
        if (raw[start] != '{') continue;
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < raw.size(); ++i) {
            char c = raw[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    const std::string candidate = raw.substr(start, i - start + 1);
                    nlohmann::json parsed =
                        nlohmann::json::parse(candidate, nullptr, /*allow_exceptions=*/false);
                    if (!parsed.is_discarded()) return parsed;
                    break;  // malformed candidate, scan for the next '{'
                }
            }
        }
    }
    throw HagError(Errc::NoJsonFound, "no JSON object in response");
}

std::vector<PersonaRecord> KnowledgeProvider::generate_batch(const std::string& topic,
                                                             const DimensionSchema& schema,
                                                             int count, int /*batch_tag*/,
                                                             const ProviderParams& params) {
    std::vector<PersonaRecord> records;
    for (int i = 0; i < count; ++i)
        records.push_back(generate_persona(topic, PersonaVector{}, schema, params));
    return records;
}

WkmProvider::WkmProvider(std::shared_ptr<ChatBackend> backend, const Harmonizer* harmonizer)
    : backend_(std::move(backend)), harmonizer_(harmonizer) {}

namespace {

// Validation failure inside one repair round; carries the error to re-prompt
// with and the code to throw once retries are exhausted.
struct RoundFailure {
    Errc code;
    std::string message;
};

ChatRequest repaired(const ChatRequest& original, const std::string& error) {
    ChatRequest fixed = original;
    fixed.prompt = original.prompt +
                   "\n\nYour previous response was invalid: " + error +
                   "\nAnswer again, strictly in the required JSON format.";
    return fixed;
}

}  // namespace

std::vector<std::string> WkmProvider::prioritize_dims(const std::string& topic,
                                                      const DimensionSchema& schema,
                                                      const ProviderParams& params) {
    params.validate();
    if (trim(topic).empty()) throw HagError(Errc::ConfigError, "topic must be non-empty");

    ChatRequest request;
    request.kind = RequestKind::PrioritizeDims;
    request.prompt = prompts::prioritize_dims(topic, schema, params.max_depth);
    request.temperature = params.temperature;
    request.topic = topic;
    request.hints = {{"max_depth", params.max_depth}};

    RoundFailure last{Errc::MalformedResponse, "no attempt made"};
    ChatRequest attempt = request;
    for (int round = 0; round <= params.retries; ++round) {
        const std::string raw = backend_->complete(attempt);
        try {
            nlohmann::json doc = parse_structured(raw);
            if (!doc.contains("dimensions") || !doc["dimensions"].is_array())
                throw RoundFailure{Errc::MalformedResponse, "missing \"dimensions\" array"};
            std::vector<std::string> ids;
            std::set<std::string> seen;
            for (const auto& jname : doc["dimensions"]) {
                if (!jname.is_string())
                    throw RoundFailure{Errc::MalformedResponse, "dimension entries must be strings"};
                const std::string name = jname.get<std::string>();
                auto id = schema.resolve_name(name);
                if (!id)
                    throw RoundFailure{Errc::UnknownDimensionInResponse,
                                       "\"" + name + "\" is not one of the listed dimensions"};
                if (seen.insert(*id).second) ids.push_back(*id);
            }
            if (ids.empty())
                throw RoundFailure{Errc::MalformedResponse, "empty dimension list"};
            if (static_cast<int>(ids.size()) > params.max_depth)
                ids.resize(static_cast<std::size_t>(params.max_depth));
            return ids;
        } catch (const RoundFailure& f) {
            last = f;
        } catch (const HagError& e) {
            if (e.code() != Errc::NoJsonFound) throw;
            last = {Errc::MalformedResponse, e.what()};
        } catch (const nlohmann::json::exception& e) {
            last = {Errc::MalformedResponse, e.what()};
        }
        attempt = repaired(request, last.message);
    }
    throw HagError(last.code, "prioritize_dims failed after retries: " + last.message);
}

std::vector<WeightedValue> WkmProvider::infer_conditional(
    const std::string& topic, const std::string& dimension_id, const PersonaVector& context,
    const ProviderParams& params, const std::optional<std::vector<std::string>>& allowed) {
    params.validate();
    if (context.has(dimension_id))
        throw HagError(Errc::ConfigError,
                       "dimension " + dimension_id + " already assigned in context");

    const DimensionSchema& schema = default_schema();
    const Dimension dim = schema.has(dimension_id)
                              ? schema.at(dimension_id)
                              : Dimension{dimension_id, dimension_id,
                                          DimensionCategory::BasicDemographics, "", std::nullopt};

    ChatRequest request;
    request.kind = RequestKind::InferConditional;
    request.prompt =
        prompts::infer_conditional(topic, dim, context, schema, params.max_branches, allowed);
    request.temperature = params.temperature;
    request.topic = topic;
    request.dimension_id = dimension_id;
    request.context_key = context.key();
    request.hints = {{"max_branches", params.max_branches}};
    if (allowed) request.hints["allowed"] = *allowed;

    RoundFailure last{Errc::MalformedResponse, "no attempt made"};
    ChatRequest attempt = request;
    for (int round = 0; round <= params.retries; ++round) {
        const std::string raw = backend_->complete(attempt);
        try {
            nlohmann::json doc = parse_structured(raw);
            if (!doc.contains("distribution") || !doc["distribution"].is_array())
                throw RoundFailure{Errc::MalformedResponse, "missing \"distribution\" array"};
            std::vector<WeightedValue> values;
            std::set<std::string> labels;
            for (const auto& entry : doc["distribution"]) {
                if (!entry.contains("value") || !entry.contains("probability"))
                    throw RoundFailure{Errc::MalformedResponse,
                                       "entries need \"value\" and \"probability\""};
                WeightedValue wv{entry["value"].get<std::string>(),
                                 entry["probability"].get<double>()};
                if (wv.label.empty())
                    throw RoundFailure{Errc::MalformedResponse, "empty value label"};
                if (wv.weight < 0.0)
                    throw RoundFailure{Errc::MalformedResponse,
                                       "negative probability for \"" + wv.label + "\""};
                if (!labels.insert(wv.label).second)
                    throw RoundFailure{Errc::MalformedResponse,
                                       "duplicate value \"" + wv.label + "\""};
                if (allowed &&
                    std::find(allowed->begin(), allowed->end(), wv.label) == allowed->end())
                    throw RoundFailure{Errc::DisallowedValue,
                                       "\"" + wv.label + "\" is not an allowed value"};
                values.push_back(std::move(wv));
            }
            if (values.empty())
                throw RoundFailure{Errc::EmptyDistribution, "distribution has no entries"};
            if (static_cast<int>(values.size()) > params.max_branches)
                throw RoundFailure{Errc::MalformedResponse,
                                   "too many values (" + std::to_string(values.size()) +
                                       "); return at most " +
                                       std::to_string(params.max_branches)};
            double sum = 0.0;
            for (const auto& v : values) sum += v.weight;
            if (sum < 0.9 || sum > 1.1)
                throw RoundFailure{Errc::MalformedResponse,
                                   "probabilities sum to " + std::to_string(sum) +
                                       "; they must sum to exactly 1.0"};
            normalize_weights(values);
            return values;
        } catch (const RoundFailure& f) {
            last = f;
        } catch (const HagError& e) {
            if (e.code() != Errc::NoJsonFound) throw;
            last = {Errc::MalformedResponse, e.what()};
        } catch (const nlohmann::json::exception& e) {
            last = {Errc::MalformedResponse, e.what()};
        }
        attempt = repaired(request, last.message);
    }
    throw HagError(last.code, "infer_conditional(" + dimension_id +
                                  ") failed after retries: " + last.message);
}

PersonaRecord WkmProvider::generate_persona(const std::string& topic, const PersonaVector& fixed,
                                            const DimensionSchema& schema,
                                            const ProviderParams& params) {
    params.validate();
    for (const auto& a : fixed.assignments()) {
        if (!schema.has(a.dimension_id))
            throw HagError(Errc::UnknownDimension, "fixed dimension not in schema: " + a.dimension_id);
        if (!schema.at(a.dimension_id).allows_label(a.label))
            throw HagError(Errc::ConfigError,
                           "fixed label '" + a.label + "' invalid for " + a.dimension_id);
    }

    // Fully constrained persona needs no model call.
    if (fixed.size() == schema.size()) {
        PersonaRecord record;
        for (const auto& a : fixed.assignments()) record.values[a.dimension_id] = a.label;
        record.provenance = Provenance::Augmented;
        record.free_text = render_persona_text(record);
        return record;
    }

    ChatRequest request;
    request.kind = RequestKind::GeneratePersona;
    request.prompt = prompts::generate_persona(topic, fixed, schema);
    request.temperature = params.temperature;
    request.topic = topic;
    request.context_key = fixed.key();
    nlohmann::json jfixed = nlohmann::json::object();
    for (const auto& a : fixed.assignments()) jfixed[a.dimension_id] = a.label;
    request.hints = {{"fixed", jfixed}};

    RoundFailure last{Errc::MalformedResponse, "no attempt made"};
    ChatRequest attempt = request;
    for (int round = 0; round <= params.retries; ++round) {
        const std::string raw = backend_->complete(attempt);
        try {
            nlohmann::json doc = parse_structured(raw);
            if (doc.contains("persona") && doc["persona"].is_object()) doc = doc["persona"];
            PersonaRecord record;
            record.provenance = Provenance::Augmented;
            for (auto it = doc.begin(); it != doc.end(); ++it) {
                auto id = schema.resolve_name(it.key());
                if (!id)
                    throw RoundFailure{Errc::MalformedResponse,
                                       "unknown dimension \"" + it.key() + "\" in persona"};
                std::string raw_label = it.value().is_string()
                                            ? it.value().get<std::string>()
                                            : it.value().dump();
                record.values[*id] = harmonizer_->harmonize(schema.at(*id), raw_label);
            }
            for (const auto& a : fixed.assignments()) {
                auto it = record.values.find(a.dimension_id);
                if (it == record.values.end()) {
                    record.values[a.dimension_id] = a.label;
                } else if (it->second != a.label) {
                    throw RoundFailure{Errc::ConstraintViolatedInResponse,
                                       a.dimension_id + " must be \"" + a.label +
                                           "\" but the response has \"" + it->second + "\""};
                }
            }
            auto violations = validate_record(record, schema);
            if (!violations.empty())
                throw RoundFailure{Errc::MalformedResponse, violations.front().message};
            record.free_text = render_persona_text(record);
            return record;
        } catch (const RoundFailure& f) {
            last = f;
        } catch (const HagError& e) {
            if (e.code() != Errc::NoJsonFound) throw;
            last = {Errc::MalformedResponse, e.what()};
        } catch (const nlohmann::json::exception& e) {
            last = {Errc::MalformedResponse, e.what()};
        }
        attempt = repaired(request, last.message);
    }
    throw HagError(last.code, "generate_persona failed after retries: " + last.message);
}

std::vector<PersonaRecord> WkmProvider::generate_batch(const std::string& topic,
                                                       const DimensionSchema& schema, int count,
                                                       int batch_tag,
                                                       const ProviderParams& params) {
    params.validate();
    if (count < 1) throw HagError(Errc::InvalidSize, "batch count must be >= 1");

    ChatRequest request;
    request.kind = RequestKind::PersonaBatch;
    request.prompt = prompts::persona_batch(topic, schema, count);
    request.temperature = params.temperature;
    request.topic = topic;
    request.context_key = "batch=" + std::to_string(batch_tag);
    request.hints = {{"count", count}, {"batch_tag", batch_tag}};

    RoundFailure last{Errc::MalformedResponse, "no attempt made"};
    ChatRequest attempt = request;
    for (int round = 0; round <= params.retries; ++round) {
        const std::string raw = backend_->complete(attempt);
        try {
            nlohmann::json doc = parse_structured(raw);
            if (!doc.contains("personas") || !doc["personas"].is_array())
                throw RoundFailure{Errc::MalformedResponse, "missing \"personas\" array"};
            std::vector<PersonaRecord> records;
            for (const auto& jpersona : doc["personas"]) {
                if (!jpersona.is_object()) continue;  // dropped, not fatal
                PersonaRecord record;
                record.provenance = Provenance::Augmented;
                bool resolvable = true;
                for (auto it = jpersona.begin(); it != jpersona.end(); ++it) {
                    auto id = schema.resolve_name(it.key());
                    if (!id) { resolvable = false; break; }
                    std::string raw_label = it.value().is_string()
                                                ? it.value().get<std::string>()
                                                : it.value().dump();
                    record.values[*id] = harmonizer_->harmonize(schema.at(*id), raw_label);
                }
                if (!resolvable || !validate_record(record, schema).empty()) continue;
                record.free_text = render_persona_text(record);
                records.push_back(std::move(record));
            }
            return records;
        } catch (const RoundFailure& f) {
            last = f;
        } catch (const HagError& e) {
            if (e.code() != Errc::NoJsonFound) throw;
            last = {Errc::MalformedResponse, e.what()};
        } catch (const nlohmann::json::exception& e) {
            last = {Errc::MalformedResponse, e.what()};
        }
        attempt = repaired(request, last.message);
    }
    throw HagError(last.code, "persona batch failed after retries: " + last.message);
}

}  // namespace hag
