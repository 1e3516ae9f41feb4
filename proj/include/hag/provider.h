#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hag/harmonize.h"
#include "hag/persona.h"
#include "hag/schema.h"

namespace hag {

struct ProviderParams {
    int max_depth = 5;     // most prioritized dimensions kept
    int max_branches = 5;  // most values per dimension
    double temperature = 0.0;
    int retries = 3;  // repair re-prompts after a malformed response

    void validate() const;
};

struct WeightedValue {
    std::string label;
    double weight = 0.0;
};

// Divide by the sum. Throws EmptyDistribution on empty or non-positive mass.
void normalize_weights(std::vector<WeightedValue>& values);

enum class RequestKind {
    PrioritizeDims,
    InferConditional,
    GeneratePersona,
    PersonaBatch,
    TextToPersona,
    JudgeArchetypes,
    JudgeConsistency,
};

const char* request_kind_name(RequestKind kind);

// One model call. The prompt is the full request text; the semantic fields
// exist so deterministic offline backends can answer without parsing prose.
struct ChatRequest {
    RequestKind kind = RequestKind::PrioritizeDims;
    std::string prompt;
    double temperature = 0.0;
    std::string topic;
    std::string dimension_id;
    std::string context_key;
    nlohmann::json hints = nlohmann::json::object();
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual std::string fingerprint() const = 0;
    // True when identical requests always produce identical responses.
    virtual bool deterministic() const = 0;
};

// Decorator appending one JSONL line per call: kind, request, response,
// latency (0 for deterministic inner backends so transcripts are
// byte-reproducible).
class TranscriptingBackend : public ChatBackend {
public:
    TranscriptingBackend(std::shared_ptr<ChatBackend> inner, std::string path);

    std::string complete(const ChatRequest& request) override;
    std::string fingerprint() const override { return inner_->fingerprint(); }
    bool deterministic() const override { return inner_->deterministic(); }

private:
    std::shared_ptr<ChatBackend> inner_;
    std::string path_;
    std::mutex mutex_;
};

// Serves responses recorded by TranscriptingBackend, matched by exact request
// text (FIFO within duplicates). A request absent from the transcript is
// ProviderUnreachable.
class ReplayChatBackend : public ChatBackend {
public:
    explicit ReplayChatBackend(const std::string& transcript_path);

    std::string complete(const ChatRequest& request) override;
    std::string fingerprint() const override { return fingerprint_; }
    bool deterministic() const override { return true; }

private:
    std::map<std::string, std::vector<std::string>> responses_;  // prompt -> FIFO
    std::string fingerprint_;
    std::mutex mutex_;
};

// Extracts the first well-formed JSON object from raw model output, tolerating
// markdown fences and prose around it. Throws NoJsonFound.
nlohmann::json parse_structured(const std::string& raw);

// World-knowledge-model contract: the three capabilities tree construction
// and augmentation rely on.
class KnowledgeProvider {
public:
    virtual ~KnowledgeProvider() = default;

    virtual std::vector<std::string> prioritize_dims(const std::string& topic,
                                                     const DimensionSchema& schema,
                                                     const ProviderParams& params) = 0;

    virtual std::vector<WeightedValue> infer_conditional(
        const std::string& topic, const std::string& dimension_id, const PersonaVector& context,
        const ProviderParams& params,
        const std::optional<std::vector<std::string>>& allowed = std::nullopt) = 0;

    virtual PersonaRecord generate_persona(const std::string& topic, const PersonaVector& fixed,
                                           const DimensionSchema& schema,
                                           const ProviderParams& params) = 0;

    // Batch persona synthesis for the end-to-end generation baseline. Only
    // schema-valid records are returned; invalid completions are dropped.
    // batch_tag differentiates otherwise-identical consecutive requests.
    virtual std::vector<PersonaRecord> generate_batch(const std::string& topic,
                                                      const DimensionSchema& schema, int count,
                                                      int batch_tag,
                                                      const ProviderParams& params);

    // Providers without the generate capability fall back to database
    // resampling during instantiation.
    virtual bool can_generate() const { return true; }

    virtual std::string fingerprint() const = 0;
};

// Prompt-driven implementation over any ChatBackend, with validation and
// repair re-prompts. Malformed responses are re-asked up to params.retries
// times with the validation error appended; the final failure is typed.
class WkmProvider : public KnowledgeProvider {
public:
    explicit WkmProvider(std::shared_ptr<ChatBackend> backend,
                         const Harmonizer* harmonizer = &default_harmonizer());

    std::vector<std::string> prioritize_dims(const std::string& topic,
                                             const DimensionSchema& schema,
                                             const ProviderParams& params) override;

    std::vector<WeightedValue> infer_conditional(
        const std::string& topic, const std::string& dimension_id, const PersonaVector& context,
        const ProviderParams& params,
        const std::optional<std::vector<std::string>>& allowed = std::nullopt) override;

    PersonaRecord generate_persona(const std::string& topic, const PersonaVector& fixed,
                                   const DimensionSchema& schema,
                                   const ProviderParams& params) override;

    std::vector<PersonaRecord> generate_batch(const std::string& topic,
                                              const DimensionSchema& schema, int count,
                                              int batch_tag,
                                              const ProviderParams& params) override;

    std::string fingerprint() const override { return backend_->fingerprint(); }
    ChatBackend& backend() { return *backend_; }

private:
    std::shared_ptr<ChatBackend> backend_;
    const Harmonizer* harmonizer_;
};

}  // namespace hag
