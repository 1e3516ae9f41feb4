#pragma once

#include <stdexcept>
#include <string>

namespace hag {

// Failure categories across the pipeline. Grouped by CLI exit code:
// provider/embedder/judge failures map to exit 2, data failures to exit 3.
enum class Errc {
    // provider family
    ProviderUnreachable,
    MalformedResponse,
    UnknownDimensionInResponse,
    EmptyDistribution,
    DisallowedValue,
    ConstraintViolatedInResponse,
    NoJsonFound,
    SchemaMismatch,
    AugmentationExhausted,
    EmbedderUnreachable,
    GenerationBudgetExceeded,
    MalformedJudgeResponse,
    // data family
    EmptyPopulation,
    UnknownDimension,
    PartialTree,
    AllPruned,
    FormatVersionMismatch,
    InvariantViolation,
    UnreadableSource,
    ColumnMapIncomplete,
    EmptyDatabase,
    InvalidSize,
    DimensionMismatch,
    NoEvaluableDimensions,
    PopulationTooSmall,
    InsufficientVolume,
    UnreadableCorpus,
    UnknownArtifactType,
    ConfigError,
};

const char* errc_name(Errc code);

// Exit code the CLI should use for this failure class (2 provider, 3 data).
int errc_exit_code(Errc code);

class HagError : public std::runtime_error {
public:
    HagError(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace hag
