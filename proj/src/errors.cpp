#include "hag/errors.h"

namespace hag {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::ProviderUnreachable: return "ProviderUnreachable";
        case Errc::MalformedResponse: return "MalformedResponse";
        case Errc::UnknownDimensionInResponse: return "UnknownDimensionInResponse";
        case Errc::EmptyDistribution: return "EmptyDistribution";
        case Errc::DisallowedValue: return "DisallowedValue";
        case Errc::ConstraintViolatedInResponse: return "ConstraintViolatedInResponse";
        case Errc::NoJsonFound: return "NoJsonFound";
        case Errc::SchemaMismatch: return "SchemaMismatch";
        case Errc::AugmentationExhausted: return "AugmentationExhausted";
        case Errc::EmbedderUnreachable: return "EmbedderUnreachable";
        case Errc::GenerationBudgetExceeded: return "GenerationBudgetExceeded";
        case Errc::MalformedJudgeResponse: return "MalformedJudgeResponse";
        case Errc::EmptyPopulation: return "EmptyPopulation";
        case Errc::UnknownDimension: return "UnknownDimension";
        case Errc::PartialTree: return "PartialTree";
        case Errc::AllPruned: return "AllPruned";
        case Errc::FormatVersionMismatch: return "FormatVersionMismatch";
        case Errc::InvariantViolation: return "InvariantViolation";
        case Errc::UnreadableSource: return "UnreadableSource";
        case Errc::ColumnMapIncomplete: return "ColumnMapIncomplete";
        case Errc::EmptyDatabase: return "EmptyDatabase";
        case Errc::InvalidSize: return "InvalidSize";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NoEvaluableDimensions: return "NoEvaluableDimensions";
        case Errc::PopulationTooSmall: return "PopulationTooSmall";
        case Errc::InsufficientVolume: return "InsufficientVolume";
        case Errc::UnreadableCorpus: return "UnreadableCorpus";
        case Errc::UnknownArtifactType: return "UnknownArtifactType";
        case Errc::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

int errc_exit_code(Errc code) {
    switch (code) {
        case Errc::ProviderUnreachable:
        case Errc::MalformedResponse:
        case Errc::UnknownDimensionInResponse:
        case Errc::EmptyDistribution:
        case Errc::DisallowedValue:
        case Errc::ConstraintViolatedInResponse:
        case Errc::NoJsonFound:
        case Errc::SchemaMismatch:
        case Errc::AugmentationExhausted:
        case Errc::EmbedderUnreachable:
        case Errc::GenerationBudgetExceeded:
        case Errc::MalformedJudgeResponse:
            return 2;
        default:
            return 3;
    }
}

}  // namespace hag
