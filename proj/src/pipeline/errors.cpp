#include "marf/pipeline/errors.hpp"

namespace marf::pipeline {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::Internal: return "Internal";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MalformedWav: return "MalformedWav";
    case ErrorCode::DegenerateSignal: return "DegenerateSignal";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::IncompatibleFeatures: return "IncompatibleFeatures";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::ServiceDown: return "ServiceDown";
    case ErrorCode::StageUnavailable: return "StageUnavailable";
    }
    return "Internal";
}

void raise(ErrorCode code, const std::string& what, std::uint32_t service_index)
{
    switch (code) {
    case ErrorCode::UnsupportedFormat: throw UnsupportedFormat(what);
    case ErrorCode::MalformedWav: throw MalformedWav(what);
    case ErrorCode::DegenerateSignal: throw DegenerateSignal(what);
    case ErrorCode::InvalidParams: throw InvalidParams(what);
    case ErrorCode::IncompatibleFeatures: throw IncompatibleFeatures(what);
    case ErrorCode::EmptyTrainingSet: throw EmptyTrainingSet(what);
    case ErrorCode::ServiceDown: throw ServiceDown(service_index, what);
    case ErrorCode::StageUnavailable: throw StageUnavailable(what);
    case ErrorCode::Internal: break;
    }
    throw PipelineError(ErrorCode::Internal, what);
}

}  // namespace marf::pipeline
