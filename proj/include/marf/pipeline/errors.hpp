#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace marf::pipeline {

/// Stable codes; they travel on the stage wire protocol.
enum class ErrorCode : std::uint8_t {
    Internal = 0,
    UnsupportedFormat = 1,
    MalformedWav = 2,
    DegenerateSignal = 3,
    InvalidParams = 4,
    IncompatibleFeatures = 5,
    EmptyTrainingSet = 6,
    ServiceDown = 7,
    StageUnavailable = 8,
};

std::string_view to_string(ErrorCode code);

class PipelineError : public std::runtime_error {
public:
    PipelineError(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

#define MARF_PIPELINE_ERROR(Name)                                                   \
    class Name : public PipelineError {                                             \
    public:                                                                         \
        explicit Name(const std::string& what) : PipelineError(ErrorCode::Name, what) {} \
    };

MARF_PIPELINE_ERROR(UnsupportedFormat)
MARF_PIPELINE_ERROR(MalformedWav)
MARF_PIPELINE_ERROR(DegenerateSignal)
MARF_PIPELINE_ERROR(InvalidParams)
MARF_PIPELINE_ERROR(IncompatibleFeatures)
MARF_PIPELINE_ERROR(EmptyTrainingSet)
MARF_PIPELINE_ERROR(StageUnavailable)

#undef MARF_PIPELINE_ERROR

class ServiceDown : public PipelineError {
public:
    ServiceDown(std::uint32_t service_index, const std::string& what)
        : PipelineError(ErrorCode::ServiceDown, what), index_(service_index)
    {
    }
    std::uint32_t service_index() const { return index_; }

private:
    std::uint32_t index_;
};

/// Rebuilds the typed exception for a code received over the wire.
[[noreturn]] void raise(ErrorCode code, const std::string& what, std::uint32_t service_index = 0);

}  // namespace marf::pipeline
