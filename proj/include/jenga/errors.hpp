#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace jenga {

enum class ErrorCode {
    kEmptyMask,
    kDimensionMismatch,
    kSlotMismatch,
    kEmptySampleSet,
    kBackendUnavailable,
    kMalformedResponse,
    kPartialBatch,
    kInfeasibleSpec,
    kUnknownBlock,
    kNotAPermutation,
    kManifestError,
    kMethodFailure,
    kUsage,
    kIo,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define JENGA_DEFINE_ERROR(NAME, CODE)                     \
    class NAME : public Error {                            \
    public:                                                \
        explicit NAME(std::string message)                 \
            : Error(ErrorCode::CODE, std::move(message)) {} \
    }

JENGA_DEFINE_ERROR(EmptyMaskError, kEmptyMask);
JENGA_DEFINE_ERROR(DimensionMismatchError, kDimensionMismatch);
JENGA_DEFINE_ERROR(SlotMismatchError, kSlotMismatch);
JENGA_DEFINE_ERROR(EmptySampleSetError, kEmptySampleSet);
JENGA_DEFINE_ERROR(BackendUnavailableError, kBackendUnavailable);
JENGA_DEFINE_ERROR(MalformedResponseError, kMalformedResponse);
JENGA_DEFINE_ERROR(InfeasibleSpecError, kInfeasibleSpec);
JENGA_DEFINE_ERROR(UnknownBlockError, kUnknownBlock);
JENGA_DEFINE_ERROR(NotAPermutationError, kNotAPermutation);
JENGA_DEFINE_ERROR(ManifestError, kManifestError);
JENGA_DEFINE_ERROR(MethodFailureError, kMethodFailure);
JENGA_DEFINE_ERROR(UsageError, kUsage);
JENGA_DEFINE_ERROR(IoError, kIo);

#undef JENGA_DEFINE_ERROR

}  // namespace jenga
