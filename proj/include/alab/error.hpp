#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alab {

enum class Errc {
    ZeroSum,
    NegativeEntry,
    InvalidProbVec,
    DimensionMismatch,
    InvalidTemperature,
    InvalidOmega,
    InvalidClassCount,
    EmptyBatch,
    AllZeroConfidence,
    InvalidQueueConfig,
    EmptyQueue,
    NonFiniteInput,
    ShapeMismatch,
    OutOfRange,
    EmptyLabeledSet,
    EmptyEvalSet,
    InvalidSpec,
    InfeasibleSplit,
    ParseError,
    RaggedRow,
    UnknownLabel,
    Undefined,
    MissingRecords,
    ConfigError,
    IoError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace alab
