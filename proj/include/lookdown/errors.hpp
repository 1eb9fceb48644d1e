#pragma once

#include <stdexcept>
#include <string>

namespace lookdown {

enum class errc {
    size_mismatch,
    empty_generation,
    budget_exceeded,
    empty_input,
    dimension_mismatch,
    out_of_range,
    too_small,
    insufficient_samples,
    insufficient_reps,
    unmatched_support,
    degenerate_mean,
    parse_error,
    validation_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::size_mismatch: return "SizeMismatch";
        case errc::empty_generation: return "EmptyGeneration";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::empty_input: return "EmptyInput";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::out_of_range: return "OutOfRange";
        case errc::too_small: return "TooSmall";
        case errc::insufficient_samples: return "InsufficientSamples";
        case errc::insufficient_reps: return "InsufficientReps";
        case errc::unmatched_support: return "UnmatchedSupport";
        case errc::degenerate_mean: return "DegenerateMean";
        case errc::parse_error: return "ParseError";
        case errc::validation_error: return "ValidationError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

}  // namespace lookdown
