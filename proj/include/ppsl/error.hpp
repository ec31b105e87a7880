#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppsl {

enum class Errc {
    DimensionMismatch,
    CycleDetected,
    WrongKind,
    PolicyMismatch,
    TooLarge,
    UnknownNode,
    SubsetMismatch,
    ConstantTrace,
    NotConverged,
    ParseError,
    ValidationError,
    InvalidArgument,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::WrongKind: return "WrongKind";
    case Errc::PolicyMismatch: return "PolicyMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::SubsetMismatch: return "SubsetMismatch";
    case Errc::ConstantTrace: return "ConstantTrace";
    case Errc::NotConverged: return "NotConverged";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure class;
/// `what()` carries the human-readable diagnostic.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised when a directed network contains a cycle. The witness lists the
/// nodes of one cycle in traversal order (first node not repeated).
class CycleError : public Error {
public:
    explicit CycleError(std::vector<std::size_t> witness)
        : Error(Errc::CycleDetected, describe(witness)), witness_(std::move(witness)) {}

    const std::vector<std::size_t>& witness() const noexcept { return witness_; }

private:
    static std::string describe(const std::vector<std::size_t>& w) {
        std::string s = "cycle";
        for (std::size_t v : w) s += " " + std::to_string(v) + " ->";
        if (!w.empty()) s += " " + std::to_string(w.front());
        return s;
    }

    std::vector<std::size_t> witness_;
};

}  // namespace ppsl
