#pragma once

#include <stdexcept>
#include <string>

namespace kmd {

enum class Errc {
    NonSymmetric,
    BadDiagonal,
    PositiveOffDiagonal,
    UnknownLevi,
    SearchBoundExceeded,
    NotDominant,
    DomainError,
    NotDivisible,
    Inconsistent,
    DatumMismatch,
    IncompleteSlice,
    EngineDisagreement,
    FiniteTypeOnly,
    DepthTooSmall,
    RankUnsupported,
    WeightOutOfRange,
    SingularSystem,
    NotUnitriangular,
    LatticeViolation,
    Internal,
    Usage,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonSymmetric: return "NonSymmetric";
        case Errc::BadDiagonal: return "BadDiagonal";
        case Errc::PositiveOffDiagonal: return "PositiveOffDiagonal";
        case Errc::UnknownLevi: return "UnknownLevi";
        case Errc::SearchBoundExceeded: return "SearchBoundExceeded";
        case Errc::NotDominant: return "NotDominant";
        case Errc::DomainError: return "DomainError";
        case Errc::NotDivisible: return "NotDivisible";
        case Errc::Inconsistent: return "Inconsistent";
        case Errc::DatumMismatch: return "DatumMismatch";
        case Errc::IncompleteSlice: return "IncompleteSlice";
        case Errc::EngineDisagreement: return "EngineDisagreement";
        case Errc::FiniteTypeOnly: return "FiniteTypeOnly";
        case Errc::DepthTooSmall: return "DepthTooSmall";
        case Errc::RankUnsupported: return "RankUnsupported";
        case Errc::WeightOutOfRange: return "WeightOutOfRange";
        case Errc::SingularSystem: return "SingularSystem";
        case Errc::NotUnitriangular: return "NotUnitriangular";
        case Errc::LatticeViolation: return "LatticeViolation";
        case Errc::Internal: return "Internal";
        case Errc::Usage: return "Usage";
    }
    return "Unknown";
}

}  // namespace kmd
