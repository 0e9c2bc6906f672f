#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>

namespace heckelab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Error codes shared by all modules.  Every failure mode named in a module
// contract maps to one of these.
enum class Errc {
    NonDivisible,
    DivByZero,
    UnknownRoot,
    NotInGroup,
    Budget,
    OnWall,
    DependentGradients,
    NotSpecial,
    InfiniteParabolic,
    NotExtendable,
    NotTranslation,
    BadParameters,
    MixedAlgebras,
    BadLabels,
    ParameterMismatch,
    NotRankOne,
    BadInput,
    PreconditionFailed,
    ParseError,
};

inline const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::NonDivisible: return "NonDivisible";
    case Errc::DivByZero: return "DivByZero";
    case Errc::UnknownRoot: return "UnknownRoot";
    case Errc::NotInGroup: return "NotInGroup";
    case Errc::Budget: return "Budget";
    case Errc::OnWall: return "OnWall";
    case Errc::DependentGradients: return "DependentGradients";
    case Errc::NotSpecial: return "NotSpecial";
    case Errc::InfiniteParabolic: return "InfiniteParabolic";
    case Errc::NotExtendable: return "NotExtendable";
    case Errc::NotTranslation: return "NotTranslation";
    case Errc::BadParameters: return "BadParameters";
    case Errc::MixedAlgebras: return "MixedAlgebras";
    case Errc::BadLabels: return "BadLabels";
    case Errc::ParameterMismatch: return "ParameterMismatch";
    case Errc::NotRankOne: return "NotRankOne";
    case Errc::BadInput: return "BadInput";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }
    Errc code() const { return code_; }

private:
    Errc code_;
};

inline std::string rat_to_string(const Rat& r)
{
    std::ostringstream os;
    os << r;
    return os.str();
}

inline long to_long(const Int& v) { return v.convert_to<long>(); }

// Accepts "p", "-p", "p/q" with arbitrary-precision integers.
inline Rat rat_from_string(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0)
            throw Error(Errc::DivByZero, "zero denominator in '" + s + "'");
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw Error(Errc::ParseError, "bad rational '" + s + "'");
    }
}

} // namespace heckelab
