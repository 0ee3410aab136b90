#pragma once

#include <stdexcept>
#include <string>

namespace lps {

/// Base class of every error raised by the library. `kind()` is a stable
/// identifier that the CLI reports in structured error messages.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define LPS_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    }

LPS_DEFINE_ERROR(DegenerateSequence);
LPS_DEFINE_ERROR(ZeroArgument);
LPS_DEFINE_ERROR(InvalidArgument);
LPS_DEFINE_ERROR(NoApplicableCase);
LPS_DEFINE_ERROR(NonIntegralCoefficient);
LPS_DEFINE_ERROR(IrregularPrime);
LPS_DEFINE_ERROR(UselessPrime);
LPS_DEFINE_ERROR(ResidueExplosion);
LPS_DEFINE_ERROR(EmptyNorms);
LPS_DEFINE_ERROR(EmptyList);
LPS_DEFINE_ERROR(BoundTooLarge);
LPS_DEFINE_ERROR(CacheFormatError);

#undef LPS_DEFINE_ERROR

} // namespace lps
