#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace toral {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define TORAL_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                               \
    public:                                                                   \
        using Error::Error;                                                   \
        const char* kind() const noexcept override { return #Name; }          \
    }

TORAL_DEFINE_ERROR(DomainError);
TORAL_DEFINE_ERROR(StructureError);
TORAL_DEFINE_ERROR(InputError);
TORAL_DEFINE_ERROR(PrecisionExhausted);
TORAL_DEFINE_ERROR(ReducibleError);
TORAL_DEFINE_ERROR(NotGaloisError);
TORAL_DEFINE_ERROR(NotUnitError);
TORAL_DEFINE_ERROR(RankError);
TORAL_DEFINE_ERROR(SearchEmpty);
TORAL_DEFINE_ERROR(IsotropicError);
TORAL_DEFINE_ERROR(DivisionByZero);
TORAL_DEFINE_ERROR(InternalError);

#undef TORAL_DEFINE_ERROR

/// Syntax error in a textual field or element description.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)),
          position_(position) {}
    const char* kind() const noexcept override { return "ParseError"; }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace toral
