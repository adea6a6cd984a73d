#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modval {

namespace detail {
// Short %g rendering of a number for error messages.
inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}
}  // namespace detail

// Base of everything the library throws. `kind()` is the stable error name
// that the CLI prints verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string_view kind, const std::string& what)
        : std::runtime_error(std::string(kind) + ": " + what), kind_(kind) {}

    std::string_view kind() const noexcept { return kind_; }

private:
    std::string_view kind_;
};

// Malformed input: wrong dimensions, non-normalized states, non-projectors,
// bad grids. The CLI maps these to exit code 2.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("InvalidArgument", what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error("DimensionMismatch", what) {}
};

class GridMismatch : public Error {
public:
    explicit GridMismatch(const std::string& what) : Error("GridMismatch", what) {}
};

// Physically meaningful failures of a well-formed request. Exit code 3.
class DomainError : public Error {
public:
    using Error::Error;
};

#define MODVAL_DOMAIN_ERROR(Name)                                          \
    class Name : public DomainError {                                      \
    public:                                                                \
        explicit Name(const std::string& what) : DomainError(#Name, what) {} \
    }

MODVAL_DOMAIN_ERROR(OverlapTooSmall);
MODVAL_DOMAIN_ERROR(GridTooNarrow);
MODVAL_DOMAIN_ERROR(WraparoundRisk);
MODVAL_DOMAIN_ERROR(DegenerateNorm);
MODVAL_DOMAIN_ERROR(ResourceLimit);
MODVAL_DOMAIN_ERROR(InterferenceTooLarge);
MODVAL_DOMAIN_ERROR(PeakNotFound);
MODVAL_DOMAIN_ERROR(PostSelectionDark);

#undef MODVAL_DOMAIN_ERROR

}  // namespace modval
