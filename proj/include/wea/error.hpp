#pragma once

#include <stdexcept>
#include <string>

namespace wea {

/// Base class of every error thrown by the library. `kind()` is a short
/// machine-readable tag ("domain", "parameter", ...).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define WEA_DEFINE_ERROR(Name, tag)                                        \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(tag, what) {}       \
    };

WEA_DEFINE_ERROR(DomainError, "domain")
WEA_DEFINE_ERROR(ParameterError, "parameter")
WEA_DEFINE_ERROR(ShapeError, "shape")
WEA_DEFINE_ERROR(ValidationError, "validation")
WEA_DEFINE_ERROR(RangeError, "range")
WEA_DEFINE_ERROR(UnsupportedError, "unsupported")
WEA_DEFINE_ERROR(PrecisionError, "precision")
WEA_DEFINE_ERROR(PreconditionError, "precondition")
WEA_DEFINE_ERROR(TypeError, "type")

#undef WEA_DEFINE_ERROR

} // namespace wea
