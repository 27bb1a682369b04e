#pragma once

#include <stdexcept>
#include <string>

namespace entbat {

/// Base of every failure raised by the library. `kind()` is the stable,
/// machine-readable tag the CLI prints as `error: <kind>: <detail>`.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& detail)
        : std::runtime_error(detail), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ENTBAT_DEFINE_ERROR(Name, tag)                                            \
    class Name : public Error {                                                   \
    public:                                                                       \
        explicit Name(const std::string& detail) : Error(tag, detail) {}          \
    };

ENTBAT_DEFINE_ERROR(CapacityError, "capacity")
ENTBAT_DEFINE_ERROR(ShapeError, "shape")
ENTBAT_DEFINE_ERROR(DomainError, "domain")
ENTBAT_DEFINE_ERROR(ParseError, "parse")
ENTBAT_DEFINE_ERROR(ValidationError, "validation")
ENTBAT_DEFINE_ERROR(ApplicabilityError, "applicability")
ENTBAT_DEFINE_ERROR(InfeasibleError, "infeasible")
ENTBAT_DEFINE_ERROR(UnboundedRate, "unbounded-rate")
ENTBAT_DEFINE_ERROR(SearchExhausted, "search-exhausted")

#undef ENTBAT_DEFINE_ERROR

} // namespace entbat
