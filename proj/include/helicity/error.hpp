#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace helicity {

enum class ErrorKind {
    DegenerateGrid,
    DegenerateStencil,
    InvalidDomain,
    InvalidTube,
    GridMismatch,
    OpenCurve,
    IntersectingCurves,
    OverlappingDomains,
    SingularFlow,
    OutsideDomain,
    EmptySource,
    NotCurlFree,
    CurlMismatch,
    NonDomainPreservingFlow,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets callers (the CLI in
/// particular) distinguish configuration problems from numerical gate failures.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for failures of a numerical acceptance gate rather than bad input.
    bool is_numerical_gate() const noexcept {
        return kind_ == ErrorKind::NotCurlFree || kind_ == ErrorKind::CurlMismatch ||
               kind_ == ErrorKind::SingularFlow;
    }

private:
    ErrorKind kind_;
};

/// Non-fatal diagnostics (e.g. a source field that is not solenoidal to
/// stencil tolerance). Default sink writes to stderr; an empty sink silences.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace helicity
