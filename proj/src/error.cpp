#include "helicity/error.hpp"

#include <iostream>
#include <mutex>

namespace helicity {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DegenerateGrid: return "degenerate-grid";
        case ErrorKind::DegenerateStencil: return "degenerate-stencil";
        case ErrorKind::InvalidDomain: return "invalid-domain";
        case ErrorKind::InvalidTube: return "invalid-tube";
        case ErrorKind::GridMismatch: return "grid-mismatch";
        case ErrorKind::OpenCurve: return "open-curve";
        case ErrorKind::IntersectingCurves: return "intersecting-curves";
        case ErrorKind::OverlappingDomains: return "overlapping-domains";
        case ErrorKind::SingularFlow: return "singular-flow";
        case ErrorKind::OutsideDomain: return "outside-domain";
        case ErrorKind::EmptySource: return "empty-source";
        case ErrorKind::NotCurlFree: return "not-curl-free";
        case ErrorKind::CurlMismatch: return "curl-mismatch";
        case ErrorKind::NonDomainPreservingFlow: return "non-domain-preserving-flow";
        case ErrorKind::InvalidArgument: return "invalid-argument";
    }
    return "unknown";
}

namespace {
std::mutex g_sink_mutex;
WarningSink g_sink = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
}  // namespace

void set_warning_sink(WarningSink sink) {
    std::lock_guard lock(g_sink_mutex);
    g_sink = std::move(sink);
}

void warn(const std::string& message) {
    std::lock_guard lock(g_sink_mutex);
    if (g_sink) g_sink(message);
}

}  // namespace helicity
