#pragma once

#include <cstdio>
#include <string>

#include "tonscan/detectors/finding.hpp"

namespace tonscan::detectors::detail {

inline std::string loc(const frontend::Span& s) {
    return std::to_string(s.startLine) + ":" + std::to_string(s.startCol);
}

inline std::string hex32(std::int64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%08llx", static_cast<unsigned long long>(v) & 0xFFFFFFFFull);
    return buf;
}

inline Finding make(DetectorId id, const std::string& function, const frontend::Span& span, std::string message,
                    std::string evidence) {
    Finding f;
    f.detector = id;
    f.severity = severityOf(id);
    f.function = function;
    f.span = span;
    f.message = std::move(message);
    f.evidence = std::move(evidence);
    return f;
}

}  // namespace tonscan::detectors::detail
