#include "tonscan/detectors/finding.hpp"

#include <tuple>

namespace tonscan::detectors {

namespace {

constexpr std::array<const char*, kDetectorCount> kCodes = {"BR", "PL", "UR", "GVR", "IFM", "UBM", "ID", "LEP"};
constexpr std::array<const char*, kDetectorCount> kKeys = {"br", "pl", "ur", "gvr", "ifm", "ubm", "id", "lep"};

}  // namespace

const char* detectorCode(DetectorId id) { return kCodes[static_cast<std::size_t>(id)]; }
const char* detectorKey(DetectorId id) { return kKeys[static_cast<std::size_t>(id)]; }

std::optional<DetectorId> parseDetectorKey(const std::string& key) {
    for (DetectorId id : kAllDetectors) {
        if (key == detectorKey(id)) return id;
    }
    return std::nullopt;
}

const char* severityName(Severity s) {
    switch (s) {
        case Severity::High:
            return "high";
        case Severity::Medium:
            return "medium";
        case Severity::Low:
            return "low";
    }
    return "low";
}

Severity severityOf(DetectorId id) {
    switch (id) {
        case DetectorId::BR:
        case DetectorId::UBM:
        case DetectorId::ID:
            return Severity::High;
        case DetectorId::PL:
        case DetectorId::IFM:
        case DetectorId::GVR:
            return Severity::Medium;
        case DetectorId::UR:
        case DetectorId::LEP:
            return Severity::Low;
    }
    return Severity::Low;
}

bool findingLess(const Finding& a, const Finding& b) {
    return std::forward_as_tuple(a.span.file, a.span.startLine, a.span.startCol, a.detector, a.message,
                                 a.span.endLine, a.span.endCol) <
           std::forward_as_tuple(b.span.file, b.span.startLine, b.span.startCol, b.detector, b.message,
                                 b.span.endLine, b.span.endCol);
}

}  // namespace tonscan::detectors
