#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "tonscan/frontend/source.hpp"

namespace tonscan::detectors {

enum class DetectorId : std::uint8_t { BR, PL, UR, GVR, IFM, UBM, ID, LEP };
inline constexpr std::size_t kDetectorCount = 8;
inline constexpr std::array<DetectorId, kDetectorCount> kAllDetectors = {
    DetectorId::BR, DetectorId::PL, DetectorId::UR, DetectorId::GVR,
    DetectorId::IFM, DetectorId::UBM, DetectorId::ID, DetectorId::LEP};

/// "BR", "PL", ...
const char* detectorCode(DetectorId id);
/// "br", "pl", ...; the CLI selection key.
const char* detectorKey(DetectorId id);
std::optional<DetectorId> parseDetectorKey(const std::string& key);

enum class Severity : std::uint8_t { High, Medium, Low };
const char* severityName(Severity s);
Severity severityOf(DetectorId id);

/// Bit i set = detector i enabled.
using DetectorSet = std::uint8_t;
inline constexpr DetectorSet bitOf(DetectorId id) { return static_cast<DetectorSet>(1u << static_cast<unsigned>(id)); }
inline constexpr DetectorSet kAllDetectorsSet = 0xFF;
inline constexpr bool enabled(DetectorSet set, DetectorId id) { return (set & bitOf(id)) != 0; }

struct Finding {
    DetectorId detector = DetectorId::BR;
    Severity severity = Severity::High;
    std::string message;
    std::string function;
    frontend::Span span;
    std::string evidence;
    std::string sourceLine;  // text of span.startLine, for rendering

    friend bool operator==(const Finding&, const Finding&) = default;
};

/// Order by (file, line, column, detector), then message.
bool findingLess(const Finding& a, const Finding& b);

}  // namespace tonscan::detectors
