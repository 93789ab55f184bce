#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fsotrade::weather {

using Timestamp = std::chrono::sys_seconds;

struct VisibilityRecord {
    Timestamp timestamp;
    double visibility_km;

    bool operator==(const VisibilityRecord&) const = default;
};

struct AttenuationRecord {
    Timestamp timestamp;
    double kappa_per_km;
};

struct FogStatistics {
    std::size_t fog_hours = 0;
    double fog_fraction = 0.0;
};

/// Header line of the visibility CSV format.
inline constexpr std::string_view kCsvHeader = "timestamp,visibility_km";

/// "YYYY-MM-DDTHH:MM:SSZ"; throws std::invalid_argument otherwise.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

/// Parses the visibility CSV. Rows must be hourly and gap-free. Throws
/// ParseError (with line number) for malformed rows and ValidationError for
/// non-positive visibility or broken chronology.
std::vector<VisibilityRecord> parse_series(std::istream& in);
std::vector<VisibilityRecord> load_series(const std::filesystem::path& path);

/// Writes the same format parse_series reads; values round-trip exactly.
void serialize_series(std::ostream& out, const std::vector<VisibilityRecord>& series);
void save_series(const std::filesystem::path& path, const std::vector<VisibilityRecord>& series);

std::vector<AttenuationRecord> to_attenuation(const std::vector<VisibilityRecord>& series,
                                              double wavelength_m);

/// Hours with visibility strictly below `threshold_km`.
FogStatistics fog_statistics(const std::vector<VisibilityRecord>& series, double threshold_km = 1.0);

struct FixtureSpec {
    std::size_t hours = 1000;
    std::size_t fog_hours = 6;
    std::uint64_t seed = 1;
    Timestamp start = parse_timestamp("2016-01-01T00:00:00Z");
};

/// Synthetic hourly series: clear hours have visibility in [2, 60] km, fog
/// hours lie in [0.2, 0.7] km, dense enough that the default optical link
/// falls below 80 Mbps.
std::vector<VisibilityRecord> synthetic_fixture(const FixtureSpec& spec);

}  // namespace fsotrade::weather
