#include "fsotrade/weather_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "fsotrade/errors.hpp"
#include "fsotrade/fso_channel.hpp"
#include "fsotrade/rng.hpp"

namespace fsotrade::weather {

namespace {

using namespace std::chrono;

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
        throw std::invalid_argument("bad timestamp '" + std::string(text) + "'");
    }
    return value;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    // 0123456789012345678901
    // YYYY-MM-DDTHH:MM:SSZ
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != 'Z') {
        throw std::invalid_argument("bad timestamp '" + std::string(text) +
                                    "' (expected YYYY-MM-DDTHH:MM:SSZ)");
    }
    const year_month_day date{year{parse_fixed(text, 0, 4)},
                              month{static_cast<unsigned>(parse_fixed(text, 5, 2))},
                              day{static_cast<unsigned>(parse_fixed(text, 8, 2))}};
    const int hh = parse_fixed(text, 11, 2);
    const int mm = parse_fixed(text, 14, 2);
    const int ss = parse_fixed(text, 17, 2);
    if (!date.ok() || hh > 23 || mm > 59 || ss > 59) {
        throw std::invalid_argument("bad timestamp '" + std::string(text) + "' (out of range)");
    }
    return sys_days{date} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp ts) {
    const auto day_start = floor<days>(ts);
    const year_month_day date{day_start};
    const hh_mm_ss<seconds> tod{ts - day_start};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

std::vector<VisibilityRecord> parse_series(std::istream& in) {
    std::vector<VisibilityRecord> series;
    std::string line;
    std::size_t line_no = 0;
    bool blank_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            throw ParseError("line " + std::to_string(line_no) + ": CRLF line ending (LF required)", line_no);
        }
        if (line_no == 1) {
            if (line != kCsvHeader) {
                throw ParseError("line 1: expected header '" + std::string(kCsvHeader) + "'", 1);
            }
            continue;
        }
        if (line.empty()) {
            blank_seen = true;
            continue;
        }
        if (blank_seen) {
            throw ParseError("line " + std::to_string(line_no - 1) + ": blank line inside data", line_no - 1);
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 2 comma-separated fields", line_no);
        }
        const std::string_view ts_text(line.data(), comma);
        const std::string_view vis_text(line.data() + comma + 1, line.size() - comma - 1);

        VisibilityRecord rec{};
        try {
            rec.timestamp = parse_timestamp(ts_text);
        } catch (const std::invalid_argument& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
        const char* end = vis_text.data() + vis_text.size();
        const auto [ptr, ec] = std::from_chars(vis_text.data(), end, rec.visibility_km);
        if (vis_text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(rec.visibility_km)) {
            throw ParseError("line " + std::to_string(line_no) + ": bad visibility '" +
                                 std::string(vis_text) + "'",
                             line_no);
        }
        if (!(rec.visibility_km > 0.0)) {
            throw ValidationError("line " + std::to_string(line_no) + ": visibility must be > 0 km");
        }
        if (!series.empty()) {
            const auto step = rec.timestamp - series.back().timestamp;
            if (step <= seconds{0}) {
                throw ValidationError("line " + std::to_string(line_no) + ": timestamps not strictly increasing");
            }
            if (step != hours{1}) {
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": gap in hourly series (missing hours are not interpolated)");
            }
        }
        series.push_back(rec);
    }
    if (line_no == 0) throw ParseError("empty file (missing header)", 0);
    return series;
}

std::vector<VisibilityRecord> load_series(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open visibility file " + path.string());
    return parse_series(in);
}

void serialize_series(std::ostream& out, const std::vector<VisibilityRecord>& series) {
    out << kCsvHeader << '\n';
    for (const auto& rec : series) {
        out << format_timestamp(rec.timestamp) << ',' << format_double(rec.visibility_km) << '\n';
    }
}

void save_series(const std::filesystem::path& path, const std::vector<VisibilityRecord>& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write visibility file " + path.string());
    serialize_series(out, series);
}

std::vector<AttenuationRecord> to_attenuation(const std::vector<VisibilityRecord>& series,
                                              double wavelength_m) {
    std::vector<AttenuationRecord> out;
    out.reserve(series.size());
    for (const auto& rec : series) {
        out.push_back({rec.timestamp, fso::attenuation_coefficient(rec.visibility_km, wavelength_m)});
    }
    return out;
}

FogStatistics fog_statistics(const std::vector<VisibilityRecord>& series, double threshold_km) {
    FogStatistics stats;
    stats.fog_hours = static_cast<std::size_t>(std::count_if(
        series.begin(), series.end(), [&](const auto& r) { return r.visibility_km < threshold_km; }));
    if (!series.empty()) {
        stats.fog_fraction = static_cast<double>(stats.fog_hours) / static_cast<double>(series.size());
    }
    return stats;
}

std::vector<VisibilityRecord> synthetic_fixture(const FixtureSpec& spec) {
    if (spec.fog_hours > spec.hours) throw std::domain_error("more fog hours than hours");
    Rng rng = derive_stream(spec.seed, {0xf09});
    const auto millis = [](double km) { return std::round(km * 1000.0) / 1000.0; };

    std::vector<std::size_t> all(spec.hours);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> fog;
    std::sample(all.begin(), all.end(), std::back_inserter(fog), spec.fog_hours, rng);

    std::uniform_real_distribution<double> log_clear(std::log(2.0), std::log(60.0));
    std::uniform_real_distribution<double> dense_fog(0.2, 0.7);
    std::vector<VisibilityRecord> series;
    series.reserve(spec.hours);
    std::size_t next_fog = 0;
    for (std::size_t h = 0; h < spec.hours; ++h) {
        double v;
        if (next_fog < fog.size() && fog[next_fog] == h) {
            v = millis(dense_fog(rng));
            ++next_fog;
        } else {
            v = millis(std::exp(log_clear(rng)));
        }
        series.push_back({spec.start + hours{static_cast<long>(h)}, v});
    }
    return series;
}

}  // namespace fsotrade::weather
