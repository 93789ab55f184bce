#pragma once

#include <cmath>
#include <numbers>

namespace fsotrade::units {

/// dB/km per (1/km) for a natural-log attenuation coefficient.
inline constexpr double kDbPerNeper = 10.0 / std::numbers::ln10;

constexpr double kappa_to_db_per_km(double kappa_per_km) { return kappa_per_km * kDbPerNeper; }
constexpr double kappa_from_db_per_km(double db_per_km) { return db_per_km / kDbPerNeper; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// dBm/MHz -> W/MHz.
inline double dbm_to_watt(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watt_to_dbm(double w) { return linear_to_db(w / 1e-3); }

}  // namespace fsotrade::units
