#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace fdwifi {

using Nanos = std::int64_t;

constexpr Nanos kNanosPerMicro = 1000;
constexpr Nanos kNanosPerSecond = 1'000'000'000;

constexpr Nanos micros(std::int64_t us) { return us * kNanosPerMicro; }
constexpr Nanos seconds(double s) { return static_cast<Nanos>(s * 1e9 + 0.5); }

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSpeedOfLight = 299'792'458.0;

inline double db_to_linear(double db) {
  if (db == -kInf) return 0.0;
  return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double lin) {
  if (lin <= 0.0) return -kInf;
  return 10.0 * std::log10(lin);
}

// dBm and dB share the same log mapping; the alias keeps call sites readable.
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

// Gaussian tail probability.
inline double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace fdwifi
