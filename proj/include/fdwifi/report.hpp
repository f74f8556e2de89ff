#pragma once

#include <string>
#include <vector>

#include "fdwifi/scenario.hpp"

namespace fdwifi {

enum class Format { Csv, Text };

// Fixed-point decimal with '.' regardless of locale.
std::string fixed(double v, int decimals);

extern const char* const kRunCsvHeader;

std::string csv_row(const RunResult& r);

// One CSV row per run, or a readable block per run with the config echo.
std::string emit_report(const std::vector<RunResult>& runs, Format format);
inline std::string emit_report(const RunResult& run, Format format) {
  return emit_report(std::vector<RunResult>{run}, format);
}

}  // namespace fdwifi
