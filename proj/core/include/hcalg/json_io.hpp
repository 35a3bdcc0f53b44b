#pragma once

#include <string>

#include "hcalg/verify.hpp"

namespace hcalg {

inline constexpr int kSchemaVersion = 1;

// Deterministic JSON: sorted keys, fixed number formatting, non-finite
// numbers written as the strings "inf", "-inf" or "nan".
std::string report_json(const WitnessReport& report);

// Writes the JSON report to path ("-" for stdout) and, when csv_path is not
// empty, the (p, hit...) rows.
void emit_report(const WitnessReport& report, const std::string& path, const std::string& csv_path = "");

std::string hit_csv(const WitnessReport& report);

}  // namespace hcalg
