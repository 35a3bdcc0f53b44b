#include "hcalg/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "hcalg/error.hpp"

namespace hcalg {

namespace {

using nlohmann::json;

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json alpha_json(const AlphaResult& a) {
  return json{{"alpha", a.alpha},   {"is_beta", a.is_beta},     {"exact_zero", a.exact_zero},
              {"norm", num(a.norm)}, {"tail", num(a.tail)},       {"radius", num(a.radius)},
              {"in_ball", a.in_ball}};
}

json density_json(const DensityResult& d) {
  return json{{"target", d.target},
              {"hits", d.hits.size()},
              {"scanned", d.scanned},
              {"horizon", d.horizon},
              {"stride", d.stride},
              {"lower_density", {num(d.lower_min), num(d.lower_max)}},
              {"upper_density", {num(d.upper_min), num(d.upper_max)}}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("write to " + path + " failed");
}

}  // namespace

std::string report_json(const WitnessReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = r.kind;
  j["seed"] = r.seed;
  j["status"] = r.status;
  json nums = json::object();
  for (const auto& [k, v] : r.numbers) nums[k] = num(v);
  j["numbers"] = nums;
  j["strings"] = json(r.strings);
  j["alphas"] = json::array();
  for (const auto& a : r.alphas) j["alphas"].push_back(alpha_json(a));
  j["densities"] = json::array();
  for (const auto& d : r.densities) j["densities"].push_back(density_json(d));
  return j.dump(2) + "\n";
}

std::string hit_csv(const WitnessReport& r) {
  std::ostringstream os;
  os << "p";
  for (const auto& d : r.densities) os << ',' << d.target;
  os << '\n';
  for (const auto& row : r.hit_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

void emit_report(const WitnessReport& report, const std::string& path, const std::string& csv_path) {
  write_text(path, report_json(report));
  if (!csv_path.empty()) write_text(csv_path, hit_csv(report));
}

}  // namespace hcalg
