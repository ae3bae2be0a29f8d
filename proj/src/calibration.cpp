#include "contagion/calibration.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "contagion/meanfield.hpp"
#include "contagion/numfmt.hpp"
#include "contagion/parallel.hpp"

namespace contagion::calibration {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_number(const std::string& text, const char* field, std::size_t lineno) {
  std::size_t used = 0;
  double v = std::numeric_limits<double>::quiet_NaN();
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw std::runtime_error("line " + std::to_string(lineno) + ": " + field + " is not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<BalanceSheetRecord> load_balance_sheets(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("balance sheet file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "bank_id,country,year,total_assets,tier1_capital") {
    throw std::runtime_error("line 1: expected header bank_id,country,year,total_assets,tier1_capital");
  }
  std::vector<BalanceSheetRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 5) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected 5 fields, got " +
                               std::to_string(f.size()));
    }
    BalanceSheetRecord r;
    r.bank_id = trim(f[0]);
    r.country = trim(f[1]);
    const double year = parse_number(trim(f[2]), "year", lineno);
    if (year != std::floor(year)) throw std::runtime_error("line " + std::to_string(lineno) + ": year is not an integer");
    r.year = static_cast<int>(year);
    r.total_assets = parse_number(trim(f[3]), "total_assets", lineno);
    if (!(r.total_assets > 0.0)) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": total_assets must be > 0");
    }
    const std::string tier1 = trim(f[4]);
    r.tier1_capital = tier1.empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : parse_number(tier1, "tier1_capital", lineno);
    r.excluded = !(r.tier1_capital > 0.0);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BalanceSheetRecord> load_balance_sheets_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_balance_sheets(in);
}

CalibrationSummary summarize(const std::vector<BalanceSheetRecord>& records, const std::string& country, int year) {
  std::vector<const BalanceSheetRecord*> sel;
  for (const auto& r : records) {
    if (!r.excluded && r.country == country && r.year == year) sel.push_back(&r);
  }
  if (sel.empty()) {
    throw std::runtime_error("no included records for " + country + " " + std::to_string(year));
  }
  CalibrationSummary s;
  s.country = country;
  s.year = year;
  s.n_banks = sel.size();
  const double n = static_cast<double>(sel.size());
  for (const auto* r : sel) {
    s.mu_A += r->total_assets;
    s.mu_E += r->tier1_capital;
  }
  s.mu_A /= n;
  s.mu_E /= n;
  if (sel.size() > 1) {
    double va = 0.0;
    double ve = 0.0;
    for (const auto* r : sel) {
      va += (r->total_assets - s.mu_A) * (r->total_assets - s.mu_A);
      ve += (r->tier1_capital - s.mu_E) * (r->tier1_capital - s.mu_E);
    }
    s.std_A = std::sqrt(va / (n - 1.0));
    s.std_E = std::sqrt(ve / (n - 1.0));
  } else {
    s.std_undefined = true;
  }
  s.leverage = s.mu_E / s.mu_A;
  return s;
}

std::string to_json(const CalibrationSummary& s) {
  nlohmann::json j = {{"country", s.country}, {"year", s.year},     {"mu_A", s.mu_A},
                      {"std_A", s.std_A},     {"mu_E", s.mu_E},     {"std_E", s.std_E},
                      {"leverage", s.leverage}, {"n_banks", s.n_banks}, {"std_undefined", s.std_undefined}};
  return j.dump(2);
}

ScanPoint scan_point(const CalibrationSummary& s, double theta, double f, const LocationScaleDistribution& dist,
                     double p0) {
  if (!(f > 0.0) || f > 1.0) throw std::invalid_argument("f must lie in (0, 1]");
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
  const double sigma = f * s.mu_E;
  const double b = theta * s.mu_A / sigma;
  const double a = (theta * s.mu_A - s.mu_E) / sigma;
  const double p = meanfield::solve_fixed_point({a, b, dist}, p0).p;
  return {theta, f, a, b, p};
}

std::vector<ScanPoint> stability_scan(const CalibrationSummary& s, const std::vector<double>& theta_grid,
                                      const std::vector<double>& f_grid, const LocationScaleDistribution& dist,
                                      double p0) {
  std::vector<ScanPoint> out(theta_grid.size() * f_grid.size());
  const std::size_t nf = f_grid.size();
  parallel_for(out.size(), [&](std::size_t k) { out[k] = scan_point(s, theta_grid[k / nf], f_grid[k % nf], dist, p0); });
  return out;
}

std::vector<ScanPoint> trajectory_overlay(const CalibrationSummary& s, double theta, const std::vector<double>& f_list,
                                          const LocationScaleDistribution& dist, double p0) {
  return stability_scan(s, {theta}, f_list, dist, p0);
}

void write_scan_csv(const std::vector<ScanPoint>& points, std::ostream& out) {
  std::string text = "theta,f,a,b,p\n";
  for (const auto& pt : points) {
    text += format_double(pt.theta) + ',' + format_double(pt.f) + ',' + format_double(pt.a) + ',' +
            format_double(pt.b) + ',' + format_double(pt.p) + '\n';
  }
  out << text;
}

}  // namespace contagion::calibration
