#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "contagion/distributions.hpp"

namespace contagion::calibration {

struct BalanceSheetRecord {
  std::string bank_id;
  std::string country;
  int year = 0;
  double total_assets = 0.0;
  double tier1_capital = 0.0;  // NaN when the field was empty
  bool excluded = false;       // tier 1 capital missing or not positive
};

/// Parses `bank_id,country,year,total_assets,tier1_capital`. Errors name the
/// offending line.
std::vector<BalanceSheetRecord> load_balance_sheets(std::istream& in);
std::vector<BalanceSheetRecord> load_balance_sheets_file(const std::string& path);

struct CalibrationSummary {
  std::string country;
  int year = 0;
  double mu_A = 0.0;
  double std_A = 0.0;
  double mu_E = 0.0;
  double std_E = 0.0;
  double leverage = 0.0;  // mu_E / mu_A
  std::size_t n_banks = 0;
  bool std_undefined = false;  // single record: stds reported as 0
};

/// Means and sample standard deviations over the included records matching
/// (country, year). Throws when nothing matches.
CalibrationSummary summarize(const std::vector<BalanceSheetRecord>& records, const std::string& country, int year);

std::string to_json(const CalibrationSummary& s);

struct ScanPoint {
  double theta;
  double f;
  double a;
  double b;
  double p;
};

/// Mean-field parameters for shock size sigma = f mu_E:
/// a = (theta mu_A - mu_E) / sigma, b = theta mu_A / sigma.
ScanPoint scan_point(const CalibrationSummary& s, double theta, double f,
                     const LocationScaleDistribution& dist, double p0);

/// Row-major over theta then f.
std::vector<ScanPoint> stability_scan(const CalibrationSummary& s, const std::vector<double>& theta_grid,
                                      const std::vector<double>& f_grid, const LocationScaleDistribution& dist,
                                      double p0);

/// (a, b, p) path across f at fixed theta, for overlay on a phase diagram.
std::vector<ScanPoint> trajectory_overlay(const CalibrationSummary& s, double theta, const std::vector<double>& f_list,
                                          const LocationScaleDistribution& dist =
                                              LocationScaleDistribution::normal(),
                                          double p0 = 1.0);

/// `theta,f,a,b,p`.
void write_scan_csv(const std::vector<ScanPoint>& points, std::ostream& out);

}  // namespace contagion::calibration
