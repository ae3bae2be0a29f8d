#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "contagion/distributions.hpp"
#include "contagion/meanfield.hpp"
#include "contagion/netgen.hpp"
#include "contagion/rng.hpp"

namespace contagion::cascade {

enum class Recovery { Monotone, Reversible };

std::string to_string(Recovery r);
Recovery parse_recovery(const std::string& text);

/// Per-bank balance sheets. Liabilities are constant during a cascade; state 1
/// means operating, 0 distressed.
struct BankPopulation {
  std::vector<double> assets0;
  std::vector<double> liabilities;
  std::vector<std::uint8_t> state;

  std::size_t size() const { return assets0.size(); }
};

/// Independent draws A_i = mu_A + sigma_A eps, L_i = mu_L + sigma_L eps' from
/// separate streams. Negative draws are kept.
BankPopulation initialize_banks(std::size_t banks, double mu_A, double sigma_A, double mu_L, double sigma_L,
                                const LocationScaleDistribution& dist, RngStream& asset_rng,
                                RngStream& liability_rng);

struct CascadeConfig {
  double theta = 0.3;
  double q = 0.0;
  Recovery recovery = Recovery::Monotone;
  std::size_t max_rounds = 100000;

  void validate() const;
};

struct CascadeResult {
  double p_final = 1.0;
  std::size_t rounds = 0;
  std::vector<std::size_t> survivors_per_round;
  std::vector<std::uint8_t> final_state;
  bool hit_round_limit = false;
};

/// Synchronous default propagation. Each round, bank i holds
///   A_i(r) = A_i(0) - (1 - q) * sum over distressed borrowers j of w(i->j)
/// and is distressed when A_i(r) < L_i. The loan weights are taken from `net`
/// as assigned (theta enters through them); config.theta is not reapplied.
/// Monotone mode only ever distresses banks; Reversible mode re-evaluates
/// every bank each round. A run that reaches max_rounds without a fixed
/// state returns its partial result with hit_round_limit set.
CascadeResult run_cascade(const BankPopulation& banks, const ExposureNetwork& net, const CascadeConfig& config);

struct BankParams {
  std::size_t banks = 500;
  double mu_A = 1000.0;
  double sigma_A = 30.0;
  double mu_L = 890.0;
  double sigma_L = 50.0;
  LocationScaleDistribution dist = LocationScaleDistribution::normal();
};

inline constexpr std::size_t kHistogramBins = 100;

struct EnsembleStats {
  double mean_p = 0.0;
  double std_p = 0.0;
  std::vector<std::size_t> histogram;  // kHistogramBins equal bins on [0, 1]
  std::vector<double> p;
  std::vector<std::size_t> rounds;
  std::size_t round_limit_hits = 0;
};

/// Substream ids for trial t: network 3t, assets 3t + 1, liabilities 3t + 2.
inline std::uint64_t network_stream(std::size_t trial) { return 3 * static_cast<std::uint64_t>(trial); }
inline std::uint64_t asset_stream(std::size_t trial) { return 3 * static_cast<std::uint64_t>(trial) + 1; }
inline std::uint64_t liability_stream(std::size_t trial) { return 3 * static_cast<std::uint64_t>(trial) + 2; }

/// One trial of the ensemble: fresh network and balance sheets from the
/// trial's substreams.
CascadeResult run_trial(const netgen::NetworkSpec& net_spec, const BankParams& bank_params,
                        const CascadeConfig& config, std::uint64_t seed, std::size_t trial);

EnsembleStats monte_carlo(const netgen::NetworkSpec& net_spec, const BankParams& bank_params,
                          const CascadeConfig& config, std::size_t trials, std::uint64_t seed);

EnsembleStats summarize_trials(std::vector<double> p, std::vector<std::size_t> rounds,
                               std::size_t round_limit_hits);

/// Mean-field parameters matching a simulated system: sigma = sqrt(sA^2 + sL^2),
/// b = theta mu_A / sigma and a - b = (mu_L - mu_A) / sigma.
meanfield::MeanFieldParams bridge_params(const BankParams& bank_params, double theta);

/// |mean_p - fixed point reached from p0|.
double compare_meanfield(const EnsembleStats& stats, const meanfield::MeanFieldParams& params, double p0);

/// Euclidean norm of the differences along a sweep.
double compare_meanfield(const std::vector<EnsembleStats>& stats,
                         const std::vector<meanfield::MeanFieldParams>& params, double p0);

}  // namespace contagion::cascade
