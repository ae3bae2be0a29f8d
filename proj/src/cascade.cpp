#include "contagion/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "contagion/parallel.hpp"

namespace contagion::cascade {

std::string to_string(Recovery r) { return r == Recovery::Monotone ? "monotone" : "reversible"; }

Recovery parse_recovery(const std::string& text) {
  if (text == "monotone") return Recovery::Monotone;
  if (text == "reversible") return Recovery::Reversible;
  throw std::invalid_argument("recovery must be monotone or reversible, got '" + text + "'");
}

void CascadeConfig::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
  // Over-collateralisation (q > 1) is outside the modelled range.
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
}

BankPopulation initialize_banks(std::size_t banks, double mu_A, double sigma_A, double mu_L, double sigma_L,
                                const LocationScaleDistribution& dist, RngStream& asset_rng,
                                RngStream& liability_rng) {
  if (!(sigma_A > 0.0) || !(sigma_L > 0.0)) throw std::invalid_argument("initialize_banks: sigmas must be > 0");
  BankPopulation pop;
  pop.assets0.resize(banks);
  pop.liabilities.resize(banks);
  pop.state.assign(banks, 1);
  for (auto& a : pop.assets0) a = dist.sample(mu_A, sigma_A, asset_rng);
  for (auto& l : pop.liabilities) l = dist.sample(mu_L, sigma_L, liability_rng);
  return pop;
}

namespace {

// Lenders of each borrower, with the loan amount at risk.
struct LenderIndex {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> lenders;
  std::vector<double> exposure;
};

LenderIndex build_lender_index(const ExposureNetwork& net, double loss_fraction) {
  const std::size_t n = net.size();
  LenderIndex idx;
  idx.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : net.borrowers(i)) ++idx.offsets[j + 1];
  }
  for (std::size_t j = 0; j < n; ++j) idx.offsets[j + 1] += idx.offsets[j];
  idx.lenders.resize(net.edge_count());
  idx.exposure.resize(net.edge_count());
  std::vector<std::size_t> fill(idx.offsets.begin(), idx.offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = net.borrowers(i);
    const auto w = net.loan_weights(i);
    for (std::size_t k = 0; k < b.size(); ++k) {
      const std::size_t slot = fill[b[k]]++;
      idx.lenders[slot] = static_cast<std::uint32_t>(i);
      idx.exposure[slot] = loss_fraction * w[k];
    }
  }
  return idx;
}

std::size_t count_operating(const std::vector<std::uint8_t>& state) {
  return static_cast<std::size_t>(std::count(state.begin(), state.end(), std::uint8_t{1}));
}

CascadeResult run_monotone(const BankPopulation& banks, const LenderIndex& idx, std::size_t max_rounds) {
  const std::size_t n = banks.size();
  CascadeResult res;
  res.final_state = banks.state;
  std::vector<double> assets = banks.assets0;
  // Banks that start distressed already impose their losses.
  for (std::size_t j = 0; j < n; ++j) {
    if (res.final_state[j]) continue;
    for (std::size_t k = idx.offsets[j]; k < idx.offsets[j + 1]; ++k) assets[idx.lenders[k]] -= idx.exposure[k];
  }
  std::vector<std::uint32_t> frontier;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (res.final_state[i] && assets[i] < banks.liabilities[i]) frontier.push_back(i);
  }
  std::size_t operating = count_operating(res.final_state);
  std::vector<std::uint32_t> touched;
  std::vector<std::uint8_t> is_touched(n, 0);
  while (true) {
    if (res.rounds > 0 && frontier.empty()) break;
    if (res.rounds == max_rounds) {
      res.hit_round_limit = true;
      break;
    }
    ++res.rounds;
    // Every test in this round used the state at its start; now apply the losses.
    for (auto j : frontier) res.final_state[j] = 0;
    operating -= frontier.size();
    touched.clear();
    for (auto j : frontier) {
      for (std::size_t k = idx.offsets[j]; k < idx.offsets[j + 1]; ++k) {
        const auto i = idx.lenders[k];
        assets[i] -= idx.exposure[k];
        if (!is_touched[i]) {
          is_touched[i] = 1;
          touched.push_back(i);
        }
      }
    }
    res.survivors_per_round.push_back(operating);
    frontier.clear();
    std::sort(touched.begin(), touched.end());
    for (auto i : touched) {
      is_touched[i] = 0;
      if (res.final_state[i] && assets[i] < banks.liabilities[i]) frontier.push_back(i);
    }
  }
  res.p_final = n == 0 ? 1.0 : static_cast<double>(operating) / static_cast<double>(n);
  return res;
}

CascadeResult run_reversible(const BankPopulation& banks, const LenderIndex& idx, std::size_t max_rounds) {
  const std::size_t n = banks.size();
  CascadeResult res;
  std::vector<std::uint8_t> state = banks.state;
  std::vector<std::uint8_t> next(n);
  std::vector<double> loss(n);
  while (true) {
    std::fill(loss.begin(), loss.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (state[j]) continue;
      for (std::size_t k = idx.offsets[j]; k < idx.offsets[j + 1]; ++k) loss[idx.lenders[k]] += idx.exposure[k];
    }
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = banks.assets0[i] - loss[i] < banks.liabilities[i] ? 0 : 1;
    }
    const bool changed = next != state;
    if (res.rounds > 0 && !changed) break;
    if (res.rounds == max_rounds) {
      res.hit_round_limit = true;
      break;
    }
    ++res.rounds;
    state.swap(next);
    res.survivors_per_round.push_back(count_operating(state));
  }
  res.final_state = std::move(state);
  res.p_final = n == 0 ? 1.0 : static_cast<double>(res.survivors_per_round.back()) / static_cast<double>(n);
  return res;
}

}  // namespace

CascadeResult run_cascade(const BankPopulation& banks, const ExposureNetwork& net, const CascadeConfig& config) {
  config.validate();
  if (banks.size() != net.size()) throw std::invalid_argument("run_cascade: bank count does not match network");
  if (banks.liabilities.size() != banks.size() || banks.state.size() != banks.size()) {
    throw std::invalid_argument("run_cascade: inconsistent bank population");
  }
  const LenderIndex idx = build_lender_index(net, 1.0 - config.q);
  return config.recovery == Recovery::Monotone ? run_monotone(banks, idx, config.max_rounds)
                                               : run_reversible(banks, idx, config.max_rounds);
}

CascadeResult run_trial(const netgen::NetworkSpec& net_spec, const BankParams& bp, const CascadeConfig& config,
                        std::uint64_t seed, std::size_t trial) {
  RngStream net_rng(seed, network_stream(trial));
  RngStream asset_rng(seed, asset_stream(trial));
  RngStream liability_rng(seed, liability_stream(trial));
  ExposureNetwork net = netgen::generate(net_spec, net_rng);
  const BankPopulation banks =
      initialize_banks(bp.banks, bp.mu_A, bp.sigma_A, bp.mu_L, bp.sigma_L, bp.dist, asset_rng, liability_rng);
  net.assign_loans(config.theta, banks.assets0);
  return run_cascade(banks, net, config);
}

EnsembleStats summarize_trials(std::vector<double> p, std::vector<std::size_t> rounds, std::size_t round_limit_hits) {
  EnsembleStats s;
  s.histogram.assign(kHistogramBins, 0);
  const double n = static_cast<double>(p.size());
  double sum = 0.0;
  for (double x : p) {
    sum += x;
    const auto bin = std::min<std::size_t>(kHistogramBins - 1, static_cast<std::size_t>(x * kHistogramBins));
    ++s.histogram[bin];
  }
  s.mean_p = p.empty() ? 0.0 : sum / n;
  double ss = 0.0;
  for (double x : p) ss += (x - s.mean_p) * (x - s.mean_p);
  s.std_p = p.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.p = std::move(p);
  s.rounds = std::move(rounds);
  s.round_limit_hits = round_limit_hits;
  return s;
}

EnsembleStats monte_carlo(const netgen::NetworkSpec& net_spec, const BankParams& bank_params,
                          const CascadeConfig& config, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  config.validate();
  if (net_spec.banks != bank_params.banks) throw std::invalid_argument("monte_carlo: bank count mismatch");
  std::vector<double> p(trials);
  std::vector<std::size_t> rounds(trials);
  std::vector<std::uint8_t> limited(trials);
  parallel_for(trials, [&](std::size_t t) {
    const CascadeResult r = run_trial(net_spec, bank_params, config, seed, t);
    p[t] = r.p_final;
    rounds[t] = r.rounds;
    limited[t] = r.hit_round_limit ? 1 : 0;
  });
  const auto hits = static_cast<std::size_t>(std::count(limited.begin(), limited.end(), std::uint8_t{1}));
  return summarize_trials(std::move(p), std::move(rounds), hits);
}

meanfield::MeanFieldParams bridge_params(const BankParams& bp, double theta) {
  const double sigma = std::hypot(bp.sigma_A, bp.sigma_L);
  const double b = theta * bp.mu_A / sigma;
  return {(bp.mu_L - bp.mu_A) / sigma + b, b, bp.dist};
}

double compare_meanfield(const EnsembleStats& stats, const meanfield::MeanFieldParams& params, double p0) {
  return std::abs(stats.mean_p - meanfield::solve_fixed_point(params, p0).p);
}

double compare_meanfield(const std::vector<EnsembleStats>& stats,
                         const std::vector<meanfield::MeanFieldParams>& params, double p0) {
  if (stats.size() != params.size()) throw std::invalid_argument("compare_meanfield: size mismatch");
  double ss = 0.0;
  for (std::size_t k = 0; k < stats.size(); ++k) {
    const double d = compare_meanfield(stats[k], params[k], p0);
    ss += d * d;
  }
  return std::sqrt(ss);
}

}  // namespace contagion::cascade
