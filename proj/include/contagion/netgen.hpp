#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "contagion/rng.hpp"

namespace contagion {

struct Edge {
  std::uint32_t src;  // lender
  std::uint32_t dst;  // borrower
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

/// Directed lending graph in compressed sparse row form: the out-edges of bank
/// i (its loans) are targets()[offsets[i] .. offsets[i + 1]).
class ExposureNetwork {
 public:
  ExposureNetwork() = default;

  /// Builds from an edge list. Rejects self-loops, duplicate edges and
  /// out-of-range endpoints.
  ExposureNetwork(std::size_t banks, std::vector<Edge> edges, std::string generator = "custom");

  std::size_t size() const { return banks_; }
  std::size_t edge_count() const { return targets_.size(); }
  const std::string& generator() const { return generator_; }

  std::size_t out_degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::span<const std::uint32_t> borrowers(std::size_t i) const {
    return {targets_.data() + offsets_[i], out_degree(i)};
  }
  std::span<const double> loan_weights(std::size_t i) const {
    return {weights_.data() + offsets_[i], out_degree(i)};
  }
  bool has_edge(std::size_t i, std::size_t j) const;

  std::vector<Edge> edges() const;
  std::vector<std::size_t> in_degrees() const;
  double total_weight() const;

  /// Sets every out-edge of bank i to theta * assets0[i] / out_degree(i).
  void assign_loans(double theta, std::span<const double> assets0);

  bool operator==(const ExposureNetwork&) const = default;

 private:
  std::size_t banks_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> targets_;
  std::vector<double> weights_;
  std::string generator_ = "custom";
};

namespace netgen {

/// Each ordered pair (i, j), i != j, is an edge independently with probability alpha.
ExposureNetwork erdos_renyi(std::size_t banks, double alpha, RngStream& rng);

/// Ring lattice with c nearest neighbours, each lattice edge rewired with
/// probability beta; every undirected edge becomes a mutual pair of loans.
ExposureNetwork watts_strogatz(std::size_t banks, std::size_t c, double beta, RngStream& rng);

/// Undirected Erdos-Renyi core of core_banks nodes, then periph_banks nodes
/// each attaching to m_links distinct existing nodes chosen proportionally to
/// degree. Edges are mutual pairs, so a periphery bank has m_links loans when
/// it joins and gains more as later banks attach to it.
ExposureNetwork core_periphery(std::size_t core_banks, double alpha_core, std::size_t periph_banks,
                               std::size_t m_links, RngStream& rng);

ExposureNetwork complete(std::size_t banks);

/// Copy of net with loans assigned (see ExposureNetwork::assign_loans).
ExposureNetwork assign_loans(ExposureNetwork net, double theta, std::span<const double> assets0);

/// Average local clustering coefficient of the undirected skeleton.
double clustering_coefficient(const ExposureNetwork& net);

enum class Kind { ErdosRenyi, WattsStrogatz, CorePeriphery, Complete };

/// Generator parameters. Presets mirror the experiments: "table2" uses a
/// core seed with alpha 0.1, "sec54" a denser core with alpha 0.75.
struct NetworkSpec {
  Kind kind = Kind::ErdosRenyi;
  std::size_t banks = 500;
  double alpha = 0.1;           // ER link probability, or core seed probability
  std::size_t neighbours = 4;   // Watts-Strogatz c
  double rewire = 0.1;          // Watts-Strogatz beta
  std::size_t core_banks = 50;
  std::size_t links_per_node = 15;

  /// Parses "er:ALPHA", "ws:C:BETA", "cp:table2", "cp:sec54",
  /// "cp:CORE:ALPHA:LINKS" or "complete". The bank count comes from `banks`.
  static NetworkSpec parse(const std::string& text, std::size_t banks);
  std::string describe() const;
};

ExposureNetwork generate(const NetworkSpec& spec, RngStream& rng);

}  // namespace netgen

namespace network_io {

/// `src,dst,weight` with a one-line header.
void write_edges_csv(const ExposureNetwork& net, std::ostream& out);
/// Sidecar `{"M": ..., "seed": ..., "generator": ...}`.
std::string sidecar_json(const ExposureNetwork& net, std::uint64_t seed);

/// Reads the edge list; the bank count comes from the sidecar. Throws
/// std::runtime_error with the offending line number on malformed input.
ExposureNetwork read_edges_csv(std::istream& in, std::size_t banks, const std::string& generator = "csv");
/// Returns (M, generator) parsed from a sidecar document.
std::pair<std::size_t, std::string> read_sidecar(std::istream& in);

}  // namespace network_io

}  // namespace contagion
