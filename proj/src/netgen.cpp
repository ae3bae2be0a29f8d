#include "contagion/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace contagion {

ExposureNetwork::ExposureNetwork(std::size_t banks, std::vector<Edge> edges, std::string generator)
    : banks_(banks), generator_(std::move(generator)) {
  if (banks > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("too many banks");
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return x.src != y.src ? x.src < y.src : x.dst < y.dst;
  });
  offsets_.assign(banks + 1, 0);
  targets_.reserve(edges.size());
  weights_.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (e.src >= banks || e.dst >= banks) throw std::invalid_argument("edge endpoint out of range");
    if (e.src == e.dst) throw std::invalid_argument("self-loop " + std::to_string(e.src));
    if (k > 0 && edges[k - 1].src == e.src && edges[k - 1].dst == e.dst) {
      throw std::invalid_argument("duplicate edge " + std::to_string(e.src) + "->" + std::to_string(e.dst));
    }
    ++offsets_[e.src + 1];
    targets_.push_back(e.dst);
    weights_.push_back(e.weight);
  }
  for (std::size_t i = 0; i < banks; ++i) offsets_[i + 1] += offsets_[i];
}

bool ExposureNetwork::has_edge(std::size_t i, std::size_t j) const {
  const auto b = borrowers(i);
  return std::binary_search(b.begin(), b.end(), static_cast<std::uint32_t>(j));
}

std::vector<Edge> ExposureNetwork::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < banks_; ++i) {
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      out.push_back({static_cast<std::uint32_t>(i), targets_[k], weights_[k]});
    }
  }
  return out;
}

std::vector<std::size_t> ExposureNetwork::in_degrees() const {
  std::vector<std::size_t> deg(banks_, 0);
  for (auto t : targets_) ++deg[t];
  return deg;
}

double ExposureNetwork::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

void ExposureNetwork::assign_loans(double theta, std::span<const double> assets0) {
  if (assets0.size() != banks_) throw std::invalid_argument("assign_loans: assets size mismatch");
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("assign_loans: theta must lie in [0, 1]");
  for (std::size_t i = 0; i < banks_; ++i) {
    const std::size_t z = out_degree(i);
    if (z == 0) continue;
    const double w = theta * assets0[i] / static_cast<double>(z);
    std::fill(weights_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              weights_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]), w);
  }
}

namespace netgen {

namespace {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

bool adjacent(const Adjacency& adj, std::uint32_t u, std::uint32_t v) {
  return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end();
}

void link(Adjacency& adj, std::uint32_t u, std::uint32_t v) {
  adj[u].push_back(v);
  adj[v].push_back(u);
}

void unlink(Adjacency& adj, std::uint32_t u, std::uint32_t v) {
  std::erase(adj[u], v);
  std::erase(adj[v], u);
}

ExposureNetwork mutual(const Adjacency& adj, std::string generator) {
  std::vector<Edge> edges;
  for (std::uint32_t u = 0; u < adj.size(); ++u) {
    for (auto v : adj[u]) edges.push_back({u, v});
  }
  return ExposureNetwork(adj.size(), std::move(edges), std::move(generator));
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

ExposureNetwork erdos_renyi(std::size_t banks, double alpha, RngStream& rng) {
  if (banks < 1) throw std::invalid_argument("erdos_renyi: need at least one bank");
  check_probability(alpha, "alpha");
  std::vector<Edge> edges;
  const std::uint64_t row = banks - 1;
  const std::uint64_t pairs = static_cast<std::uint64_t>(banks) * row;
  if (alpha > 0.0 && pairs > 0) {
    edges.reserve(static_cast<std::size_t>(alpha * static_cast<double>(pairs) * 1.1) + 16);
    // Geometric skipping over the ordered off-diagonal pairs.
    const double log_q = std::log1p(-alpha);
    std::uint64_t k = 0;
    bool first = true;
    while (true) {
      if (alpha < 1.0) {
        const double skip = std::floor(std::log(rng.uniform()) / log_q);
        if (skip >= static_cast<double>(pairs)) break;
        k += static_cast<std::uint64_t>(skip) + (first ? 0 : 1);
      } else if (!first) {
        ++k;
      }
      first = false;
      if (k >= pairs) break;
      const auto i = static_cast<std::uint32_t>(k / row);
      const auto r = static_cast<std::uint32_t>(k % row);
      edges.push_back({i, r < i ? r : r + 1});
    }
  }
  return ExposureNetwork(banks, std::move(edges), "erdos_renyi");
}

ExposureNetwork watts_strogatz(std::size_t banks, std::size_t c, double beta, RngStream& rng) {
  if (c % 2 != 0) throw std::invalid_argument("watts_strogatz: c must be even");
  if (c >= banks) throw std::invalid_argument("watts_strogatz: c must be < M");
  check_probability(beta, "beta");
  const auto m = static_cast<std::uint32_t>(banks);
  Adjacency adj(banks);
  for (std::uint32_t u = 0; u < m; ++u) {
    for (std::uint32_t j = 1; j <= c / 2; ++j) link(adj, u, (u + j) % m);
  }
  for (std::uint32_t j = 1; j <= c / 2; ++j) {
    for (std::uint32_t u = 0; u < m; ++u) {
      const std::uint32_t v = (u + j) % m;
      if (!rng.bernoulli(beta)) continue;
      // The lattice edge may already have been rewired away.
      if (!adjacent(adj, u, v)) continue;
      if (adj[u].size() >= banks - 1) continue;
      std::uint32_t w;
      do {
        w = static_cast<std::uint32_t>(rng.below(m));
      } while (w == u || adjacent(adj, u, w));
      unlink(adj, u, v);
      link(adj, u, w);
    }
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return mutual(adj, "watts_strogatz");
}

ExposureNetwork core_periphery(std::size_t core_banks, double alpha_core, std::size_t periph_banks,
                               std::size_t m_links, RngStream& rng) {
  check_probability(alpha_core, "alpha_core");
  if (core_banks < 1) throw std::invalid_argument("core_periphery: need at least one core bank");
  if (m_links > core_banks) throw std::invalid_argument("core_periphery: m_links must be <= core size");
  const std::size_t banks = core_banks + periph_banks;
  std::vector<Edge> edges;
  std::vector<std::size_t> degree(banks, 0);
  // Each endpoint appears once per incident edge, so a uniform pick is degree-proportional.
  std::vector<std::uint32_t> endpoints;
  // Undirected link stored as a mutual pair of loans.
  auto add = [&](std::uint32_t u, std::uint32_t v) {
    edges.push_back({u, v});
    edges.push_back({v, u});
    ++degree[u];
    ++degree[v];
    endpoints.push_back(u);
    endpoints.push_back(v);
  };
  for (std::uint32_t u = 0; u < core_banks; ++u) {
    for (std::uint32_t v = u + 1; v < core_banks; ++v) {
      if (rng.bernoulli(alpha_core)) add(u, v);
    }
  }

  std::vector<std::uint32_t> chosen;
  std::vector<char> taken(banks, 0);
  for (std::size_t n = core_banks; n < banks; ++n) {
    chosen.clear();
    std::size_t connected = 0;
    for (std::size_t t = 0; t < n; ++t) connected += degree[t] > 0;
    if (connected >= m_links) {
      while (chosen.size() < m_links) {
        const auto t = endpoints[rng.below(endpoints.size())];
        if (!taken[t]) {
          taken[t] = 1;
          chosen.push_back(t);
        }
      }
    } else {
      // Too few nodes with positive degree: take them all, fill uniformly.
      for (std::uint32_t t = 0; t < n; ++t) {
        if (degree[t] > 0) {
          taken[t] = 1;
          chosen.push_back(t);
        }
      }
      while (chosen.size() < m_links) {
        const auto t = static_cast<std::uint32_t>(rng.below(n));
        if (!taken[t]) {
          taken[t] = 1;
          chosen.push_back(t);
        }
      }
    }
    for (auto t : chosen) {
      taken[t] = 0;
      add(static_cast<std::uint32_t>(n), t);
    }
  }
  return ExposureNetwork(banks, std::move(edges), "core_periphery");
}

ExposureNetwork complete(std::size_t banks) {
  std::vector<Edge> edges;
  edges.reserve(banks * (banks > 0 ? banks - 1 : 0));
  for (std::uint32_t i = 0; i < banks; ++i) {
    for (std::uint32_t j = 0; j < banks; ++j) {
      if (i != j) edges.push_back({i, j});
    }
  }
  return ExposureNetwork(banks, std::move(edges), "complete");
}

ExposureNetwork assign_loans(ExposureNetwork net, double theta, std::span<const double> assets0) {
  net.assign_loans(theta, assets0);
  return net;
}

double clustering_coefficient(const ExposureNetwork& net) {
  const std::size_t n = net.size();
  Adjacency adj(n);
  for (const Edge& e : net.edges()) {
    adj[e.src].push_back(e.dst);
    adj[e.dst].push_back(e.src);
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  double total = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    const auto& nb = adj[u];
    const std::size_t k = nb.size();
    if (k < 2) continue;
    std::size_t triangles = 0;
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = x + 1; y < k; ++y) {
        if (std::binary_search(adj[nb[x]].begin(), adj[nb[x]].end(), nb[y])) ++triangles;
      }
    }
    total += 2.0 * static_cast<double>(triangles) / static_cast<double>(k * (k - 1));
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("bad number '" + s + "' in " + context);
  return v;
}

std::size_t to_count(const std::string& s, const std::string& context) {
  const double v = to_double(s, context);
  if (v < 0 || v != std::floor(v)) throw std::invalid_argument("bad count '" + s + "' in " + context);
  return static_cast<std::size_t>(v);
}

}  // namespace

NetworkSpec NetworkSpec::parse(const std::string& text, std::size_t banks) {
  NetworkSpec spec;
  spec.banks = banks;
  const auto parts = split(text, ':');
  if (parts.empty()) throw std::invalid_argument("empty network spec");
  const std::string& kind = parts[0];
  if (kind == "er" && parts.size() == 2) {
    spec.kind = Kind::ErdosRenyi;
    spec.alpha = to_double(parts[1], text);
  } else if (kind == "ws" && parts.size() == 3) {
    spec.kind = Kind::WattsStrogatz;
    spec.neighbours = to_count(parts[1], text);
    spec.rewire = to_double(parts[2], text);
  } else if (kind == "cp" && parts.size() == 2 && (parts[1] == "table2" || parts[1] == "sec54")) {
    spec.kind = Kind::CorePeriphery;
    spec.core_banks = 50;
    spec.links_per_node = 15;
    spec.alpha = parts[1] == "table2" ? 0.1 : 0.75;
  } else if (kind == "cp" && parts.size() == 4) {
    spec.kind = Kind::CorePeriphery;
    spec.core_banks = to_count(parts[1], text);
    spec.alpha = to_double(parts[2], text);
    spec.links_per_node = to_count(parts[3], text);
  } else if (kind == "complete" && parts.size() == 1) {
    spec.kind = Kind::Complete;
  } else {
    throw std::invalid_argument("unknown network spec '" + text +
                                "' (expected er:ALPHA, ws:C:BETA, cp:table2, cp:sec54, cp:CORE:ALPHA:LINKS, complete)");
  }
  if (spec.kind == Kind::CorePeriphery && spec.core_banks > banks) {
    throw std::invalid_argument("core size exceeds bank count");
  }
  return spec;
}

std::string NetworkSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::ErdosRenyi: os << "er:" << alpha; break;
    case Kind::WattsStrogatz: os << "ws:" << neighbours << ':' << rewire; break;
    case Kind::CorePeriphery: os << "cp:" << core_banks << ':' << alpha << ':' << links_per_node; break;
    case Kind::Complete: os << "complete"; break;
  }
  return os.str();
}

ExposureNetwork generate(const NetworkSpec& spec, RngStream& rng) {
  switch (spec.kind) {
    case Kind::ErdosRenyi: return erdos_renyi(spec.banks, spec.alpha, rng);
    case Kind::WattsStrogatz: return watts_strogatz(spec.banks, spec.neighbours, spec.rewire, rng);
    case Kind::CorePeriphery:
      return core_periphery(spec.core_banks, spec.alpha, spec.banks - spec.core_banks,
                            spec.links_per_node, rng);
    case Kind::Complete: return complete(spec.banks);
  }
  throw std::logic_error("unhandled network kind");
}

}  // namespace netgen
}  // namespace contagion
