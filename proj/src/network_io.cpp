#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "contagion/netgen.hpp"
#include "contagion/numfmt.hpp"

namespace contagion::network_io {

void write_edges_csv(const ExposureNetwork& net, std::ostream& out) {
  out << "src,dst,weight\n";
  std::string rows;
  for (const Edge& e : net.edges()) {
    rows += std::to_string(e.src) + ',' + std::to_string(e.dst) + ',' + format_double(e.weight) + '\n';
  }
  out << rows;
}

std::string sidecar_json(const ExposureNetwork& net, std::uint64_t seed) {
  nlohmann::json j = {{"M", net.size()}, {"seed", seed}, {"generator", net.generator()}};
  return j.dump(2) + "\n";
}

ExposureNetwork read_edges_csv(std::istream& in, std::size_t banks, const std::string& generator) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("edge list: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "src,dst,weight") throw std::runtime_error("edge list line 1: expected header src,dst,weight");
  std::vector<Edge> edges;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    long long src = -1;
    long long dst = -1;
    double w = 0.0;
    char c1 = 0;
    char c2 = 0;
    if (!(row >> src >> c1 >> dst >> c2 >> w) || c1 != ',' || c2 != ',' || !(row >> std::ws).eof() ||
        src < 0 || dst < 0) {
      throw std::runtime_error("edge list line " + std::to_string(lineno) + ": malformed row '" + line + "'");
    }
    edges.push_back({static_cast<std::uint32_t>(src), static_cast<std::uint32_t>(dst), w});
  }
  try {
    return ExposureNetwork(banks, std::move(edges), generator);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("edge list: ") + e.what());
  }
}

std::pair<std::size_t, std::string> read_sidecar(std::istream& in) {
  const auto j = nlohmann::json::parse(in);
  return {j.at("M").get<std::size_t>(), j.value("generator", std::string("csv"))};
}

}  // namespace contagion::network_io
