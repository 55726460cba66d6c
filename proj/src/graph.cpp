#include "rutcast/graph.hpp"

#include <algorithm>
#include <cmath>

#include "rutcast/util.hpp"

namespace rutcast::net {

double WeightedGraph::total_weight() const {
  double sum = 0.0;
  for (const auto& row : adjacency)
    for (double w : row) sum += w;
  return sum / 2.0;
}

std::vector<double> WeightedGraph::degrees() const {
  std::vector<double> d(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    for (double w : adjacency[i]) d[i] += w;
  return d;
}

WeightedGraph build_graph(const grey::SimilarityMatrix& sim, const EdgeConfig& cfg) {
  const std::size_t n = sim.size();
  if (n < 1) throw ValidationError("build_graph: empty similarity matrix");
  WeightedGraph g;
  g.labels = sim.labels;
  g.adjacency.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = sim.values[i][j];
      if (w < 0.0) throw ValidationError("build_graph: negative weight");
      if (cfg.rule == EdgeRule::Threshold && w < cfg.threshold) continue;
      g.adjacency[i][j] = w;
    }
  if (cfg.rule == EdgeRule::Threshold) {
    for (std::size_t i = 0; i < n; ++i) {
      bool isolated = true;
      for (double w : g.adjacency[i])
        if (w > 0.0) isolated = false;
      if (isolated)
        g.warnings.push_back("node " + g.labels[i] + " isolated by threshold " +
                             format_double(cfg.threshold));
    }
  }
  return g;
}

double modularity(const WeightedGraph& graph, const std::vector<int>& assignment) {
  const std::size_t n = graph.size();
  if (assignment.size() != n) throw ValidationError("modularity: assignment size mismatch");
  const double m = graph.total_weight();
  if (m == 0.0) return 0.0;
  const auto deg = graph.degrees();
  const double two_m = 2.0 * m;
  double q = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (assignment[a] == assignment[b])
        q += graph.adjacency[a][b] - deg[a] * deg[b] / two_m;
  return q / two_m;
}

int Partition::community_count() const {
  int hi = -1;
  for (int c : assignment) hi = std::max(hi, c);
  return hi + 1;
}

std::vector<std::vector<std::string>> Partition::communities() const {
  const auto count = std::size_t(community_count());
  std::vector<std::vector<std::string>> out(count);
  for (std::size_t i = 0; i < assignment.size(); ++i)
    out[std::size_t(assignment[i])].push_back(labels[i]);
  return out;
}

}  // namespace rutcast::net
