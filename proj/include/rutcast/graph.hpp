#pragma once

#include <string>
#include <vector>

#include "rutcast/grey.hpp"

namespace rutcast::net {

struct WeightedGraph {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> adjacency;  // symmetric, zero diagonal
  std::vector<std::string> warnings;           // e.g. nodes isolated by thresholding

  std::size_t size() const { return labels.size(); }
  double total_weight() const;          // m, half the adjacency sum
  std::vector<double> degrees() const;  // weighted degrees
};

enum class EdgeRule { Complete, Threshold };

struct EdgeConfig {
  EdgeRule rule = EdgeRule::Complete;
  double threshold = 0.0;  // edges with weight below this are dropped
};

// Complete graph over the similarity matrix by default; the threshold rule
// drops weak edges but keeps isolated nodes (with a warning recorded).
WeightedGraph build_graph(const grey::SimilarityMatrix& sim, const EdgeConfig& cfg = {});

struct Partition {
  std::vector<std::string> labels;
  std::vector<int> assignment;  // node -> community id, dense 0-based
  double modularity = 0.0;

  int community_count() const;
  std::vector<std::vector<std::string>> communities() const;  // labels per community
};

// Newman-Girvan modularity of an assignment, over ordered node pairs
// including self-pairs. Defined as 0 for an edgeless graph.
double modularity(const WeightedGraph& graph, const std::vector<int>& assignment);

}  // namespace rutcast::net
