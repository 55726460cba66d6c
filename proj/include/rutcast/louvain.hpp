#pragma once

#include <cstdint>
#include <map>

#include "rutcast/data.hpp"
#include "rutcast/graph.hpp"

namespace rutcast::net {

struct LouvainOptions {
  std::uint64_t seed = 0;
  double min_gain = 1e-12;   // smallest modularity increment worth a move
  int restarts = 16;         // independently seeded runs; best Q wins
  bool record_trace = false;
};

struct LouvainResult {
  Partition partition;
  // Q before any move, then after each accepted local move (all levels).
  std::vector<double> q_trace;
};

// Two-phase Louvain: seeded-shuffle local moves maximizing the exact
// modularity increment, then community aggregation, repeated until Q stops
// improving. Deterministic for a given (graph, seed).
Partition louvain(const WeightedGraph& graph, std::uint64_t seed);
LouvainResult louvain_detailed(const WeightedGraph& graph, const LouvainOptions& opts);

// Pools the member structures' samples per community; per-sample provenance
// is retained via Sample::source_id.
std::map<int, data::SampleSet> equivalent_training_set(
    const Partition& partition, const std::vector<data::SampleSet>& sample_sets);

}  // namespace rutcast::net
