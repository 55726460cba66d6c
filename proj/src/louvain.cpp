#include "rutcast/louvain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rutcast/rng.hpp"
#include "rutcast/util.hpp"

namespace rutcast::net {

namespace {

// Working graph for one aggregation level. Self-loops hold the full internal
// weight of a supernode (the value that enters both Q and the degree once).
struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> neighbors;
  std::vector<double> self_loop;
  std::vector<double> degree;  // self_loop + sum of incident edge weights
  double two_m = 0.0;

  int size() const { return int(neighbors.size()); }
};

LevelGraph from_weighted(const WeightedGraph& g) {
  LevelGraph lg;
  const int n = int(g.size());
  lg.neighbors.resize(std::size_t(n));
  lg.self_loop.assign(std::size_t(n), 0.0);
  lg.degree.assign(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = g.adjacency[std::size_t(i)][std::size_t(j)];
      if (w != 0.0 && i != j) {
        lg.neighbors[std::size_t(i)].push_back({j, w});
        lg.degree[std::size_t(i)] += w;
      }
    }
    lg.two_m += lg.degree[std::size_t(i)];
  }
  return lg;
}

// Community bookkeeping: slot c holds summed degree, ordered-pair internal
// weight (self-loops counted once), and the member count.
struct LevelState {
  std::vector<int> comm;
  std::vector<double> tot;
  std::vector<double> internal;
  std::vector<int> count;
};

LevelState state_from_partition(const LevelGraph& g, const std::vector<int>& labels) {
  const std::size_t n = std::size_t(g.size());
  LevelState st;
  st.comm = labels;
  st.tot.assign(n, 0.0);
  st.internal.assign(n, 0.0);
  st.count.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = std::size_t(labels[i]);
    st.tot[c] += g.degree[i];
    st.internal[c] += g.self_loop[i];
    ++st.count[c];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, w] : g.neighbors[i])
      if (labels[std::size_t(j)] == labels[i]) st.internal[std::size_t(labels[i])] += w;
  return st;
}

double partition_q(const LevelGraph& g, const LevelState& st) {
  double q = 0.0;
  for (std::size_t c = 0; c < st.tot.size(); ++c) {
    if (st.count[c] == 0) continue;
    q += st.internal[c] / g.two_m - (st.tot[c] / g.two_m) * (st.tot[c] / g.two_m);
  }
  return q;
}

// One round of local moves until a full sweep changes nothing. Returns the
// number of accepted moves; `q` accumulates the exact modularity increments.
int local_moves(const LevelGraph& g, LevelState& st, Rng& rng, double min_gain, double& q,
                std::vector<double>* trace) {
  const int n = g.size();
  const double two_m = g.two_m;
  std::vector<int> order(std::size_t(n), 0);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> k_in(std::size_t(n), 0.0);
  std::vector<int> touched;

  int total_moves = 0;
  bool moved = true;
  while (moved) {
    moved = false;
    rng.shuffle(order);
    for (int i : order) {
      const int a = st.comm[std::size_t(i)];
      const double k_i = g.degree[std::size_t(i)];
      const double sl_i = g.self_loop[std::size_t(i)];

      touched.clear();
      for (const auto& [j, w] : g.neighbors[std::size_t(i)]) {
        const int c = st.comm[std::size_t(j)];
        if (k_in[std::size_t(c)] == 0.0) touched.push_back(c);
        k_in[std::size_t(c)] += w;
      }
      if (k_in[std::size_t(a)] == 0.0) touched.push_back(a);

      // Gain of taking i out of its community; reinserting costs -remove_gain.
      const double tot_a_without = st.tot[std::size_t(a)] - k_i;
      const double remove_gain = -(2.0 * k_in[std::size_t(a)] + sl_i) / two_m +
                                 (2.0 * tot_a_without * k_i + k_i * k_i) / (two_m * two_m);

      int best_c = a;
      double best_insert = (2.0 * k_in[std::size_t(a)] + sl_i) / two_m -
                           (2.0 * tot_a_without * k_i + k_i * k_i) / (two_m * two_m);
      for (int c : touched) {
        if (c == a) continue;
        const double insert_gain =
            (2.0 * k_in[std::size_t(c)] + sl_i) / two_m -
            (2.0 * st.tot[std::size_t(c)] * k_i + k_i * k_i) / (two_m * two_m);
        if (insert_gain > best_insert || (insert_gain == best_insert && c < best_c)) {
          best_insert = insert_gain;
          best_c = c;
        }
      }
      // Isolating the node into the free slot i is also a candidate move.
      if (st.count[std::size_t(i)] == 0) {
        const double isolate_gain = sl_i / two_m - k_i * k_i / (two_m * two_m);
        if (isolate_gain > best_insert) {
          best_insert = isolate_gain;
          best_c = i;
        }
      }

      const double gain = remove_gain + best_insert;
      if (best_c != a && gain > min_gain) {
        st.tot[std::size_t(a)] -= k_i;
        st.internal[std::size_t(a)] -= 2.0 * k_in[std::size_t(a)] + sl_i;
        --st.count[std::size_t(a)];
        st.tot[std::size_t(best_c)] += k_i;
        st.internal[std::size_t(best_c)] += 2.0 * k_in[std::size_t(best_c)] + sl_i;
        ++st.count[std::size_t(best_c)];
        st.comm[std::size_t(i)] = best_c;
        q += gain;
        if (trace) trace->push_back(q);
        moved = true;
        ++total_moves;
      }

      for (int c : touched) k_in[std::size_t(c)] = 0.0;
      k_in[std::size_t(a)] = 0.0;
    }
  }
  return total_moves;
}

// Renumber communities densely in node order.
std::vector<int> compact_labels(const std::vector<int>& comm, int& count) {
  std::vector<int> remap(comm.size(), -1);
  std::vector<int> out(comm.size(), 0);
  count = 0;
  for (std::size_t i = 0; i < comm.size(); ++i) {
    int& r = remap[std::size_t(comm[i])];
    if (r < 0) r = count++;
    out[i] = r;
  }
  return out;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<int>& comm, int n_comm) {
  LevelGraph out;
  out.neighbors.resize(std::size_t(n_comm));
  out.self_loop.assign(std::size_t(n_comm), 0.0);
  out.degree.assign(std::size_t(n_comm), 0.0);
  out.two_m = g.two_m;
  std::vector<std::vector<double>> acc(std::size_t(n_comm),
                                       std::vector<double>(std::size_t(n_comm), 0.0));
  for (int i = 0; i < g.size(); ++i) {
    const int ci = comm[std::size_t(i)];
    out.self_loop[std::size_t(ci)] += g.self_loop[std::size_t(i)];
    for (const auto& [j, w] : g.neighbors[std::size_t(i)]) {
      const int cj = comm[std::size_t(j)];
      if (ci == cj)
        out.self_loop[std::size_t(ci)] += w;  // both directed occurrences land here
      else
        acc[std::size_t(ci)][std::size_t(cj)] += w;
    }
  }
  for (int c = 0; c < n_comm; ++c) {
    out.degree[std::size_t(c)] = out.self_loop[std::size_t(c)];
    for (int d = 0; d < n_comm; ++d) {
      if (c == d) continue;
      const double w = acc[std::size_t(c)][std::size_t(d)];
      if (w != 0.0) {
        out.neighbors[std::size_t(c)].push_back({d, w});
        out.degree[std::size_t(c)] += w;
      }
    }
  }
  return out;
}

struct SingleRun {
  std::vector<int> assignment;
  double q_final = 0.0;
  std::vector<double> q_trace;
};

// Two-phase iteration with a flat refinement pass between rounds: after the
// coarse levels converge, single original nodes get another chance to move,
// which aggregation alone cannot offer them.
SingleRun louvain_once(const WeightedGraph& graph, Rng rng, double min_gain, bool record_trace,
                       bool random_init) {
  const int n = int(graph.size());
  const LevelGraph level0 = from_weighted(graph);
  std::vector<int> flat(std::size_t(n), 0);
  std::iota(flat.begin(), flat.end(), 0);
  if (random_init) {
    // A different basin of attraction per restart; the local-move dynamics
    // are unchanged.
    for (auto& f : flat) f = int(rng.uniform_index(std::uint64_t(n)));
    int k = 0;
    flat = compact_labels(flat, k);
  }

  SingleRun run;
  std::vector<double>* trace = record_trace ? &run.q_trace : nullptr;

  double q = 0.0;
  {
    const LevelState st = state_from_partition(level0, flat);
    q = partition_q(level0, st);
  }
  if (trace) trace->push_back(q);

  bool improved = true;
  while (improved) {
    improved = false;

    // Refinement at the original level (the first pass is the classic
    // singleton phase 1).
    LevelState st = state_from_partition(level0, flat);
    if (local_moves(level0, st, rng, min_gain, q, trace) > 0) improved = true;
    int n_comm = 0;
    flat = compact_labels(st.comm, n_comm);

    // Coarse levels.
    if (n_comm < n) {
      LevelGraph level = aggregate(level0, flat, n_comm);
      while (true) {
        LevelState cst;
        cst.comm.resize(std::size_t(level.size()));
        std::iota(cst.comm.begin(), cst.comm.end(), 0);
        cst.tot = level.degree;
        cst.internal = level.self_loop;
        cst.count.assign(std::size_t(level.size()), 1);

        if (local_moves(level, cst, rng, min_gain, q, trace) == 0) break;
        improved = true;
        int k = 0;
        const auto dense = compact_labels(cst.comm, k);
        for (auto& f : flat) f = dense[std::size_t(f)];
        if (k == level.size()) break;
        level = aggregate(level, dense, k);
      }
    }
  }

  int n_comm = 0;
  run.assignment = compact_labels(flat, n_comm);
  run.q_final = q;
  return run;
}

}  // namespace

LouvainResult louvain_detailed(const WeightedGraph& graph, const LouvainOptions& opts) {
  const int n = int(graph.size());
  if (n < 1) throw ValidationError("louvain: empty graph");
  if (opts.restarts < 1) throw ValidationError("louvain: need at least 1 restart");

  LouvainResult res;
  res.partition.labels = graph.labels;

  if (graph.total_weight() == 0.0) {
    res.partition.assignment.resize(std::size_t(n));
    std::iota(res.partition.assignment.begin(), res.partition.assignment.end(), 0);
    res.partition.modularity = 0.0;
    if (opts.record_trace) res.q_trace.push_back(0.0);
    return res;
  }

  // Greedy local moves depend on the sweep order; a few independently seeded
  // runs smooth out unlucky orders. The best run (by Q) wins, first on ties.
  SingleRun best;
  bool have_best = false;
  for (int r = 0; r < opts.restarts; ++r) {
    SingleRun run = louvain_once(graph, Rng::stream(opts.seed, 77 + std::uint64_t(r)),
                                 opts.min_gain, opts.record_trace, r > 0);
    if (!have_best || run.q_final > best.q_final) {
      best = std::move(run);
      have_best = true;
    }
  }

  res.partition.assignment = std::move(best.assignment);
  res.partition.modularity = modularity(graph, res.partition.assignment);
  res.q_trace = std::move(best.q_trace);
  return res;
}

Partition louvain(const WeightedGraph& graph, std::uint64_t seed) {
  LouvainOptions opts;
  opts.seed = seed;
  return louvain_detailed(graph, opts).partition;
}

std::map<int, data::SampleSet> equivalent_training_set(
    const Partition& partition, const std::vector<data::SampleSet>& sample_sets) {
  std::map<std::string, int> community_of;
  for (std::size_t i = 0; i < partition.labels.size(); ++i)
    community_of[partition.labels[i]] = partition.assignment[i];

  std::map<int, data::SampleSet> merged;
  for (const auto& set : sample_sets) {
    const auto it = community_of.find(set.structure_id);
    if (it == community_of.end())
      throw ValidationError("equivalent_training_set: unknown structure " + set.structure_id);
    auto [mit, inserted] = merged.try_emplace(it->second);
    data::SampleSet& target = mit->second;
    if (inserted) {
      target.structure_id = "community_" + std::to_string(it->second);
      target.feature_names = set.feature_names;
    } else if (target.feature_names != set.feature_names) {
      throw ValidationError("equivalent_training_set: feature layouts differ");
    }
    target.samples.insert(target.samples.end(), set.samples.begin(), set.samples.end());
  }
  return merged;
}

}  // namespace rutcast::net
