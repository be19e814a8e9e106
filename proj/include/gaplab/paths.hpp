#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gaplab/model.hpp"

namespace gaplab {

/// Nearest-neighbour path on {1..N}^d (1-based coordinates).
struct CanonicalPath {
  std::vector<int> from;
  std::vector<int> to;
  std::vector<std::vector<int>> vertices;  // z_0 = from, ..., z_n = to
  int length = 0;
};

/// Corrects coordinate 1 first, then coordinate 2, and so on.
CanonicalPath canonical_path(std::span<const int> x, std::span<const int> y, int d, int N);

struct EdgeLoad {
  Edge edge;                   // lattice vertex indices, edge[0] < edge[1]
  std::int64_t congestion = 0; // ordered pairs (x, y) whose path uses the edge
  std::int64_t weighted = 0;   // sum of n(x, y) over those pairs
};

struct PathCensus {
  int d = 0;
  int N = 0;
  int max_length = 0;
  std::vector<EdgeLoad> edges;
  std::int64_t max_congestion = 0;
  std::int64_t max_weighted = 0;
  std::int64_t weighted_bound = 0;  // N^d * d * N^2
  bool bound_holds = false;
};

PathCensus path_census(int d, int N, std::int64_t cap = 2'000'000);

/// Lattice vertex indices of the canonical path between two vertices.
std::vector<int> canonical_vertex_path(const InteractionGraph& lattice, int x, int y);

/// Nearest-neighbour transposition word whose composition is the exchange of
/// z_0 and z_m: (z0 z1)(z1 z2)...(z_{m-1} z_m)...(z1 z2)(z0 z1), length 2m - 1.
std::vector<Edge> moving_particle_decomposition(const InteractionGraph& graph, std::span<const int> z);

/// Applies the transpositions of a word left to right.
std::vector<int> apply_word(std::span<const int> config, const std::vector<Edge>& word);

}  // namespace gaplab
