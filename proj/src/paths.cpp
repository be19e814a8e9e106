#include "gaplab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "gaplab/error.hpp"
#include "gaplab/states.hpp"

namespace gaplab {

CanonicalPath canonical_path(std::span<const int> x, std::span<const int> y, int d, int N) {
  if (d < 1 || N < 1) throw Error(ErrorKind::InvalidArgument, "need d >= 1 and N >= 1");
  if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
    throw Error(ErrorKind::InvalidArgument, "endpoint dimension differs from d");
  for (int i = 0; i < d; ++i) {
    if (x[static_cast<std::size_t>(i)] < 1 || x[static_cast<std::size_t>(i)] > N || y[static_cast<std::size_t>(i)] < 1 ||
        y[static_cast<std::size_t>(i)] > N)
      throw Error(ErrorKind::InvalidArgument, "coordinate outside {1..N}");
  }
  CanonicalPath p;
  p.from.assign(x.begin(), x.end());
  p.to.assign(y.begin(), y.end());
  std::vector<int> z = p.from;
  p.vertices.push_back(z);
  for (int i = 0; i < d; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const int step = y[k] > z[k] ? 1 : -1;
    while (z[k] != y[k]) {
      z[k] += step;
      p.vertices.push_back(z);
    }
  }
  p.length = static_cast<int>(p.vertices.size()) - 1;
  return p;
}

std::vector<int> canonical_vertex_path(const InteractionGraph& lattice, int x, int y) {
  if (lattice.kind != GraphKind::Lattice) throw Error(ErrorKind::InvalidArgument, "canonical paths live on the lattice");
  const auto p = canonical_path(lattice.coordinates(x), lattice.coordinates(y), lattice.d, lattice.N);
  std::vector<int> out;
  out.reserve(p.vertices.size());
  for (const auto& v : p.vertices) out.push_back(lattice.vertex_at(v));
  return out;
}

PathCensus path_census(int d, int N, std::int64_t cap) {
  const auto lattice = build_graph(GraphKind::Lattice, d, N);
  const std::int64_t V = lattice.vertex_count;
  if (V * V * d * N > cap) throw Error(ErrorKind::TooLarge, "path census exceeds the enumeration cap");
  std::map<Edge, EdgeLoad> loads;
  for (const auto& e : lattice.edges) loads[{std::min(e[0], e[1]), std::max(e[0], e[1])}].edge = {std::min(e[0], e[1]), std::max(e[0], e[1])};
  PathCensus c;
  c.d = d;
  c.N = N;
  for (int x = 0; x < V; ++x) {
    for (int y = 0; y < V; ++y) {
      if (x == y) continue;
      const auto path = canonical_vertex_path(lattice, x, y);
      const int n = static_cast<int>(path.size()) - 1;
      c.max_length = std::max(c.max_length, n);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Edge e{std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1])};
        auto it = loads.find(e);
        if (it == loads.end()) throw Error(ErrorKind::InvalidPath, "canonical path left the lattice");
        it->second.congestion += 1;
        it->second.weighted += n;
      }
    }
  }
  std::int64_t Nd = 1;
  for (int i = 0; i < d; ++i) Nd *= N;
  c.weighted_bound = Nd * d * N * N;
  for (const auto& [e, load] : loads) {
    c.edges.push_back(load);
    c.max_congestion = std::max(c.max_congestion, load.congestion);
    c.max_weighted = std::max(c.max_weighted, load.weighted);
  }
  c.bound_holds = c.max_weighted <= c.weighted_bound;
  return c;
}

std::vector<Edge> moving_particle_decomposition(const InteractionGraph& graph, std::span<const int> z) {
  if (z.size() < 2) throw Error(ErrorKind::InvalidPath, "a path needs at least two vertices");
  for (std::size_t i = 0; i + 1 < z.size(); ++i)
    if (!graph.adjacent(z[i], z[i + 1]))
      throw Error(ErrorKind::InvalidPath,
                  "vertices " + std::to_string(z[i]) + " and " + std::to_string(z[i + 1]) + " are not adjacent");
  const std::size_t m = z.size() - 1;
  std::vector<Edge> word;
  word.reserve(2 * m - 1);
  for (std::size_t i = 0; i < m; ++i) word.push_back({z[i], z[i + 1]});
  for (std::size_t i = m - 1; i-- > 0;) word.push_back({z[i], z[i + 1]});
  return word;
}

std::vector<int> apply_word(std::span<const int> config, const std::vector<Edge>& word) {
  std::vector<int> out(config.begin(), config.end());
  for (const auto& [a, b] : word) std::swap(out[static_cast<std::size_t>(a)], out[static_cast<std::size_t>(b)]);
  return out;
}

}  // namespace gaplab
