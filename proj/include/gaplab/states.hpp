#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gaplab/model.hpp"

namespace gaplab {

inline constexpr std::int64_t default_state_cap = 2'000'000;

/// Number of compositions of `total` into `parts` nonnegative parts.
std::int64_t composition_count(int parts, int total);

/// All configurations of `total` particles on V sites, in lexicographic order.
/// Positions are ranked arithmetically, so lookups need no hash table.
class StateSet {
 public:
  StateSet(int sites, int total, std::int64_t cap = default_state_cap);

  int sites() const noexcept { return sites_; }
  int total() const noexcept { return total_; }
  std::int64_t size() const noexcept { return count_; }

  std::span<const int> operator[](std::int64_t index) const {
    return {data_.data() + index * sites_, static_cast<std::size_t>(sites_)};
  }
  std::int64_t index_of(std::span<const int> config) const;

 private:
  int sites_;
  int total_;
  std::int64_t count_;
  std::vector<int> data_;
  // binom_[p][t] = composition_count(p, t)
  std::vector<std::vector<std::int64_t>> binom_;
};

inline StateSet enumerate_states(int sites, int total, std::int64_t cap = default_state_cap) {
  return StateSet(sites, total, cap);
}

/// Reversible weights on a StateSet.
struct Measure {
  Eigen::VectorXd weights;
  bool normalized = false;
};

/// Weights proportional to prod_x 1/g(eta_x)!, normalized. Products are
/// formed in log space.
Measure stationary_weights(const RateFunction& g, const StateSet& states);

/// Two-site conditional law of (k, s - k) given the pair total s, for every
/// s in [0, s_max]: table[s][k].
std::vector<std::vector<double>> pair_conditional_laws(const RateFunction& g, int s_max);

/// Swap the occupations at x and y; pi_{x,x} is the identity.
std::vector<int> apply_exchange(std::span<const int> config, int x, int y);

}  // namespace gaplab
