#include "gaplab/states.hpp"

#include <algorithm>
#include <cmath>

#include "gaplab/error.hpp"

namespace gaplab {

std::int64_t composition_count(int parts, int total) {
  if (parts <= 0 || total < 0) return (parts == 0 && total == 0) ? 1 : 0;
  // C(total + parts - 1, parts - 1), saturating
  const int k = std::min(parts - 1, total);
  const int n = total + parts - 1;
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > 9.0e18L) return INT64_MAX;
  }
  return static_cast<std::int64_t>(std::llround(r));
}

StateSet::StateSet(int sites, int total, std::int64_t cap) : sites_(sites), total_(total) {
  if (sites < 1) throw Error(ErrorKind::InvalidSize, "state space needs at least one site");
  if (total < 0) throw Error(ErrorKind::DomainError, "total must be nonnegative");
  count_ = composition_count(sites, total);
  if (count_ > cap)
    throw Error(ErrorKind::TooLarge, std::to_string(count_) + " states exceed the cap of " + std::to_string(cap));

  binom_.assign(static_cast<std::size_t>(sites + 1), std::vector<std::int64_t>(static_cast<std::size_t>(total + 1)));
  for (int p = 0; p <= sites; ++p)
    for (int t = 0; t <= total; ++t) binom_[p][t] = composition_count(p, t);

  data_.resize(static_cast<std::size_t>(count_ * sites));
  std::vector<int> cur(static_cast<std::size_t>(sites), 0);
  cur.back() = total;
  for (std::int64_t idx = 0; idx < count_; ++idx) {
    std::copy(cur.begin(), cur.end(), data_.begin() + idx * sites);
    // Next composition in lexicographic order: bump the rightmost position
    // (other than the last) that still has mass to its right.
    int pos = sites - 2;
    while (pos >= 0) {
      int right = 0;
      for (int q = pos + 1; q < sites; ++q) right += cur[static_cast<std::size_t>(q)];
      if (right > 0) {
        ++cur[static_cast<std::size_t>(pos)];
        for (int q = pos + 1; q < sites; ++q) cur[static_cast<std::size_t>(q)] = 0;
        cur.back() = right - 1;
        break;
      }
      --pos;
    }
  }
}

std::int64_t StateSet::index_of(std::span<const int> config) const {
  if (static_cast<int>(config.size()) != sites_) throw Error(ErrorKind::ShapeError, "configuration length mismatch");
  std::int64_t idx = 0;
  int remaining = total_;
  for (int i = 0; i + 1 < sites_; ++i) {
    const int v = config[static_cast<std::size_t>(i)];
    if (v < 0 || v > remaining) throw Error(ErrorKind::DomainError, "configuration not in the state set");
    const int parts = sites_ - i - 1;
    for (int a = 0; a < v; ++a) idx += binom_[parts][remaining - a];
    remaining -= v;
  }
  if (config[static_cast<std::size_t>(sites_ - 1)] != remaining)
    throw Error(ErrorKind::DomainError, "configuration does not sum to the total");
  return idx;
}

Measure stationary_weights(const RateFunction& g, const StateSet& states) {
  if (states.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty state set");
  const auto logf = g.log_factorials(states.total());
  Eigen::VectorXd logw(states.size());
  for (std::int64_t i = 0; i < states.size(); ++i) {
    double s = 0.0;
    for (int v : states[i]) s -= logf[static_cast<std::size_t>(v)];
    logw(i) = s;
  }
  const double shift = logw.maxCoeff();
  Measure m;
  m.weights = (logw.array() - shift).exp().matrix();
  const double z = m.weights.sum();
  if (!std::isfinite(z) || !(z > 0.0)) throw Error(ErrorKind::NumericError, "weights are not finite");
  m.weights /= z;
  m.normalized = true;
  return m;
}

std::vector<std::vector<double>> pair_conditional_laws(const RateFunction& g, int s_max) {
  const auto logf = g.log_factorials(s_max);
  std::vector<std::vector<double>> table(static_cast<std::size_t>(s_max + 1));
  for (int s = 0; s <= s_max; ++s) {
    auto& row = table[static_cast<std::size_t>(s)];
    row.resize(static_cast<std::size_t>(s + 1));
    double top = -INFINITY;
    for (int k = 0; k <= s; ++k) {
      row[static_cast<std::size_t>(k)] = -logf[static_cast<std::size_t>(k)] - logf[static_cast<std::size_t>(s - k)];
      top = std::max(top, row[static_cast<std::size_t>(k)]);
    }
    double z = 0.0;
    for (double& v : row) {
      v = std::exp(v - top);
      z += v;
    }
    for (double& v : row) v /= z;
  }
  return table;
}

std::vector<int> apply_exchange(std::span<const int> config, int x, int y) {
  std::vector<int> out(config.begin(), config.end());
  if (x < 0 || y < 0 || x >= static_cast<int>(out.size()) || y >= static_cast<int>(out.size()))
    throw Error(ErrorKind::InvalidArgument, "exchange site out of range");
  std::swap(out[static_cast<std::size_t>(x)], out[static_cast<std::size_t>(y)]);
  return out;
}

}  // namespace gaplab
