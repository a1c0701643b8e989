#include "projgrad/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace projgrad {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix64(s);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t lineage) : lineage_(lineage) {
  // Seed the xoshiro state with a SplitMix64 chain; an all-zero state is
  // impossible this way.
  std::uint64_t s = lineage_;
  for (auto& w : state_) w = splitmix64(s);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t trial,
                     std::string_view purpose)
    : RngStream(mix(mix(mix(master_seed) ^ trial) ^ fnv1a(purpose))) {}

RngStream RngStream::child(std::string_view purpose) const {
  return RngStream(mix(lineage_ ^ fnv1a(purpose)));
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % n;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

Eigen::VectorXd RngStream::standard_normal(int n) {
  if (n < 1) throw std::invalid_argument("standard_normal: n must be >= 1");
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = normal();
  return out;
}

Eigen::VectorXd RngStream::unit_sphere(int n) {
  if (n < 1) throw std::invalid_argument("unit_sphere: n must be >= 1");
  while (true) {
    Eigen::VectorXd v = standard_normal(n);
    const double norm = v.norm();
    if (norm >= 1e-12) return v / norm;
  }
}

std::vector<std::int64_t> RngStream::sample_without_replacement(
    std::int64_t pool, std::int64_t k) {
  if (k < 0 || pool < 0 || k > pool)
    throw std::invalid_argument(
        "sample_without_replacement: need 0 <= k <= pool");
  std::vector<std::int64_t> idx(static_cast<std::size_t>(pool));
  std::iota(idx.begin(), idx.end(), std::int64_t{0});
  // Partial Fisher-Yates: the first k entries are a uniform ordered k-sample.
  for (std::int64_t i = 0; i < k; ++i) {
    const std::int64_t j =
        i + static_cast<std::int64_t>(
                uniform_below(static_cast<std::uint64_t>(pool - i)));
    std::swap(idx[static_cast<std::size_t>(i)],
              idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

int RngStream::categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0))
      throw std::invalid_argument("categorical: weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0))
    throw std::invalid_argument("categorical: weights must have positive sum");
  const double u = uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding edge: fall back to the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return static_cast<int>(i);
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace projgrad
