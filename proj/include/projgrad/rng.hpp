#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace projgrad {

// Deterministic, seedable random stream. A stream is identified by its seed
// lineage (master seed, trial index, purpose tag): the same lineage always
// reproduces the same draw sequence bit-for-bit, and streams with distinct
// lineages are derived by hashing, so trial t never has to draw through
// trials 0..t-1. Generator: xoshiro256++ seeded via SplitMix64 over the
// lineage hash.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t trial,
            std::string_view purpose);

  // Derives an independent child stream from the lineage (pure: does not
  // consume state of this stream).
  RngStream child(std::string_view purpose) const;

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01();

  // Unbiased integer in [0, n); rejection sampling, n >= 1.
  std::uint64_t uniform_below(std::uint64_t n);

  // N(0,1) draw. Fixed algorithm: Marsaglia polar with the spare deviate
  // cached, so draw sequences are reproducible for a given build.
  double normal();

  // n i.i.d. N(0,1) draws.
  Eigen::VectorXd standard_normal(int n);

  // Uniform direction: Gaussian vector normalized; redrawn if the Gaussian
  // norm falls below 1e-12.
  Eigen::VectorXd unit_sphere(int n);

  // k distinct indices, uniform over k-subsets of {0..pool-1}.
  std::vector<std::int64_t> sample_without_replacement(std::int64_t pool,
                                                       std::int64_t k);

  // Index i with probability weights[i] / sum(weights). Weights must be
  // nonnegative with a positive sum.
  int categorical(const std::vector<double>& weights);

 private:
  explicit RngStream(std::uint64_t lineage);

  std::uint64_t lineage_ = 0;
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace projgrad
