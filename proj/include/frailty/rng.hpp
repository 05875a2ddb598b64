#pragma once

#include <array>
#include <cstdint>

namespace frailty {

// splitmix64 finalizer; used to spread user seeds into key material.
std::uint64_t splitmix64(std::uint64_t x);

// Philox 4x32, 10 rounds.  Counter-based: the generator is a pure function
// of (key, counter), so independent substreams are just distinct keys and
// replaying a stream never requires storing state beyond two integers.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

// Buffered draw interface over one Philox stream.
class Rng {
 public:
  explicit Rng(std::uint64_t key);

  // Derives the replicate stream key for a simulation grid: one key per
  // (seed, scenario, replicate) triple, collision-free for all practical
  // index ranges.
  static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t scenario,
                                  std::uint64_t replicate);

  std::uint64_t next_u64();
  // Uniform on the open interval (0,1): (n + 0.5) / 2^64.
  double uniform();
  // Standard normal via Box-Muller (cosine branch only; consumption order
  // is fixed so streams stay reproducible).
  double normal();
  // Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape > 0.
  double gamma(double shape);
  // Exponential with given rate.
  double exponential(double rate);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int avail_ = 0;  // 32-bit words left in block_
  std::uint32_t next_u32();
};

}  // namespace frailty
