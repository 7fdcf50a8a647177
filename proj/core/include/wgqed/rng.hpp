#pragma once

#include <array>
#include <cstdint>

namespace wgqed {

// Philox4x64-10 counter-based generator. Pure function from (counter, key)
// to a 256-bit block, so streams keyed by (seed, stream index) are
// order-independent and realizations can run on any thread without sharing
// state.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

class RngStream {
 public:
  // key = {seed, stream}; the counter enumerates blocks within the stream.
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller; second deviate of each pair is cached.
  double normal();

 private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buf_{};
  int pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace wgqed
