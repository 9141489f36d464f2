#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mmo {

/// Counter-based Philox4x32-10 generator (Salmon et al., SC'11).
///
/// A block of four 32-bit words is a pure function of (key, counter), so any
/// draw can be recomputed from its coordinates without replaying a stream.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  explicit constexpr Philox4x32(std::uint64_t seed) : seed_(seed) {}

  constexpr Block operator()(std::uint64_t c0, std::uint64_t c1) const {
    std::uint32_t a = static_cast<std::uint32_t>(c0), b = static_cast<std::uint32_t>(c0 >> 32);
    std::uint32_t c = static_cast<std::uint32_t>(c1), d = static_cast<std::uint32_t>(c1 >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kM0} * a;
      const std::uint64_t p1 = std::uint64_t{kM1} * c;
      a = static_cast<std::uint32_t>(p1 >> 32) ^ b ^ k0;
      b = static_cast<std::uint32_t>(p1);
      c = static_cast<std::uint32_t>(p0 >> 32) ^ d ^ k1;
      d = static_cast<std::uint32_t>(p0);
      k0 += kW0;
      k1 += kW1;
    }
    return {a, b, c, d};
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Blocks for counters (first + i, c1), i < n, written as two 64-bit words
/// each: out[2i] = w1:w0, out[2i+1] = w3:w2. Identical to calling the
/// generator block by block; the loop is laid out for vectorisation.
void philox_blocks(const Philox4x32& gen, std::uint64_t first, std::uint64_t c1, std::size_t n,
                   std::uint64_t* out);

/// Uniform in (0, 1) from the top 52 bits; never 0 or 1 (the largest value
/// is 1 - 2^-53, which is exactly representable).
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Reproducible standard-normal triples indexed by (path, step).
///
/// The normals of step k are drawn by the ziggurat method from the 64-bit
/// words of Philox blocks with counter (k, sub << 32 | path), sub = 0, 1, ...
/// They depend only on (seed, path, k). Blocks are cached 64 steps at a time,
/// so one instance must not be shared between threads.
class NormalTriples {
 public:
  static constexpr std::size_t kBatch = 64;

  explicit NormalTriples(std::uint64_t seed, std::uint64_t path = 0);

  std::array<double, 3> operator()(std::uint64_t step) const;

  std::uint64_t seed() const { return gen_.seed(); }
  std::uint64_t path() const { return path_; }

 private:
  friend class StepWords;
  void refill(std::uint64_t first) const;

  Philox4x32 gen_;
  std::uint64_t path_;
  mutable std::uint64_t first_ = std::numeric_limits<std::uint64_t>::max();
  // Two blocks (sub 0 and 1) per step, two 64-bit words per block.
  mutable std::array<std::uint64_t, 4 * kBatch> words_{};
};

/// Sequential uniform stream over the (seed, stream) slice; used by the
/// birth-death chain, whose draw count per replica is data dependent.
class UniformStream {
 public:
  UniformStream(std::uint64_t seed, std::uint64_t stream) : gen_(seed), stream_(stream) {}

  double next() {
    if (pos_ == 2) {
      const auto b = gen_(counter_++, stream_);
      words_ = {(std::uint64_t{b[1]} << 32) | b[0], (std::uint64_t{b[3]} << 32) | b[2]};
      pos_ = 0;
    }
    return to_open_unit(words_[pos_++]);
  }

 private:
  Philox4x32 gen_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> words_{};
  int pos_ = 2;
};

}  // namespace mmo
