#include "mmo/rng.hpp"

#include <boost/random/normal_distribution.hpp>

#include "mmo/error.hpp"

namespace mmo {

void philox_blocks(const Philox4x32& gen, std::uint64_t first, std::uint64_t c1, std::size_t n,
                   std::uint64_t* out) {
  const std::uint64_t seed = gen.seed();
  const auto k0i = static_cast<std::uint32_t>(seed);
  const auto k1i = static_cast<std::uint32_t>(seed >> 32);
  const auto c = static_cast<std::uint32_t>(c1);
  const auto d = static_cast<std::uint32_t>(c1 >> 32);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t ctr = first + i;
    std::uint32_t x0 = static_cast<std::uint32_t>(ctr), x1 = static_cast<std::uint32_t>(ctr >> 32);
    std::uint32_t x2 = c, x3 = d;
    std::uint32_t k0 = k0i, k1 = k1i;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{Philox4x32::kM0} * x0;
      const std::uint64_t p1 = std::uint64_t{Philox4x32::kM1} * x2;
      const std::uint32_t y0 = static_cast<std::uint32_t>(p1 >> 32) ^ x1 ^ k0;
      const std::uint32_t y2 = static_cast<std::uint32_t>(p0 >> 32) ^ x3 ^ k1;
      x1 = static_cast<std::uint32_t>(p1);
      x3 = static_cast<std::uint32_t>(p0);
      x0 = y0;
      x2 = y2;
      k0 += Philox4x32::kW0;
      k1 += Philox4x32::kW1;
    }
    out[2 * i] = (std::uint64_t{x1} << 32) | x0;
    out[2 * i + 1] = (std::uint64_t{x3} << 32) | x2;
  }
}

NormalTriples::NormalTriples(std::uint64_t seed, std::uint64_t path) : gen_(seed), path_(path) {
  if (path > 0xFFFFFFFFu) throw InvalidArgument("path index must fit in 32 bits");
}

void NormalTriples::refill(std::uint64_t first) const {
  std::array<std::uint64_t, 2 * kBatch> sub0{}, sub1{};
  philox_blocks(gen_, first, path_, kBatch, sub0.data());
  philox_blocks(gen_, first, (std::uint64_t{1} << 32) | path_, kBatch, sub1.data());
  for (std::size_t i = 0; i < kBatch; ++i) {
    words_[4 * i] = sub0[2 * i];
    words_[4 * i + 1] = sub0[2 * i + 1];
    words_[4 * i + 2] = sub1[2 * i];
    words_[4 * i + 3] = sub1[2 * i + 1];
  }
  first_ = first;
}

/// 64-bit engine over the words of one step: the four cached words first,
/// then further blocks (sub = 2, 3, ...) computed on demand.
class StepWords {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  StepWords(const NormalTriples& src, std::uint64_t step)
      : src_(src), step_(step), cached_(&src.words_[4 * (step - src.first_)]) {}

  result_type operator()() {
    if (pos_ < 4) return cached_[pos_++];
    if ((pos_ & 1) == 0) {
      const auto b = src_.gen_(step_, (std::uint64_t{pos_ / 2} << 32) | src_.path_);
      extra_ = {(std::uint64_t{b[1]} << 32) | b[0], (std::uint64_t{b[3]} << 32) | b[2]};
    }
    return extra_[pos_++ & 1];
  }

 private:
  const NormalTriples& src_;
  std::uint64_t step_;
  const std::uint64_t* cached_;
  std::array<std::uint64_t, 2> extra_{};
  std::uint64_t pos_ = 0;
};

std::array<double, 3> NormalTriples::operator()(std::uint64_t step) const {
  if (step - first_ >= kBatch || first_ == std::numeric_limits<std::uint64_t>::max()) {
    refill(step - step % kBatch);
  }
  StepWords words(*this, step);
  boost::random::normal_distribution<double> normal;
  const double a = normal(words);
  const double b = normal(words);
  const double c = normal(words);
  return {a, b, c};
}

}  // namespace mmo
