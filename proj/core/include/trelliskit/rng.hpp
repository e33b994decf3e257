#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace trelliskit {

// Philox4x32-10 counter-based generator. Streams are addressed by a 64-bit
// (seed) key and a 64-bit stream id, so per-frame generators can be created
// independently of worker scheduling: frame i always sees the same draws.
class Philox {
  public:
    using result_type = std::uint32_t;

    Philox() : Philox(0, 0) {}
    Philox(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xffffffffu; }

    result_type operator()();

    // Uniform double in [0, 1) with 53 random bits.
    double uniform();
    // Uniform double in (0, 1]; safe as a log() argument.
    double uniform_pos();
    std::uint64_t next_u64();
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    // Standard normal deviate (Box-Muller, deterministic across platforms).
    double gaussian();
    // Rayleigh amplitude with density 2 r exp(-r^2), i.e. E[r^2] = 1.
    double rayleigh();
    // Unbiased random permutation of [0, n) (Fisher-Yates).
    std::vector<std::uint32_t> permutation(std::uint32_t n);

  private:
    void refill();

    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> block_{};
    int avail_ = 0;
    bool have_gauss_ = false;
    double spare_gauss_ = 0.0;
};

// Stream-id layout for simulation reproducibility: one stream per
// (point, frame, purpose) triple.
enum class RngPurpose : std::uint64_t { Data = 1, Interleaver = 2, Channel = 3, Misc = 4 };

std::uint64_t make_stream(std::uint64_t point, std::uint64_t frame, RngPurpose purpose);

}  // namespace trelliskit
