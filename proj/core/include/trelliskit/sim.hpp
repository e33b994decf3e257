#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trelliskit/decoders.hpp"
#include "trelliskit/modem.hpp"
#include "trelliskit/rng.hpp"
#include "trelliskit/siso.hpp"

namespace trelliskit {

enum class InterleaverKind { UniformRandomPerFrame, FixedSeeded, Identity };

// Per-frame random permutations realize the uniform-interleaver average
// that the analytical bounds are taken over.
Interleaver make_interleaver(InterleaverKind kind, std::size_t length, Philox& rng);

// 95% Wilson score interval; valid at the low error counts where the
// normal approximation is not.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t bits,
                                          double z = 1.959963984540054);

struct StopRule {
    std::uint64_t min_bit_errors = 100;
    std::uint64_t max_bits = 10'000'000;
    std::uint64_t max_frames = 0;  // 0: derived from max_bits
};

struct PointConfig {
    ConcatScheme scheme;
    ChannelKind channel = ChannelKind::Awgn;
    FadingGranularity fading = FadingGranularity::PerBit;
    ModemConfig modem;
    DecodeConfig decode;
    InterleaverKind interleavers = InterleaverKind::UniformRandomPerFrame;
    StopRule stop;
    // Frames per scheduling batch; the stop rule is evaluated at batch
    // boundaries only, so results do not depend on the worker count.
    std::uint32_t batch_frames = 256;
};

struct SimRow {
    std::string scheme_id;
    int n1 = 0;
    int n2 = 0;
    ChannelKind channel = ChannelKind::Awgn;
    double ebn0_db = 0.0;
    int iteration = 0;  // 1-based decoder iteration index
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double ber = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t seed = 0;
};

struct PointResult {
    std::vector<SimRow> rows;  // one row per decoder iteration
    std::uint64_t frames = 0;
    bool reached_min_errors = false;
    double wall_seconds = 0.0;
};

// One Monte Carlo SNR point: frame generation -> encode -> interleave ->
// modulate -> channel -> demodulate -> iterative decode -> error counts,
// with per-iteration counts collected in the same pass. `point_index`
// keys the per-frame RNG streams.
PointResult run_point(const PointConfig& config, double ebn0_db, std::uint64_t seed,
                      std::uint64_t point_index, int threads = 1);

struct PlanEntry {
    PointConfig config;
    std::vector<double> ebn0_db_grid;
};

struct PlanResult {
    std::vector<SimRow> rows;
    std::vector<std::string> failures;  // one message per failed point
    std::uint64_t points_run = 0;
};

// Executes the cross-product; partial failures are recorded and the plan
// continues.
PlanResult run_plan(const std::vector<PlanEntry>& entries, std::uint64_t seed, int threads = 1);

}  // namespace trelliskit
