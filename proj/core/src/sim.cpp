#include "trelliskit/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <atomic>
#include <thread>

#include "trelliskit/errors.hpp"

namespace trelliskit {

Interleaver make_interleaver(InterleaverKind kind, std::size_t length, Philox& rng) {
    if (length < 1) throw InputError("make_interleaver: length must be >= 1");
    switch (kind) {
        case InterleaverKind::Identity:
            return Interleaver::identity(length);
        case InterleaverKind::UniformRandomPerFrame:
        case InterleaverKind::FixedSeeded:
            return Interleaver(rng.permutation(static_cast<std::uint32_t>(length)));
    }
    return Interleaver::identity(length);
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t bits, double z) {
    if (bits == 0) return {0.0, 1.0};
    if (errors == 0) {
        const double n = static_cast<double>(bits);
        const double z2 = z * z;
        return {0.0, z2 / (n + z2)};
    }
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct FrameOutcome {
    std::vector<std::uint64_t> errors_per_iteration;
    std::uint64_t info_bits = 0;
};

class PointRunner {
  public:
    PointRunner(const PointConfig& config, double ebn0_db, std::uint64_t seed,
                std::uint64_t point_index)
        : cfg_(config), codec_(config.scheme), seed_(seed), point_(point_index) {
        cfg_.modem.validate();
        cfg_.decode.validate();
        // Energy per transmitted bit; tail bookkeeping per the scheme flag.
        channel_ebn0_db_ = std::isinf(ebn0_db)
                               ? ebn0_db
                               : ebn0_db + 10.0 * std::log10(cfg_.scheme.energy_rate());
        if (cfg_.interleavers == InterleaverKind::FixedSeeded) {
            Philox rng(seed_, make_stream(point_, 0, RngPurpose::Misc));
            for (std::size_t len : codec_.interleaver_lengths())
                fixed_pis_.push_back(make_interleaver(InterleaverKind::FixedSeeded, len, rng));
        }
    }

    int iterations() const {
        return cfg_.scheme.kind == SchemeKind::Uncoded ? 1 : cfg_.decode.iterations;
    }

    FrameOutcome run_frame(std::uint64_t frame) const {
        try {
            return run_frame_impl(frame);
        } catch (const std::exception& e) {
            // carry the replay coordinates with the failure
            throw std::runtime_error("frame " + std::to_string(frame) + " (seed " +
                                     std::to_string(seed_) + ", point " + std::to_string(point_) +
                                     "): " + e.what());
        }
    }

    FrameOutcome run_frame_impl(std::uint64_t frame) const {
        Philox data_rng(seed_, make_stream(point_, frame, RngPurpose::Data));
        std::vector<std::uint8_t> info(codec_.info_len());
        for (auto& b : info) b = static_cast<std::uint8_t>(data_rng() & 1u);

        std::vector<Interleaver> pis;
        if (cfg_.interleavers == InterleaverKind::FixedSeeded) {
            pis = fixed_pis_;
        } else {
            Philox pi_rng(seed_, make_stream(point_, frame, RngPurpose::Interleaver));
            for (std::size_t len : codec_.interleaver_lengths())
                pis.push_back(make_interleaver(cfg_.interleavers, len, pi_rng));
        }

        const auto tx = codec_.encode(info, pis);
        const auto traj = modulate(tx, cfg_.modem);
        Philox ch_rng(seed_, make_stream(point_, frame, RngPurpose::Channel));
        const auto rx = apply_channel(traj, cfg_.channel, channel_ebn0_db_, cfg_.fading, ch_rng);
        const auto llrs = demodulate_llr(rx, cfg_.modem);
        const auto decoded = codec_.decode(llrs, pis, cfg_.decode);

        FrameOutcome out;
        out.info_bits = info.size();
        out.errors_per_iteration.resize(decoded.per_iteration.size(), 0);
        for (std::size_t it = 0; it < decoded.per_iteration.size(); ++it) {
            std::uint64_t e = 0;
            const auto& dec = decoded.per_iteration[it];
            for (std::size_t i = 0; i < info.size(); ++i) e += (dec[i] != info[i]);
            out.errors_per_iteration[it] = e;
        }
        return out;
    }

    const SchemeCodec& codec() const { return codec_; }

  private:
    PointConfig cfg_;
    SchemeCodec codec_;
    double channel_ebn0_db_ = 0.0;
    std::uint64_t seed_;
    std::uint64_t point_;
    std::vector<Interleaver> fixed_pis_;
};

}  // namespace

PointResult run_point(const PointConfig& config, double ebn0_db, std::uint64_t seed,
                      std::uint64_t point_index, int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const PointRunner runner(config, ebn0_db, seed, point_index);
    const std::uint64_t info_per_frame = runner.codec().info_len();
    const std::uint64_t max_frames =
        config.stop.max_frames > 0
            ? config.stop.max_frames
            : std::max<std::uint64_t>(1, (config.stop.max_bits + info_per_frame - 1) / info_per_frame);

    const int iters = runner.iterations();
    std::vector<std::uint64_t> errors(iters, 0);
    std::uint64_t bits = 0;
    std::uint64_t frames = 0;

    const std::uint32_t batch = std::max<std::uint32_t>(1, config.batch_frames);
    const int workers = std::max(1, threads);

    while (frames < max_frames) {
        const std::uint64_t todo = std::min<std::uint64_t>(batch, max_frames - frames);
        std::vector<FrameOutcome> outcomes(todo);
        if (workers == 1 || todo == 1) {
            for (std::uint64_t i = 0; i < todo; ++i) outcomes[i] = runner.run_frame(frames + i);
        } else {
            std::vector<std::thread> pool;
            std::atomic<std::uint64_t> next{0};
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (;;) {
                        const std::uint64_t i = next.fetch_add(1);
                        if (i >= todo) return;
                        outcomes[i] = runner.run_frame(frames + i);
                    }
                });
            for (auto& th : pool) th.join();
        }
        for (const auto& out : outcomes) {
            bits += out.info_bits;
            for (int it = 0; it < iters; ++it) errors[it] += out.errors_per_iteration[it];
        }
        frames += todo;
        if (errors[iters - 1] >= config.stop.min_bit_errors) break;
    }

    PointResult result;
    result.frames = frames;
    result.reached_min_errors = errors[iters - 1] >= config.stop.min_bit_errors;
    for (int it = 0; it < iters; ++it) {
        SimRow row;
        row.scheme_id = config.scheme.id;
        row.n1 = config.scheme.n1;
        row.n2 = config.scheme.n2;
        row.channel = config.channel;
        row.ebn0_db = ebn0_db;
        row.iteration = it + 1;
        row.bits = bits;
        row.errors = errors[it];
        row.ber = bits ? static_cast<double>(errors[it]) / static_cast<double>(bits) : 0.0;
        std::tie(row.ci_lo, row.ci_hi) = wilson_interval(errors[it], bits);
        row.seed = seed;
        result.rows.push_back(std::move(row));
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

PlanResult run_plan(const std::vector<PlanEntry>& entries, std::uint64_t seed, int threads) {
    PlanResult result;
    std::uint64_t point_index = 0;
    for (const auto& entry : entries) {
        for (double db : entry.ebn0_db_grid) {
            ++point_index;
            try {
                auto point = run_point(entry.config, db, seed, point_index, threads);
                result.rows.insert(result.rows.end(), point.rows.begin(), point.rows.end());
                ++result.points_run;
            } catch (const std::exception& e) {
                result.failures.push_back("point " + std::to_string(point_index) + " (" +
                                          entry.config.scheme.id + ", " + std::to_string(db) +
                                          " dB): " + e.what());
            }
        }
    }
    return result;
}

}  // namespace trelliskit
