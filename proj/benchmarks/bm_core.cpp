#include <benchmark/benchmark.h>

#include "trelliskit/bounds.hpp"
#include "trelliskit/decoders.hpp"
#include "trelliskit/modem.hpp"
#include "trelliskit/rng.hpp"
#include "trelliskit/sim.hpp"
#include "trelliskit/weight_spectrum.hpp"

namespace bm = benchmark;
using namespace trelliskit;

namespace {

ConvCodeSpec outer_code() {
    ConvCodeSpec c;
    c.name = "outer_m2";
    c.k_in = 1;
    c.n_out = 2;
    c.memory = 2;
    c.generators = {{05, 07}};
    c.feedback = {05};
    c.systematic_flag = true;
    return c;
}

ConvCodeSpec parity_code() {
    ConvCodeSpec c;
    c.name = "parity_m2";
    c.k_in = 1;
    c.n_out = 1;
    c.memory = 2;
    c.generators = {{03}};
    c.feedback = {07};
    return c;
}

ConvCodeSpec inner_code() {
    ConvCodeSpec c;
    c.name = "inner_r23";
    c.k_in = 2;
    c.n_out = 3;
    c.memory = 3;
    c.generators = {{01, 05, 02}, {00, 03, 03}};
    c.feedback = {07, 03};
    return c;
}

ConcatScheme hctc(int n) {
    ConcatScheme s;
    s.kind = SchemeKind::Hctc;
    s.id = "hctc";
    s.components = {parity_code(), outer_code(), inner_code()};
    s.n1 = n;
    s.n2 = 2 * n;
    return s;
}

}  // namespace

static void BM_SisoDecode(bm::State& st) {
    const auto trellis = build_trellis(outer_code());
    const int steps = static_cast<int>(st.range(0));
    const auto alg = st.range(1) ? DecodeAlgorithm::ExactMap : DecodeAlgorithm::MaxLogMap;
    Philox rng(1, 1);
    std::vector<double> ch(steps * 2), ap(steps, 0.0);
    for (auto& x : ch) x = 2.0 * rng.gaussian();
    for (auto _ : st) {
        auto r = siso_decode(trellis, ch, ap, Termination::Truncated, alg);
        bm::DoNotOptimize(r.posterior_info.data());
    }
    st.SetItemsProcessed(st.iterations() * steps);
}
BENCHMARK(BM_SisoDecode)->Args({200, 0})->Args({200, 1})->Args({1000, 1});

static void BM_HctcDecode(bm::State& st) {
    const int n = static_cast<int>(st.range(0));
    const SchemeCodec codec(hctc(n));
    Philox rng(2, 2);
    std::vector<std::uint8_t> info(n);
    for (auto& b : info) b = static_cast<std::uint8_t>(rng() & 1u);
    std::vector<Interleaver> pis;
    for (std::size_t len : codec.interleaver_lengths())
        pis.push_back(make_interleaver(InterleaverKind::UniformRandomPerFrame, len, rng));
    const auto tx = codec.encode(info, pis);
    std::vector<double> llrs(tx.size());
    for (std::size_t i = 0; i < tx.size(); ++i)
        llrs[i] = (tx[i] ? 1.0 : -1.0) * 2.0 + rng.gaussian();
    DecodeConfig cfg;
    cfg.iterations = 8;
    cfg.algorithm = DecodeAlgorithm::ExactMap;
    for (auto _ : st) {
        auto r = codec.decode(llrs, pis, cfg);
        bm::DoNotOptimize(r.per_iteration.back().data());
    }
    st.SetItemsProcessed(st.iterations() * n);
}
BENCHMARK(BM_HctcDecode)->Arg(100)->Arg(200);

static void BM_EventEnumeration(bm::State& st) {
    const auto trellis = build_trellis(inner_code());
    EventLimits lim{static_cast<int>(st.range(0)), 24, 64};
    for (auto _ : st) {
        auto ev = enumerate_error_events(trellis, lim);
        bm::DoNotOptimize(ev.table.size());
    }
}
BENCHMARK(BM_EventEnumeration)->Arg(6)->Arg(12);

static void BM_ExactIowc(bm::State& st) {
    const auto trellis = build_trellis(outer_code());
    ExactIowcOptions opts;
    opts.limits.w_max = 12;
    opts.limits.h_max = 25;
    const int steps = static_cast<int>(st.range(0));
    for (auto _ : st) {
        auto ws = exact_block_iowc(trellis, steps, Termination::Truncated, opts);
        bm::DoNotOptimize(ws.table.size());
    }
}
BENCHMARK(BM_ExactIowc)->Arg(50)->Arg(200);

static void BM_HctcBoundPipeline(bm::State& st) {
    const int n = static_cast<int>(st.range(0));
    auto block = [&](const ConvCodeSpec& c) {
        const auto t = build_trellis(c);
        EventLimits probe{4, 63, 63};
        const int h_min = enumerate_error_events(t, probe).min_event_output_weight();
        return events_to_block_iowc(enumerate_error_events(t, {12, h_min + 20, 64}), n, 6);
    };
    std::vector<double> grid;
    for (double db = 0.0; db <= 14.0; db += 1.0) grid.push_back(db);
    for (auto _ : st) {
        const auto iowc = hctc_iowc(block(parity_code()), block(outer_code()), block(inner_code()),
                                    n, 2 * n);
        auto curve = union_bound(iowc, 0.25, Channel::Awgn, PepMode::Exact, grid);
        bm::DoNotOptimize(curve.points.back().second);
    }
}
BENCHMARK(BM_HctcBoundPipeline)->Arg(100)->Arg(500)->Unit(bm::kMillisecond);

static void BM_ModemRoundTrip(bm::State& st) {
    ModemConfig cfg;
    cfg.samples_per_symbol = static_cast<int>(st.range(0));
    Philox rng(3, 3);
    std::vector<std::uint8_t> bits(4096);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
    for (auto _ : st) {
        const auto traj = modulate(bits, cfg);
        const auto out = apply_channel(traj, ChannelKind::Awgn, 4.0, FadingGranularity::PerBit, rng);
        auto llr = demodulate_llr(out, cfg);
        bm::DoNotOptimize(llr.data());
    }
    st.SetItemsProcessed(st.iterations() * bits.size());
}
BENCHMARK(BM_ModemRoundTrip)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
