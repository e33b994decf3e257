#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "test_codes.hpp"
#include "trelliskit/decoders.hpp"
#include "trelliskit/errors.hpp"
#include "trelliskit/modem.hpp"
#include "trelliskit/numeric.hpp"
#include "trelliskit/rng.hpp"
#include "trelliskit/sim.hpp"
#include "trelliskit/siso.hpp"

using namespace trelliskit;

namespace {

std::vector<std::uint8_t> random_bits(std::size_t n, Philox& rng) {
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1u);
    return v;
}

std::vector<double> random_llrs(std::size_t n, Philox& rng, double scale = 3.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = scale * (2.0 * rng.uniform() - 1.0);
    return v;
}

}  // namespace

TEST_CASE("interleaver: inverse composes to the identity") {
    Philox rng(1, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        Interleaver pi(rng.permutation(24));
        const auto x = random_llrs(24, rng);
        CHECK(pi.inverse(pi.apply(x)) == x);
        CHECK(pi.apply(pi.inverse(x)) == x);
    }
    CHECK_THROWS_AS(Interleaver({0, 0, 1}), InputError);
}

TEST_CASE("siso: all-zero inputs give all-zero extrinsics") {
    for (Termination term : {Termination::Terminated, Termination::Truncated}) {
        const auto t = build_trellis(testcodes::ff75());
        const int steps = 16;
        const int tail = term == Termination::Terminated ? t.tail_steps : 0;
        const std::vector<double> ch((steps + tail) * 2, 0.0);
        const std::vector<double> ap(steps, 0.0);
        const auto r = siso_decode(t, ch, ap, term, DecodeAlgorithm::ExactMap);
        for (double v : r.extrinsic_info) CHECK(v == doctest::Approx(0.0).scale(1.0));
        for (double v : r.posterior_info) CHECK(v == doctest::Approx(0.0).scale(1.0));
        for (double v : r.extrinsic_coded) CHECK(v == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("siso: saturated LLRs on a valid codeword reproduce the info bits") {
    Philox rng(2, 2);
    const auto t = build_trellis(testcodes::outer_rsc_m2());
    const auto info = random_bits(24, rng);
    const auto cw = encode(t, info, Termination::Terminated);
    std::vector<double> ch(cw.bits.size());
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] = cw.bits[i] ? 50.0 : -50.0;
    const std::vector<double> ap(info.size(), 0.0);
    const auto r = siso_decode(t, ch, ap, Termination::Terminated, DecodeAlgorithm::ExactMap);
    for (std::size_t i = 0; i < info.size(); ++i)
        CHECK((r.posterior_info[i] > 0) == (info[i] == 1));
}

TEST_CASE("siso exact-MAP equals the exhaustive MAP oracle") {
    Philox rng(3, 3);
    for (const auto& spec : {testcodes::ff75(), testcodes::outer_rsc_m2(), testcodes::parity_m2(),
                             testcodes::inner_r23(), testcodes::rsc_m1()}) {
        const auto t = build_trellis(spec);
        for (Termination term : {Termination::Terminated, Termination::Truncated}) {
            for (int frame = 0; frame < 12; ++frame) {
                const int steps = 5;
                const int tail = term == Termination::Terminated ? t.tail_steps : 0;
                const auto ch = random_llrs((steps + tail) * t.n_out, rng);
                const auto ap = random_llrs(steps * t.k_in, rng);
                const auto got = siso_decode(t, ch, ap, term, DecodeAlgorithm::ExactMap);
                const auto want = oracles::exhaustive_map(t, ch, ap, term);
                for (std::size_t i = 0; i < ap.size(); ++i) {
                    CHECK(got.posterior_info[i] ==
                          doctest::Approx(want.posterior_info[i]).epsilon(1e-9));
                    CHECK(got.extrinsic_info[i] ==
                          doctest::Approx(want.posterior_info[i] - ap[i]).epsilon(1e-9));
                }
                for (std::size_t j = 0; j < ch.size(); ++j) {
                    // structurally pinned coded bits (tail flushing) give
                    // infinite posteriors on both sides
                    if (std::isinf(want.posterior_coded[j]))
                        CHECK(got.extrinsic_coded[j] == want.posterior_coded[j] - ch[j]);
                    else
                        CHECK(got.extrinsic_coded[j] ==
                              doctest::Approx(want.posterior_coded[j] - ch[j]).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("siso extrinsic is insensitive to the bit's own a-priori") {
    Philox rng(4, 4);
    const auto t = build_trellis(testcodes::ff75());
    const auto ch = random_llrs(2 * 18, rng);
    auto ap = random_llrs(16, rng);
    const auto base = siso_decode(t, ch, ap, Termination::Terminated, DecodeAlgorithm::ExactMap);
    for (std::size_t i : {std::size_t(0), std::size_t(7), std::size_t(15)}) {
        auto ap2 = ap;
        ap2[i] += 2.5;
        const auto mod = siso_decode(t, ch, ap2, Termination::Terminated, DecodeAlgorithm::ExactMap);
        CHECK(mod.extrinsic_info[i] == doctest::Approx(base.extrinsic_info[i]).epsilon(1e-10));
    }
}

TEST_CASE("max-log decisions agree with exact MAP at moderate SNR") {
    Philox rng(5, 5);
    const auto t = build_trellis(testcodes::ff75());
    const double gamma = db_to_linear(3.0);
    std::uint64_t agree = 0, total = 0;
    for (int frame = 0; frame < 40; ++frame) {
        const auto info = random_bits(256, rng);
        const auto cw = encode(t, info, Termination::Terminated);
        std::vector<double> ch(cw.bits.size());
        // BPSK-style LLRs at code-rate-adjusted SNR
        const double mean = 4.0 * 0.5 * gamma;
        for (std::size_t i = 0; i < ch.size(); ++i)
            ch[i] = (cw.bits[i] ? 1.0 : -1.0) * mean + std::sqrt(2.0 * mean) * rng.gaussian();
        const std::vector<double> ap(info.size(), 0.0);
        const auto ex = siso_decode(t, ch, ap, Termination::Terminated, DecodeAlgorithm::ExactMap);
        const auto ml = siso_decode(t, ch, ap, Termination::Terminated, DecodeAlgorithm::MaxLogMap);
        for (std::size_t i = 0; i < info.size(); ++i) {
            agree += (ex.posterior_info[i] > 0) == (ml.posterior_info[i] > 0);
            ++total;
        }
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("length mismatches are rejected") {
    const auto t = build_trellis(testcodes::ff75());
    CHECK_THROWS_AS(siso_decode(t, std::vector<double>(10, 0.0), std::vector<double>(4, 0.0),
                                Termination::Terminated, DecodeAlgorithm::ExactMap),
                    InputError);
}

namespace {

DecodeConfig exact_cfg(int iterations, HctcSchedule sched = HctcSchedule::InnerOuterParallel) {
    DecodeConfig cfg;
    cfg.iterations = iterations;
    cfg.algorithm = DecodeAlgorithm::ExactMap;
    cfg.schedule = sched;
    return cfg;
}

std::vector<Interleaver> draw_pis(const SchemeCodec& codec, Philox& rng) {
    std::vector<Interleaver> pis;
    for (std::size_t len : codec.interleaver_lengths())
        pis.push_back(make_interleaver(InterleaverKind::UniformRandomPerFrame, len, rng));
    return pis;
}

std::vector<double> noiseless_llrs(const std::vector<std::uint8_t>& tx) {
    std::vector<double> llrs(tx.size());
    for (std::size_t i = 0; i < tx.size(); ++i) llrs[i] = tx[i] ? 60.0 : -60.0;
    return llrs;
}

}  // namespace

TEST_CASE("noiseless decoding is exact for every scheme and schedule") {
    Philox rng(6, 6);
    std::vector<std::pair<ConcatScheme, int>> cases = {
        {testcodes::hctc_scheme(24), 1},
        {testcodes::pccc_scheme(24), 1},
        {testcodes::sccc_scheme(24), 1},
    };
    for (auto& [scheme, iters] : cases) {
        const SchemeCodec codec(scheme);
        for (int frame = 0; frame < 1000; ++frame) {
            const auto info = random_bits(codec.info_len(), rng);
            const auto pis = draw_pis(codec, rng);
            const auto tx = codec.encode(info, pis);
            const auto out = codec.decode(noiseless_llrs(tx), pis, exact_cfg(iters));
            CHECK(out.final_decisions() == info);
        }
    }
    // the alternative hybrid activation order is exact as well
    const SchemeCodec codec(testcodes::hctc_scheme(24));
    for (int frame = 0; frame < 100; ++frame) {
        const auto info = random_bits(codec.info_len(), rng);
        const auto pis = draw_pis(codec, rng);
        const auto tx = codec.encode(info, pis);
        const auto out = codec.decode(noiseless_llrs(tx), pis,
                                      exact_cfg(2, HctcSchedule::ParallelInnerOuter));
        CHECK(out.final_decisions() == info);
    }
}

TEST_CASE("decoding is deterministic") {
    Philox rng(7, 7);
    const SchemeCodec codec(testcodes::hctc_scheme(32));
    const auto info = random_bits(codec.info_len(), rng);
    const auto pis = draw_pis(codec, rng);
    const auto tx = codec.encode(info, pis);
    auto llrs = noiseless_llrs(tx);
    for (auto& l : llrs) l = l / 30.0 + rng.gaussian();  // noisy but fixed
    const auto a = codec.decode(llrs, pis, exact_cfg(4));
    const auto b = codec.decode(llrs, pis, exact_cfg(4));
    CHECK(a.per_iteration == b.per_iteration);
    CHECK(a.posterior == b.posterior);
}

TEST_CASE("decoder input validation") {
    const SchemeCodec codec(testcodes::hctc_scheme(24));
    Philox rng(8, 8);
    const auto pis = draw_pis(codec, rng);
    CHECK_THROWS_AS(codec.decode(std::vector<double>(7, 0.0), pis, exact_cfg(1)), InputError);
    std::vector<Interleaver> wrong = {Interleaver::identity(10), Interleaver::identity(48)};
    const auto info = random_bits(codec.info_len(), rng);
    CHECK_THROWS_AS(codec.encode(info, wrong), InputError);

    ConcatScheme term = testcodes::hctc_scheme(24);
    term.termination = Termination::Terminated;
    CHECK_THROWS_AS(SchemeCodec{term}, ConfigError);
}

TEST_CASE("posterior trace records every iteration") {
    Philox rng(9, 9);
    const SchemeCodec codec(testcodes::hctc_scheme(24));
    const auto info = random_bits(codec.info_len(), rng);
    const auto pis = draw_pis(codec, rng);
    const auto tx = codec.encode(info, pis);
    auto llrs = noiseless_llrs(tx);
    for (auto& l : llrs) l = l / 20.0 + rng.gaussian();
    auto cfg = exact_cfg(3);
    cfg.record_posteriors = true;
    const auto out = codec.decode(llrs, pis, cfg);
    REQUIRE(out.posterior_trace.size() == 3);
    for (const auto& trace : out.posterior_trace) CHECK(trace.size() == codec.info_len());
    CHECK(out.posterior_trace.back() == out.posterior);
    const auto csv = trace_to_csv(out);
    CHECK(csv.rfind("iteration,bit,llr\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 24);
}
