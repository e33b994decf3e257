#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "interleaver_oracle.hpp"
#include "test_codes.hpp"
#include "trelliskit/bounds.hpp"
#include "trelliskit/concat.hpp"
#include "trelliskit/decoders.hpp"
#include "trelliskit/errors.hpp"
#include "trelliskit/rng.hpp"
#include "trelliskit/weight_spectrum.hpp"

using namespace trelliskit;

namespace {

WeightSpectrum exact_spectrum(const ConvCodeSpec& spec, int n_steps) {
    return exact_block_iowc(build_trellis(spec), n_steps, Termination::Truncated);
}

WeightSpectrum event_spectrum(const ConvCodeSpec& spec, int n_steps, int w_max = 12,
                              int h_margin = 20, int j_max = 6) {
    const auto trellis = build_trellis(spec);
    EventLimits probe{4, 63, 63};
    const int h_min = enumerate_error_events(trellis, probe).min_event_output_weight();
    EventLimits lim{w_max, h_min + h_margin, 64};
    return events_to_block_iowc(enumerate_error_events(trellis, lim), n_steps, j_max);
}

ConvCodeSpec identity_rate1() { return testcodes::identity(); }

}  // namespace

TEST_CASE("scheme validation enforces the interleaver arithmetic") {
    auto s = testcodes::hctc_scheme(100);
    CHECK_NOTHROW(s.validate());
    CHECK(s.nominal_rate() == doctest::Approx(0.25));
    CHECK(s.common_steps() == 100);

    s.n2 = 201;  // not N1 / R_o
    CHECK_THROWS_AS(s.validate(), ConfigError);

    auto p = testcodes::pccc_scheme(100);
    CHECK_NOTHROW(p.validate());
    CHECK(p.nominal_rate() == doctest::Approx(1.0 / 3.0));

    auto c = testcodes::sccc_scheme(100);
    CHECK_NOTHROW(c.validate());
    CHECK(c.nominal_rate() == doctest::Approx(1.0 / 3.0));
    c.n2 = 201;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("hctc combination with identity components") {
    // All three identity codes collapse the uniform-interleaver average:
    // only the diagonal (w,w,w) cells survive, with value C(4,w).
    trelliskit::ConcatScheme s;
    const auto id = exact_spectrum(identity_rate1(), 4);
    const auto iowc = hctc_iowc(id, id, id, 4, 4);
    for (int w = 0; w <= 4; ++w) {
        CHECK(std::exp(iowc.log_at(w, w, w)) ==
              doctest::Approx(static_cast<double>(binomial(4, w))).epsilon(1e-12));
    }
    double total = 0.0;
    for (const auto& [cell, v] : iowc.log_cells) total += std::exp(v);
    CHECK(total == doctest::Approx(16.0).epsilon(1e-12));  // sum of C(4,w)
}

TEST_CASE("hctc combination matches the random-interleaver oracle") {
    const auto par = build_trellis(testcodes::tiny_parity_m1());
    const auto out = build_trellis(testcodes::tiny_outer_m1());
    const auto inn = build_trellis(testcodes::tiny_inner_m1());

    const auto iowc = hctc_iowc(exact_spectrum(testcodes::tiny_parity_m1(), 4),
                                exact_spectrum(testcodes::tiny_outer_m1(), 4),
                                exact_spectrum(testcodes::tiny_inner_m1(), 4), 4, 8);
    const auto mc = oracles::hctc_interleaver_average(par, out, inn, 4, 8, 40000, 99);

    int checked = 0;
    for (const auto& [cell, stat] : mc) {
        const double exact = std::exp(iowc.log_at(std::get<0>(cell), std::get<1>(cell),
                                                  std::get<2>(cell)));
        CHECK(std::abs(exact - stat.mean) <= 3.0 * stat.se + 1e-9);
        ++checked;
    }
    CHECK(checked > 20);
    // and no cell of the exact table is missed by the oracle support
    for (const auto& [cell, v] : iowc.log_cells)
        if (std::exp(v) > 0.05) CHECK(mc.count(cell) == 1);
}

TEST_CASE("event-route hctc combination has no cells below w_m") {
    const auto iowc =
        hctc_iowc(event_spectrum(testcodes::parity_m2(), 16),
                  event_spectrum(testcodes::outer_rsc_m2(), 16),
                  event_spectrum(testcodes::inner_r23(), 16), 16, 32);
    for (const auto& [cell, v] : iowc.log_cells) {
        const int w = std::get<0>(cell);
        CHECK((w == 0 || w >= 2));  // w_m = 2 for the recursive pair
    }
}

TEST_CASE("pccc combination: identity parity bookkeeping") {
    const auto id = exact_spectrum(identity_rate1(), 4);
    const auto iowc = pccc_iowc(id, id, 4);
    // systematic counted once: h = w + w + w
    for (int w = 0; w <= 4; ++w)
        CHECK(std::exp(iowc.log_at(w, 3 * w)) ==
              doctest::Approx(static_cast<double>(binomial(4, w))).epsilon(1e-12));
    CHECK(std::exp(iowc.log_at(0, 0)) == doctest::Approx(1.0));
    int w0_cells = 0;
    for (const auto& [cell, v] : iowc.log_cells)
        if (std::get<0>(cell) == 0) ++w0_cells;
    CHECK(w0_cells == 1);
}

TEST_CASE("pccc combination matches the random-interleaver oracle") {
    const auto sp = exact_spectrum(testcodes::tiny_parity_m1(), 6);
    const auto iowc = pccc_iowc(sp, sp, 6);
    const auto t = build_trellis(testcodes::tiny_parity_m1());
    const auto mc = oracles::pccc_interleaver_average(t, t, 6, 20000, 7);
    for (const auto& [cell, stat] : mc) {
        const double exact = std::exp(iowc.log_at(std::get<0>(cell), std::get<1>(cell)));
        CHECK(std::abs(exact - stat.mean) <= 3.0 * stat.se + 1e-9);
    }
}

TEST_CASE("sccc combination: identity outer is a pass-through") {
    const auto id = exact_spectrum(identity_rate1(), 8);
    const auto inner = exact_spectrum(testcodes::rsc_m1(), 8);
    const auto iowc = sccc_iowc(id, inner, 8);
    for (const auto& [wh, c] : inner.table)
        CHECK(std::exp(iowc.log_at(wh.first, wh.second)) ==
              doctest::Approx(static_cast<double>(c)).epsilon(1e-10));
}

TEST_CASE("sccc combination matches the random-interleaver oracle") {
    const auto iowc = sccc_iowc(exact_spectrum(testcodes::tiny_outer_m1(), 4),
                                exact_spectrum(testcodes::tiny_inner_m1(), 4), 8);
    const auto mc = oracles::sccc_interleaver_average(build_trellis(testcodes::tiny_outer_m1()),
                                                      build_trellis(testcodes::tiny_inner_m1()),
                                                      8, 20000, 21);
    for (const auto& [cell, stat] : mc) {
        const double exact = std::exp(iowc.log_at(std::get<0>(cell), std::get<1>(cell)));
        CHECK(std::abs(exact - stat.mean) <= 3.0 * stat.se + 1e-9);
    }
}

TEST_CASE("sccc coefficients nondecreasing in the l-truncation") {
    ExactIowcOptions tight, loose;
    tight.limits.h_max = 6;
    loose.limits.h_max = 10;
    const auto t_out = build_trellis(testcodes::tiny_outer_m1());
    const auto sp_tight = exact_block_iowc(t_out, 4, Termination::Truncated, tight);
    const auto sp_loose = exact_block_iowc(t_out, 4, Termination::Truncated, loose);
    const auto inner = exact_spectrum(testcodes::tiny_inner_m1(), 4);
    const auto a = sccc_iowc(sp_tight, inner, 8);
    const auto b = sccc_iowc(sp_loose, inner, 8);
    for (const auto& [cell, v] : a.log_cells) CHECK(b.log_at(std::get<0>(cell), std::get<1>(cell),
                                                             std::get<2>(cell)) >= v - 1e-12);
}

TEST_CASE("pairwise error probabilities") {
    CHECK(pairwise_error_awgn(5, 0.5, 0.0) == doctest::Approx(0.5));
    const double gamma = db_to_linear(6.0);
    CHECK(pairwise_error_awgn(5, 0.5, gamma) == doctest::Approx(4.068e-6).epsilon(0.001));
    for (int d : {1, 3, 7})
        for (double r : {0.25, 0.5})
            for (double db : {0.0, 3.0, 8.0}) {
                const double g = db_to_linear(db);
                CHECK(pairwise_error_awgn(d, r, g, PepMode::Chernoff) >=
                      pairwise_error_awgn(d, r, g, PepMode::Exact));
            }

    CHECK(pairwise_error_rayleigh(1, 0.5, 2.0) == doctest::Approx(0.25));   // R*gamma = 1
    CHECK(pairwise_error_rayleigh(3, 1.0, 9.0) == doctest::Approx(5e-4));   // (1/2)10^-3
}

TEST_CASE("rayleigh quadrature against the Monte Carlo fading oracle") {
    Philox rng(123, 77);
    for (int d : {1, 3, 5}) {
        for (double rg : {1.0, 10.0}) {
            const double quad = pairwise_error_rayleigh_quadrature(d, 1.0, rg);
            const long n = 10'000'000;
            double sum = 0.0, sum2 = 0.0;
            for (long i = 0; i < n; ++i) {
                double x = 0.0;
                for (int j = 0; j < d; ++j) {
                    const double rho = rng.rayleigh();
                    x += rho * rho;
                }
                const double q = q_func(std::sqrt(2.0 * rg * x));
                sum += q;
                sum2 += q * q;
            }
            const double mean = sum / n;
            const double se = std::sqrt((sum2 / n - mean * mean) / n);
            CHECK(std::abs(quad - mean) <= 3.0 * se);
            // the Chernoff-style closed form stays above the exact average
            CHECK(pairwise_error_rayleigh(d, 1.0, rg) >= quad);
        }
    }
}

namespace {

ConcatIowc single_cell_iowc(int w, int d, int info_len) {
    ConcatIowc iowc;
    iowc.kind = SchemeKind::Hctc;
    iowc.info_len = info_len;
    iowc.n1 = info_len;
    iowc.log_cells[{w, d, 0}] = 0.0;  // coefficient 1
    return iowc;
}

}  // namespace

TEST_CASE("union bound: one-term sum equals the PEP") {
    const auto iowc = single_cell_iowc(1, 5, 1);
    const std::vector<double> grid{0.0, 2.0, 4.0, 6.0};
    const auto curve = union_bound(iowc, 0.5, Channel::Awgn, PepMode::Exact, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(curve.points[i].second ==
              doctest::Approx(pairwise_error_awgn(5, 0.5, db_to_linear(grid[i]))).epsilon(1e-12));

    const auto ray = union_bound(iowc, 0.5, Channel::RayleighCsi, PepMode::Exact, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(ray.points[i].second ==
              doctest::Approx(pairwise_error_rayleigh(5, 0.5, db_to_linear(grid[i]))).epsilon(1e-12));

    ConcatIowc empty;
    CHECK_THROWS_AS(union_bound(empty, 0.5, Channel::Awgn, PepMode::Exact, grid), InputError);
}

TEST_CASE("union bound ordering properties on a real configuration") {
    const int n = 100;
    const auto iowc = hctc_iowc(event_spectrum(testcodes::parity_m2(), n),
                                event_spectrum(testcodes::outer_rsc_m2(), n),
                                event_spectrum(testcodes::inner_r23(), n), n, 2 * n);
    std::vector<double> grid;
    for (double db = 0.0; db <= 12.0; db += 0.5) grid.push_back(db);
    const double rate = 0.25;

    const auto awgn = union_bound(iowc, rate, Channel::Awgn, PepMode::Exact, grid);
    const auto awgn_ch = union_bound(iowc, rate, Channel::Awgn, PepMode::Chernoff, grid);
    const auto ray = union_bound(iowc, rate, Channel::RayleighCsi, PepMode::Exact, grid);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) {
            CHECK(awgn.points[i].second < awgn.points[i - 1].second);
            CHECK(ray.points[i].second < ray.points[i - 1].second);
        }
        CHECK(ray.points[i].second >= awgn_ch.points[i].second);
        CHECK(awgn_ch.points[i].second >= awgn.points[i].second);
    }
}

TEST_CASE("hctc exponent scan hits -d_f^o exactly") {
    const int n = 64;  // n_steps only scales the placement factor, not the scan
    const auto sp = event_spectrum(testcodes::parity_m2(), n);
    const auto so = event_spectrum(testcodes::outer_rsc_m2(), n);
    const auto si = event_spectrum(testcodes::inner_r23(), n);
    const auto params = hctc_exponent_scan(sp, so, si, 1, 2);
    CHECK(params.h_m_p == 2);
    CHECK(params.h_m_i == 4);
    CHECK(params.d_f_o == 5);
    CHECK(params.w_m == 2);
    CHECK(params.alpha == -5);
    CHECK(params.alpha <= -params.d_f_o);
    CHECK(std::isfinite(params.log_b_m));
    CHECK(params.tuples_scanned >= 1);
}

TEST_CASE("pccc exponent scan gives the classical -1") {
    const auto sp = event_spectrum(testcodes::parity_m2(), 64);
    CHECK(pccc_exponent_scan(sp, sp) == -1);
}

TEST_CASE("asymptotic bound: doubling N scales by 2^{-d_f^o}") {
    const auto params = hctc_exponent_scan(event_spectrum(testcodes::parity_m2(), 64),
                                           event_spectrum(testcodes::outer_rsc_m2(), 64),
                                           event_spectrum(testcodes::inner_r23(), 64), 1, 2);
    const std::vector<double> grid{4.0, 8.0};
    const auto b100 = asymptotic_bound(params, 0.25, 100, grid);
    const auto b200 = asymptotic_bound(params, 0.25, 200, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(b200.points[i].second / b100.points[i].second ==
              doctest::Approx(std::pow(2.0, -params.d_f_o)).epsilon(1e-9));
}

TEST_CASE("hctc combination is cell-exact against exhaustive interleaver pairs") {
    // 4! x 8! = 967680 pairs <= 1e6: enumerate both interleavers and
    // average exactly; the combination law must agree cell for cell.
    const auto par = build_trellis(testcodes::tiny_parity_m1());
    const auto out = build_trellis(testcodes::tiny_outer_m1());
    const auto inn = build_trellis(testcodes::tiny_inner_m1());
    const int n1 = 4, n2 = 8;

    std::vector<int> w_of(1 << n1);
    std::vector<std::vector<std::uint8_t>> outer_cw(1 << n1);
    for (std::uint32_t v = 0; v < (1u << n1); ++v) {
        std::vector<std::uint8_t> u(n1);
        for (int i = 0; i < n1; ++i) {
            u[i] = (v >> i) & 1u;
            w_of[v] += u[i];
        }
        outer_cw[v] = encode(out, u, Termination::Truncated).bits;
    }

    // all pi1: distribution of parallel weights per input
    std::vector<std::uint32_t> perm1(n1);
    for (int i = 0; i < n1; ++i) perm1[i] = i;
    std::map<std::pair<int, int>, long long> par_weight_count;  // (input v, h1) -> count
    long long n_pi1 = 0;
    do {
        ++n_pi1;
        Interleaver pi1{std::vector<std::uint32_t>(perm1)};
        for (std::uint32_t v = 0; v < (1u << n1); ++v) {
            std::vector<std::uint8_t> u(n1);
            for (int i = 0; i < n1; ++i) u[i] = (v >> i) & 1u;
            int h1 = 0;
            for (auto b : encode(par, pi1.apply(u), Termination::Truncated).bits) h1 += b;
            par_weight_count[{static_cast<int>(v), h1}]++;
        }
    } while (std::next_permutation(perm1.begin(), perm1.end()));

    // all pi2: distribution of inner weights per input
    std::vector<std::uint32_t> perm2(n2);
    for (int i = 0; i < n2; ++i) perm2[i] = i;
    std::map<std::pair<int, int>, long long> inn_weight_count;  // (input v, h2) -> count
    long long n_pi2 = 0;
    do {
        ++n_pi2;
        Interleaver pi2{std::vector<std::uint32_t>(perm2)};
        for (std::uint32_t v = 0; v < (1u << n1); ++v) {
            int h2 = 0;
            for (auto b : encode(inn, pi2.apply(outer_cw[v]), Termination::Truncated).bits) h2 += b;
            inn_weight_count[{static_cast<int>(v), h2}]++;
        }
    } while (std::next_permutation(perm2.begin(), perm2.end()));
    CHECK(n_pi1 * n_pi2 == 967680);

    // exact average over all pairs: the two interleavers are independent
    std::map<std::tuple<int, int, int>, BigRat> avg;
    for (const auto& [vh1, c1] : par_weight_count)
        for (const auto& [vh2, c2] : inn_weight_count) {
            if (vh1.first != vh2.first) continue;
            avg[{w_of[vh1.first], vh1.second, vh2.second}] +=
                BigRat(BigInt(c1) * BigInt(c2), BigInt(n_pi1) * BigInt(n_pi2));
        }

    auto spectrum = [](const ConvCodeSpec& c, int steps) {
        return exact_block_iowc(build_trellis(c), steps, Termination::Truncated);
    };
    const auto iowc = hctc_iowc(spectrum(testcodes::tiny_parity_m1(), 4),
                                spectrum(testcodes::tiny_outer_m1(), 4),
                                spectrum(testcodes::tiny_inner_m1(), 4), n1, n2);
    CHECK(avg.size() == iowc.log_cells.size());
    for (const auto& [cell, want] : avg) {
        const double got = std::exp(iowc.log_at(std::get<0>(cell), std::get<1>(cell),
                                                std::get<2>(cell)));
        CHECK(got == doctest::Approx(static_cast<double>(want)).epsilon(1e-11));
    }
}

TEST_CASE("union bound values above one are reported unclamped") {
    ConcatIowc iowc;
    iowc.info_len = 2;
    iowc.n1 = 2;
    iowc.log_cells[{1, 1, 0}] = std::log(40.0);
    const auto curve = union_bound(iowc, 0.5, Channel::Awgn, PepMode::Exact, {0.0});
    CHECK(curve.points[0].second > 1.0);
}
