#include "interleaver_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "trelliskit/decoders.hpp"
#include "trelliskit/rng.hpp"

namespace oracles {

using trelliskit::encode;
using trelliskit::Interleaver;
using trelliskit::Philox;
using trelliskit::Termination;
using trelliskit::Trellis;

namespace {

int weight(const std::vector<std::uint8_t>& bits) {
    return std::accumulate(bits.begin(), bits.end(), 0);
}

std::vector<std::uint8_t> index_bits(std::uint64_t v, int n) {
    std::vector<std::uint8_t> bits(n);
    for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((v >> i) & 1u);
    return bits;
}

struct Welford {
    std::map<std::tuple<int, int, int>, std::pair<double, double>> sums;  // sum, sum of squares
    long long samples = 0;

    void add(const std::map<std::tuple<int, int, int>, double>& sample) {
        ++samples;
        for (const auto& [cell, v] : sample) {
            auto& [s, s2] = sums[cell];
            s += v;
            s2 += v * v;
        }
    }

    CellStats finish() const {
        CellStats stats;
        const double n = static_cast<double>(samples);
        for (const auto& [cell, ss] : sums) {
            CellStat c;
            c.mean = ss.first / n;
            const double var = std::max(0.0, (ss.second - ss.first * ss.first / n) / (n - 1.0));
            c.se = std::sqrt(var / n);
            stats[cell] = c;
        }
        return stats;
    }
};

std::vector<std::vector<std::uint32_t>> all_permutations(int n) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<std::uint32_t>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

CellStats hctc_interleaver_average(const Trellis& parallel, const Trellis& outer,
                                   const Trellis& inner, int n1, int n2, int pi2_samples,
                                   std::uint64_t seed) {
    if (n1 > 8) throw std::runtime_error("hctc oracle: n1! enumeration too large");
    const std::uint64_t inputs = 1ull << n1;

    // Outer codewords and input weights are interleaver-independent.
    std::vector<int> w_of(inputs);
    std::vector<std::vector<std::uint8_t>> outer_cw(inputs);
    for (std::uint64_t v = 0; v < inputs; ++v) {
        const auto u = index_bits(v, n1);
        w_of[v] = weight(u);
        outer_cw[v] = encode(outer, u, Termination::Truncated).bits;
        if (static_cast<int>(outer_cw[v].size()) != n2)
            throw std::runtime_error("hctc oracle: outer codeword length != n2");
    }

    // Parallel weights for every (pi1, input).
    const auto pi1s = all_permutations(n1);
    std::vector<std::vector<int>> h1(pi1s.size(), std::vector<int>(inputs));
    for (std::size_t p = 0; p < pi1s.size(); ++p) {
        const Interleaver pi1(pi1s[p]);
        for (std::uint64_t v = 0; v < inputs; ++v)
            h1[p][v] = weight(encode(parallel, pi1.apply(index_bits(v, n1)), Termination::Truncated).bits);
    }

    Philox rng(seed, 0xA11CE);
    Welford acc;
    std::map<std::tuple<int, int, int>, double> sample;
    for (int s = 0; s < pi2_samples; ++s) {
        const Interleaver pi2(rng.permutation(n2));
        sample.clear();
        for (std::uint64_t v = 0; v < inputs; ++v) {
            const int h2 = weight(encode(inner, pi2.apply(outer_cw[v]), Termination::Truncated).bits);
            for (std::size_t p = 0; p < pi1s.size(); ++p)
                sample[{w_of[v], h1[p][v], h2}] += 1.0;
        }
        const double norm = 1.0 / static_cast<double>(pi1s.size());
        for (auto& [cell, c] : sample) c *= norm;
        acc.add(sample);
    }
    return acc.finish();
}

CellStats pccc_interleaver_average(const Trellis& first, const Trellis& second, int n1,
                                   int samples, std::uint64_t seed) {
    const std::uint64_t inputs = 1ull << n1;
    std::vector<int> w_of(inputs), p1(inputs);
    for (std::uint64_t v = 0; v < inputs; ++v) {
        const auto u = index_bits(v, n1);
        w_of[v] = weight(u);
        p1[v] = weight(encode(first, u, Termination::Truncated).bits);
    }

    Philox rng(seed, 0xB0B);
    Welford acc;
    std::map<std::tuple<int, int, int>, double> sample;
    for (int s = 0; s < samples; ++s) {
        const Interleaver pi(rng.permutation(n1));
        sample.clear();
        for (std::uint64_t v = 0; v < inputs; ++v) {
            const int p2 = weight(encode(second, pi.apply(index_bits(v, n1)), Termination::Truncated).bits);
            sample[{w_of[v], w_of[v] + p1[v] + p2, 0}] += 1.0;
        }
        acc.add(sample);
    }
    return acc.finish();
}

CellStats sccc_interleaver_average(const Trellis& outer, const Trellis& inner, int n2,
                                   int samples, std::uint64_t seed) {
    const int k = outer.k_in;
    const int info_len = n2 * k / outer.n_out;
    const std::uint64_t inputs = 1ull << info_len;
    std::vector<int> w_of(inputs);
    std::vector<std::vector<std::uint8_t>> outer_cw(inputs);
    for (std::uint64_t v = 0; v < inputs; ++v) {
        const auto u = index_bits(v, info_len);
        w_of[v] = weight(u);
        outer_cw[v] = encode(outer, u, Termination::Truncated).bits;
    }

    Philox rng(seed, 0x5CCC);
    Welford acc;
    std::map<std::tuple<int, int, int>, double> sample;
    for (int s = 0; s < samples; ++s) {
        const Interleaver pi2(rng.permutation(n2));
        sample.clear();
        for (std::uint64_t v = 0; v < inputs; ++v) {
            const int h = weight(encode(inner, pi2.apply(outer_cw[v]), Termination::Truncated).bits);
            sample[{w_of[v], h, 0}] += 1.0;
        }
        acc.add(sample);
    }
    return acc.finish();
}

}  // namespace oracles
