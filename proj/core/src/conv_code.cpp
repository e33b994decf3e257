#include "trelliskit/conv_code.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "trelliskit/errors.hpp"

namespace trelliskit {

namespace {

int poly_degree(std::uint32_t p) {
    if (p == 0) return 0;
    return 31 - __builtin_clz(p);
}

int register_len(const ConvCodeSpec& spec, int input) {
    int nu = 0;
    for (std::uint32_t g : spec.generators[input]) nu = std::max(nu, poly_degree(g));
    if (!spec.feedback.empty()) nu = std::max(nu, poly_degree(spec.feedback[input]));
    return nu;
}

}  // namespace

bool ConvCodeSpec::recursive() const {
    for (std::uint32_t f : feedback)
        if (f > 1) return true;
    return false;
}

void ConvCodeSpec::validate() const {
    std::ostringstream id;
    id << "code '" << name << "': ";
    if (k_in < 1 || n_out < 1 || k_in > n_out)
        throw ConfigError(id.str() + "need 1 <= k_in <= n_out");
    if (memory < 0) throw ConfigError(id.str() + "memory must be >= 0");
    if (static_cast<int>(generators.size()) != k_in)
        throw ConfigError(id.str() + "generator matrix must have k_in rows");
    for (const auto& row : generators) {
        if (static_cast<int>(row.size()) != n_out)
            throw ConfigError(id.str() + "generator matrix must have n_out columns");
        for (std::uint32_t g : row)
            if (poly_degree(g) > memory)
                throw ConfigError(id.str() + "generator polynomial degree exceeds memory");
    }
    if (!feedback.empty()) {
        if (static_cast<int>(feedback.size()) != k_in)
            throw ConfigError(id.str() + "feedback needs one polynomial per input");
        for (std::uint32_t f : feedback) {
            if (f != 0 && (f & 1u) == 0)
                throw ConfigError(id.str() + "feedback polynomial must have constant term 1");
            if (poly_degree(f) > memory)
                throw ConfigError(id.str() + "feedback polynomial degree exceeds memory");
        }
    }
    int total = 0;
    for (int i = 0; i < k_in; ++i) total += register_len(*this, i);
    if (total != memory)
        throw ConfigError(id.str() + "memory (" + std::to_string(memory) +
                          ") must equal the sum of per-input register sizes (" +
                          std::to_string(total) + ")");
}

std::uint32_t parse_octal(const std::string& s) {
    if (s.empty()) throw ConfigError("empty octal polynomial");
    std::uint32_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '7') throw ConfigError("invalid octal polynomial '" + s + "'");
        v = (v << 3) | static_cast<std::uint32_t>(c - '0');
    }
    return v;
}

Trellis build_trellis(const ConvCodeSpec& spec) {
    spec.validate();

    const int k = spec.k_in;
    const int n = spec.n_out;
    std::vector<int> nu(k), offset(k);
    int total = 0;
    for (int i = 0; i < k; ++i) {
        nu[i] = register_len(spec, i);
        offset[i] = total;
        total += nu[i];
    }

    Trellis t;
    t.spec = spec;
    t.k_in = k;
    t.n_out = n;
    t.memory = spec.memory;
    t.num_states = 1 << spec.memory;
    t.tail_steps = *std::max_element(nu.begin(), nu.end());
    t.next_state.assign(static_cast<std::size_t>(t.num_states) << k, 0);
    t.output.assign(static_cast<std::size_t>(t.num_states) << k, 0);
    t.tail_input.assign(t.num_states, 0);

    // Register i before the shift holds a_{t-1} at its MSB down to
    // a_{t-nu_i} at its LSB, so the D^d tap (d >= 1) reads bit nu_i - d.
    auto reg_tap = [&](std::uint32_t reg, int input, int d) -> std::uint32_t {
        return (reg >> (nu[input] - d)) & 1u;
    };

    for (std::uint32_t state = 0; state < static_cast<std::uint32_t>(t.num_states); ++state) {
        std::vector<std::uint32_t> reg(k);
        for (int i = 0; i < k; ++i) reg[i] = (state >> offset[i]) & ((1u << nu[i]) - 1u);

        for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
            std::uint32_t next = 0;
            std::uint32_t out = 0;
            std::vector<std::uint32_t> a(k);
            for (int i = 0; i < k; ++i) {
                const std::uint32_t u = (pattern >> (k - 1 - i)) & 1u;
                std::uint32_t fb = 0;
                if (!spec.feedback.empty() && spec.feedback[i] > 1) {
                    const std::uint32_t f = spec.feedback[i];
                    for (int d = 1; d <= nu[i]; ++d)
                        if ((f >> d) & 1u) fb ^= reg_tap(reg[i], i, d);
                }
                a[i] = u ^ fb;
                if (nu[i] > 0) {
                    const std::uint32_t shifted =
                        ((reg[i] >> 1) | (a[i] << (nu[i] - 1))) & ((1u << nu[i]) - 1u);
                    next |= shifted << offset[i];
                }
            }
            for (int j = 0; j < n; ++j) {
                std::uint32_t bit = 0;
                for (int i = 0; i < k; ++i) {
                    const std::uint32_t g = spec.generators[i][j];
                    if (g & 1u) bit ^= a[i];
                    for (int d = 1; d <= nu[i]; ++d)
                        if ((g >> d) & 1u) bit ^= reg_tap(reg[i], i, d);
                }
                out |= bit << (n - 1 - j);
            }
            t.next_state[(state << k) | pattern] = next;
            t.output[(state << k) | pattern] = out;
        }

        // The flushing input drives every register input a_i to zero.
        std::uint32_t flush = 0;
        for (int i = 0; i < k; ++i) {
            std::uint32_t fb = 0;
            if (!spec.feedback.empty() && spec.feedback[i] > 1) {
                const std::uint32_t f = spec.feedback[i];
                for (int d = 1; d <= nu[i]; ++d)
                    if ((f >> d) & 1u) fb ^= reg_tap(reg[i], i, d);
            }
            flush |= fb << (k - 1 - i);
        }
        t.tail_input[state] = flush;
    }

    if (spec.systematic_flag) {
        // Outputs 0..k_in-1 must reproduce the input bits verbatim.
        for (std::uint32_t state = 0; state < static_cast<std::uint32_t>(t.num_states); ++state)
            for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
                const std::uint32_t out = t.out(state, pattern);
                for (int i = 0; i < k; ++i)
                    if (((out >> (n - 1 - i)) & 1u) != ((pattern >> (k - 1 - i)) & 1u))
                        throw ConfigError("code '" + spec.name +
                                          "': systematic_flag set but outputs are not systematic");
            }
    }
    return t;
}

Codeword encode(const Trellis& trellis, const std::vector<std::uint8_t>& info,
                Termination termination) {
    const int k = trellis.k_in;
    const int n = trellis.n_out;
    if (info.size() % static_cast<std::size_t>(k) != 0)
        throw InputError("encode: info length " + std::to_string(info.size()) +
                         " not divisible by k_in = " + std::to_string(k));

    const std::size_t steps = info.size() / k;
    const std::size_t tail = (termination == Termination::Terminated) ? trellis.tail_steps : 0;

    Codeword cw;
    cw.info_len = info.size();
    cw.coded_len = (steps + tail) * n;
    cw.bits.reserve(cw.coded_len);

    std::uint32_t state = 0;
    for (std::size_t t = 0; t < steps; ++t) {
        std::uint32_t pattern = 0;
        for (int i = 0; i < k; ++i) pattern |= static_cast<std::uint32_t>(info[t * k + i] & 1u) << (k - 1 - i);
        const std::uint32_t out = trellis.out(state, pattern);
        for (int j = 0; j < n; ++j) cw.bits.push_back((out >> (n - 1 - j)) & 1u);
        state = trellis.next(state, pattern);
    }
    for (std::size_t t = 0; t < tail; ++t) {
        const std::uint32_t pattern = trellis.tail_input[state];
        const std::uint32_t out = trellis.out(state, pattern);
        for (int j = 0; j < n; ++j) cw.bits.push_back((out >> (n - 1 - j)) & 1u);
        state = trellis.next(state, pattern);
    }
    return cw;
}

int free_distance(const ConvCodeSpec& spec, const FreeDistanceLimits& limits) {
    const Trellis t = build_trellis(spec);
    const int inputs = t.num_inputs();
    constexpr int kInf = std::numeric_limits<int>::max() / 2;

    int best = kInf;
    std::vector<int> dist(t.num_states, kInf);

    // First step: leave the all-zero path with a nonzero input.
    for (std::uint32_t u = 1; u < static_cast<std::uint32_t>(inputs); ++u) {
        const int w = popcount32(t.out(0, u));
        if (w > limits.max_weight) continue;
        const std::uint32_t s = t.next(0, u);
        if (s == 0)
            best = std::min(best, w);  // one-step event (memoryless input)
        else
            dist[s] = std::min(dist[s], w);
    }

    for (int step = 2; step <= limits.max_event_len; ++step) {
        std::vector<int> nd(t.num_states, kInf);
        bool changed = false;
        for (std::uint32_t s = 1; s < static_cast<std::uint32_t>(t.num_states); ++s) {
            if (dist[s] >= kInf) continue;
            for (std::uint32_t u = 0; u < static_cast<std::uint32_t>(inputs); ++u) {
                const int w = dist[s] + popcount32(t.out(s, u));
                if (w > limits.max_weight) continue;
                const std::uint32_t s2 = t.next(s, u);
                if (s2 == 0) {
                    best = std::min(best, w);
                } else if (w < nd[s2]) {
                    nd[s2] = w;
                    changed = true;
                }
            }
        }
        // Keep the running minimum so longer detours never look better.
        for (int s = 0; s < t.num_states; ++s) nd[s] = std::min(nd[s], dist[s]);
        if (!changed && nd == dist) break;
        dist.swap(nd);
    }

    if (best >= kInf)
        throw LimitError("free_distance: no remerging error event within max_event_len=" +
                         std::to_string(limits.max_event_len) +
                         ", max_weight=" + std::to_string(limits.max_weight));
    return best;
}

}  // namespace trelliskit
