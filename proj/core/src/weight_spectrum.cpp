#include "trelliskit/weight_spectrum.hpp"

#include <algorithm>
#include <sstream>

#include "trelliskit/errors.hpp"

namespace trelliskit {

std::map<std::pair<int, int>, BigInt> EventSpectrum::by_weight() const {
    std::map<std::pair<int, int>, BigInt> m;
    for (const auto& [key, count] : table) m[{std::get<0>(key), std::get<1>(key)}] += count;
    return m;
}

int EventSpectrum::min_event_output_weight() const {
    int h = -1;
    for (const auto& [key, count] : table) {
        if (count == 0) continue;
        const int eh = std::get<1>(key);
        if (h < 0 || eh < h) h = eh;
    }
    return h;
}

int EventSpectrum::min_event_input_weight() const {
    int w = -1;
    for (const auto& [key, count] : table) {
        if (count == 0) continue;
        const int ew = std::get<0>(key);
        if (w < 0 || ew < w) w = ew;
    }
    return w;
}

BigInt WeightSpectrum::at(int w, int h) const {
    auto it = table.find({w, h});
    return it == table.end() ? BigInt(0) : it->second;
}

int WeightSpectrum::min_nonzero_h(int min_w) const {
    int best = -1;
    for (const auto& [key, count] : table) {
        if (key.first < min_w || count == 0) continue;
        if (best < 0 || key.second < best) best = key.second;
    }
    return best;
}

int WeightSpectrum::max_w() const {
    int m = 0;
    for (const auto& [key, count] : table)
        if (count != 0) m = std::max(m, key.first);
    return m;
}

int WeightSpectrum::max_h() const {
    int m = 0;
    for (const auto& [key, count] : table)
        if (count != 0) m = std::max(m, key.second);
    return m;
}

EventSpectrum enumerate_error_events(const Trellis& trellis, const EventLimits& limits) {
    if (limits.w_max < 1 || limits.h_max < 1 || limits.len_max < 1)
        throw InputError("enumerate_error_events: limits must be positive");

    EventSpectrum events;
    events.limits = limits;
    events.code_name = trellis.spec.name;
    events.k_in = trellis.k_in;
    events.n_out = trellis.n_out;
    events.memory = trellis.memory;

    const int inputs = trellis.num_inputs();
    const int wdim = limits.w_max + 1;
    const int hdim = limits.h_max + 1;
    // dp[state][w * hdim + h]: number of open paths of the current length.
    using Layer = std::vector<std::vector<BigInt>>;
    Layer dp(trellis.num_states, std::vector<BigInt>(static_cast<std::size_t>(wdim) * hdim));

    auto bump = [&](std::map<std::tuple<int, int, int>, BigInt>& tab, int w, int h, int len,
                    const BigInt& c) {
        if (w == 0 && h == 0) return;  // the all-zero step is not an event
        tab[{w, h, len}] += c;
    };

    // Step 1: leave the all-zero path.
    for (std::uint32_t u = 1; u < static_cast<std::uint32_t>(inputs); ++u) {
        const int w = popcount32(u);
        const int h = popcount32(trellis.out(0, u));
        if (w > limits.w_max || h > limits.h_max) {
            events.limits_reached = true;
            continue;
        }
        const std::uint32_t s = trellis.next(0, u);
        if (s == 0)
            bump(events.table, w, h, 1, BigInt(1));
        else
            dp[s][static_cast<std::size_t>(w) * hdim + h] += 1;
    }

    for (int len = 2; len <= limits.len_max; ++len) {
        Layer nx(trellis.num_states, std::vector<BigInt>(static_cast<std::size_t>(wdim) * hdim));
        bool open = false;
        for (int s = 1; s < trellis.num_states; ++s) {
            for (int w = 0; w < wdim; ++w)
                for (int h = 0; h < hdim; ++h) {
                    const BigInt& c = dp[s][static_cast<std::size_t>(w) * hdim + h];
                    if (c == 0) continue;
                    for (std::uint32_t u = 0; u < static_cast<std::uint32_t>(inputs); ++u) {
                        const int w2 = w + popcount32(u);
                        const int h2 = h + popcount32(trellis.out(s, u));
                        if (w2 > limits.w_max || h2 > limits.h_max) {
                            events.limits_reached = true;
                            continue;
                        }
                        const std::uint32_t s2 = trellis.next(s, u);
                        if (s2 == 0) {
                            bump(events.table, w2, h2, len, c);
                        } else {
                            nx[s2][static_cast<std::size_t>(w2) * hdim + h2] += c;
                            open = true;
                        }
                    }
                }
        }
        dp.swap(nx);
        if (!open) break;
        if (len == limits.len_max) events.limits_reached = true;
    }
    return events;
}

WeightSpectrum events_to_block_iowc(const EventSpectrum& events, int n_steps, int j_max) {
    if (j_max < 1) throw InputError("events_to_block_iowc: j_max must be >= 1");
    if (n_steps < 1) throw InputError("events_to_block_iowc: n_steps must be >= 1");

    WeightSpectrum ws;
    ws.n_steps = n_steps;
    ws.k_in = events.k_in;
    ws.n_out = events.n_out;
    ws.exact = false;
    ws.code_name = events.code_name;
    ws.limits.w_max = events.limits.w_max;
    ws.limits.h_max = events.limits.h_max;
    ws.limits.j_max = j_max;
    if (n_steps < 10 * events.memory)
        ws.warnings.push_back("n_steps < 10 x memory: the error-event block approximation is rough");

    using Cell = std::map<std::pair<int, int>, BigInt>;
    const Cell single = events.by_weight();

    // j-fold convolution of the single-event counts; positions are
    // assigned to the convolution order, so C(n_steps, j) placements and
    // the ordered product count each configuration exactly once.
    Cell current = single;
    ws.table[{0, 0}] = 1;
    for (int j = 1; j <= j_max; ++j) {
        for (const auto& [wh, c] : current) {
            ws.stratified[{wh.first, wh.second, j}] = c;
            ws.table[{wh.first, wh.second}] += binomial(n_steps, j) * c;
        }
        if (j == j_max) break;
        Cell next;
        for (const auto& [wh, c] : current)
            for (const auto& [ewh, ec] : single) {
                const int w = wh.first + ewh.first;
                const int h = wh.second + ewh.second;
                if (w > events.limits.w_max || h > events.limits.h_max) continue;
                next[{w, h}] += c * ec;
            }
        current.swap(next);
        if (current.empty()) break;
    }
    return ws;
}

WeightSpectrum exact_block_iowc(const Trellis& trellis, int n_steps, Termination termination,
                                const ExactIowcOptions& options) {
    if (n_steps < 1) throw InputError("exact_block_iowc: n_steps must be >= 1");

    const int tail = (termination == Termination::Terminated) ? trellis.tail_steps : 0;
    const int wdim = (options.limits.w_max >= 0 ? options.limits.w_max : n_steps * trellis.k_in) + 1;
    const int hdim =
        (options.limits.h_max >= 0 ? options.limits.h_max : (n_steps + tail) * trellis.n_out) + 1;

    const std::size_t cells = static_cast<std::size_t>(trellis.num_states) * wdim * hdim;
    const std::size_t estimate = 2 * cells * (sizeof(BigInt) + 16);
    if (estimate > options.memory_budget_bytes) {
        std::ostringstream msg;
        msg << "exact_block_iowc: DP table " << trellis.num_states << " states x " << wdim
            << " input weights x " << hdim << " output weights (~" << (estimate >> 20)
            << " MiB) exceeds budget " << (options.memory_budget_bytes >> 20) << " MiB";
        throw ResourceError(msg.str());
    }

    const int inputs = trellis.num_inputs();
    using Layer = std::vector<std::vector<BigInt>>;
    Layer dp(trellis.num_states, std::vector<BigInt>(static_cast<std::size_t>(wdim) * hdim));
    dp[0][0] = 1;

    for (int step = 0; step < n_steps; ++step) {
        Layer nx(trellis.num_states, std::vector<BigInt>(static_cast<std::size_t>(wdim) * hdim));
        for (int s = 0; s < trellis.num_states; ++s)
            for (int w = 0; w < wdim; ++w)
                for (int h = 0; h < hdim; ++h) {
                    const BigInt& c = dp[s][static_cast<std::size_t>(w) * hdim + h];
                    if (c == 0) continue;
                    for (std::uint32_t u = 0; u < static_cast<std::uint32_t>(inputs); ++u) {
                        const int w2 = w + popcount32(u);
                        const int h2 = h + popcount32(trellis.out(s, u));
                        if (w2 >= wdim || h2 >= hdim) continue;
                        nx[trellis.next(s, u)][static_cast<std::size_t>(w2) * hdim + h2] += c;
                    }
                }
        dp.swap(nx);
    }
    // Tail steps follow the single flushing branch; outputs still count.
    for (int step = 0; step < tail; ++step) {
        Layer nx(trellis.num_states, std::vector<BigInt>(static_cast<std::size_t>(wdim) * hdim));
        for (int s = 0; s < trellis.num_states; ++s)
            for (int w = 0; w < wdim; ++w)
                for (int h = 0; h < hdim; ++h) {
                    const BigInt& c = dp[s][static_cast<std::size_t>(w) * hdim + h];
                    if (c == 0) continue;
                    const std::uint32_t u = trellis.tail_input[s];
                    const int h2 = h + popcount32(trellis.out(s, u));
                    if (h2 >= hdim) continue;
                    nx[trellis.next(s, u)][static_cast<std::size_t>(w) * hdim + h2] += c;
                }
        dp.swap(nx);
    }

    WeightSpectrum ws;
    ws.n_steps = n_steps;
    ws.k_in = trellis.k_in;
    ws.n_out = trellis.n_out;
    ws.exact = true;
    ws.termination = termination;
    ws.code_name = trellis.spec.name;
    ws.limits.w_max = wdim - 1;
    ws.limits.h_max = hdim - 1;
    ws.limits.j_max = 0;

    const int last_state_limit = (termination == Termination::Terminated) ? 1 : trellis.num_states;
    for (int s = 0; s < last_state_limit; ++s)
        for (int w = 0; w < wdim; ++w)
            for (int h = 0; h < hdim; ++h) {
                const BigInt& c = dp[s][static_cast<std::size_t>(w) * hdim + h];
                if (c != 0) ws.table[{w, h}] += c;
            }
    return ws;
}

std::string spectrum_to_csv(const WeightSpectrum& spectrum) {
    std::ostringstream os;
    os << "w,h,j,count\n";
    for (const auto& [wh, c] : spectrum.table)
        os << wh.first << ',' << wh.second << ",0," << c << '\n';
    for (const auto& [whj, c] : spectrum.stratified)
        os << std::get<0>(whj) << ',' << std::get<1>(whj) << ',' << std::get<2>(whj) << ',' << c
           << '\n';
    return os.str();
}

}  // namespace trelliskit
