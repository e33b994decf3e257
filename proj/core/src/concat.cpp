#include "trelliskit/concat.hpp"

#include <algorithm>
#include <sstream>

#include "trelliskit/errors.hpp"

namespace trelliskit {

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Pccc: return "PCCC";
        case SchemeKind::Sccc: return "SCCC";
        case SchemeKind::Hctc: return "HCTC";
        case SchemeKind::Uncoded: return "uncoded";
    }
    return "?";
}

int ConcatScheme::info_len() const {
    if (kind == SchemeKind::Sccc) {
        const auto& o = outer();
        return n2 * o.k_in / o.n_out;
    }
    return n1;
}

int ConcatScheme::common_steps() const {
    switch (kind) {
        case SchemeKind::Hctc:
        case SchemeKind::Pccc:
            return n1 / components.at(0).k_in;
        case SchemeKind::Sccc:
            return n2 / inner().k_in;
        case SchemeKind::Uncoded:
            return n1;
    }
    return 0;
}

std::size_t ConcatScheme::transmitted_len(Termination termination_mode) const {
    auto coded_len = [&](const ConvCodeSpec& c, int in_bits) -> std::size_t {
        const int steps = in_bits / c.k_in;
        const int tail = (termination_mode == Termination::Terminated)
                             ? build_trellis(c).tail_steps
                             : 0;
        return static_cast<std::size_t>(steps + tail) * c.n_out;
    };
    switch (kind) {
        case SchemeKind::Hctc:
            return coded_len(parallel(), n1) + coded_len(inner(), n2);
        case SchemeKind::Pccc:
            return static_cast<std::size_t>(n1) + coded_len(pccc_first(), n1) +
                   coded_len(pccc_second(), n1);
        case SchemeKind::Sccc:
            return coded_len(inner(), n2);
        case SchemeKind::Uncoded:
            return static_cast<std::size_t>(n1);
    }
    return 0;
}

double ConcatScheme::nominal_rate() const {
    return static_cast<double>(info_len()) / static_cast<double>(transmitted_len(Termination::Truncated));
}

double ConcatScheme::energy_rate() const {
    if (!count_tail_in_rate) return nominal_rate();
    return static_cast<double>(info_len()) / static_cast<double>(transmitted_len(termination));
}

void ConcatScheme::validate() const {
    std::ostringstream id_prefix;
    id_prefix << "scheme '" << id << "': ";
    const std::string p = id_prefix.str();

    const std::size_t expected =
        kind == SchemeKind::Hctc ? 3 : (kind == SchemeKind::Uncoded ? 0 : 2);
    if (components.size() != expected)
        throw ConfigError(p + "expected " + std::to_string(expected) + " component codes");
    for (const auto& c : components) c.validate();

    switch (kind) {
        case SchemeKind::Uncoded:
            if (n1 < 1) throw ConfigError(p + "N1 must be positive");
            return;
        case SchemeKind::Pccc: {
            if (n1 < 1) throw ConfigError(p + "N1 must be positive");
            if (pccc_first().k_in != pccc_second().k_in)
                throw ConfigError(p + "component input widths must match");
            if (n1 % pccc_first().k_in != 0)
                throw ConfigError(p + "N1 must be divisible by k_in");
            return;
        }
        case SchemeKind::Sccc: {
            if (n2 < 1) throw ConfigError(p + "N2 must be positive");
            const auto& o = outer();
            const auto& i = inner();
            if (n2 % o.n_out != 0 || n2 % i.k_in != 0)
                throw ConfigError(p + "N2 must be divisible by the outer n_out and inner k_in");
            if (n2 / o.n_out * o.k_in < 1) throw ConfigError(p + "empty information block");
            return;
        }
        case SchemeKind::Hctc: {
            if (n1 < 1 || n2 < 1) throw ConfigError(p + "N1 and N2 must be positive");
            const auto& cp = parallel();
            const auto& co = outer();
            const auto& ci = inner();
            if (cp.k_in != co.k_in)
                throw ConfigError(p + "needs k_p = k_o (parallel and outer input widths)");
            if (co.n_out != ci.k_in)
                throw ConfigError(p + "needs p_o = p_i (outer output width = inner input width)");
            if (n1 % co.k_in != 0) throw ConfigError(p + "N1 must be divisible by k_o");
            // N2 is the outer block-code output length.
            if (static_cast<long long>(n2) * co.k_in != static_cast<long long>(n1) * co.n_out)
                throw ConfigError(p + "requires N2 = N1 / R_c^o exactly");
            // The common per-component step count N2/p = N1/k must be integral.
            if (n2 % ci.k_in != 0 || n1 % co.k_in != 0 ||
                n2 / ci.k_in != n1 / co.k_in)
                throw ConfigError(p + "requires N2/p = N1/k to be the same integer");
            return;
        }
    }
}

double ConcatIowc::log_at(int w, int h1, int h2) const {
    auto it = log_cells.find({w, h1, h2});
    return it == log_cells.end() ? kLogZero : it->second;
}

int ConcatIowc::min_total_weight() const {
    int best = -1;
    for (const auto& [cell, v] : log_cells) {
        if (std::get<0>(cell) < 1 || v == kLogZero) continue;
        const int d = std::get<1>(cell) + std::get<2>(cell);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

namespace {

void check_steps(const WeightSpectrum& s, int steps, const char* role) {
    if (s.n_steps != steps)
        throw InputError(std::string("iowc combination: ") + role + " spectrum has " +
                         std::to_string(s.n_steps) + " steps, expected " + std::to_string(steps));
}

// Reporting metadata only; -1 marks an untruncated dimension.
SpectrumLimits merge_limits(const SpectrumLimits& a, const SpectrumLimits& b) {
    auto tighter = [](int x, int y) {
        if (x < 0) return y;
        if (y < 0) return x;
        return std::min(x, y);
    };
    SpectrumLimits m;
    m.w_max = tighter(a.w_max, b.w_max);
    m.h_max = std::max(a.h_max, b.h_max);
    m.j_max = std::max(a.j_max, b.j_max);
    return m;
}

}  // namespace

ConcatIowc hctc_iowc(const WeightSpectrum& parallel, const WeightSpectrum& outer,
                     const WeightSpectrum& inner, int n1, int n2) {
    if (static_cast<long long>(outer.n_steps) * outer.k_in != n1 ||
        static_cast<long long>(outer.n_steps) * outer.n_out != n2)
        throw InputError("hctc_iowc: outer spectrum inconsistent with N1/N2");
    check_steps(parallel, outer.n_steps, "parallel");
    check_steps(inner, outer.n_steps, "inner");
    if (static_cast<long long>(inner.n_steps) * inner.k_in != n2)
        throw InputError("hctc_iowc: inner spectrum inconsistent with N2");

    // Group the parallel table by w and the inner table by l.
    std::map<int, std::vector<std::pair<int, const BigInt*>>> par_by_w, inn_by_l;
    for (const auto& [wh, c] : parallel.table)
        if (c != 0) par_by_w[wh.first].push_back({wh.second, &c});
    for (const auto& [wh, c] : inner.table)
        if (c != 0) inn_by_l[wh.first].push_back({wh.second, &c});

    std::map<std::tuple<int, int, int>, BigRat> cells;
    for (const auto& [wl, co] : outer.table) {
        if (co == 0) continue;
        const int w = wl.first;
        const int l = wl.second;
        auto pit = par_by_w.find(w);
        auto iit = inn_by_l.find(l);
        if (pit == par_by_w.end() || iit == inn_by_l.end()) continue;
        const BigInt denom = binomial(n1, w) * binomial(n2, l);
        for (const auto& [h1, cp] : pit->second)
            for (const auto& [h2, ci] : iit->second)
                cells[{w, h1, h2}] += BigRat((*cp) * co * (*ci), denom);
    }

    ConcatIowc r;
    r.kind = SchemeKind::Hctc;
    r.n1 = n1;
    r.n2 = n2;
    r.info_len = n1;
    r.limits = merge_limits(merge_limits(parallel.limits, outer.limits), inner.limits);
    for (const auto& [cell, v] : cells)
        if (v != 0) r.log_cells[cell] = log_bigrat(v);
    return r;
}

ConcatIowc pccc_iowc(const WeightSpectrum& first, const WeightSpectrum& second, int n1,
                     bool systematic_once) {
    if (static_cast<long long>(first.n_steps) * first.k_in != n1)
        throw InputError("pccc_iowc: first spectrum inconsistent with N1");
    check_steps(second, first.n_steps, "second");

    std::map<int, std::vector<std::pair<int, const BigInt*>>> second_by_w;
    for (const auto& [wh, c] : second.table)
        if (c != 0) second_by_w[wh.first].push_back({wh.second, &c});

    std::map<std::tuple<int, int, int>, BigRat> cells;
    for (const auto& [wh, c1] : first.table) {
        if (c1 == 0) continue;
        const int w = wh.first;
        auto sit = second_by_w.find(w);
        if (sit == second_by_w.end()) continue;
        const BigInt denom = binomial(n1, w);
        for (const auto& [p2, c2] : sit->second) {
            const int h = (systematic_once ? w : 0) + wh.second + p2;
            cells[{w, h, 0}] += BigRat(c1 * (*c2), denom);
        }
    }

    ConcatIowc r;
    r.kind = SchemeKind::Pccc;
    r.n1 = n1;
    r.n2 = 0;
    r.info_len = n1;
    r.limits = merge_limits(first.limits, second.limits);
    for (const auto& [cell, v] : cells)
        if (v != 0) r.log_cells[cell] = log_bigrat(v);
    return r;
}

ConcatIowc sccc_iowc(const WeightSpectrum& outer, const WeightSpectrum& inner, int n2) {
    if (static_cast<long long>(outer.n_steps) * outer.n_out != n2)
        throw InputError("sccc_iowc: outer spectrum inconsistent with N2");
    if (static_cast<long long>(inner.n_steps) * inner.k_in != n2)
        throw InputError("sccc_iowc: inner spectrum inconsistent with N2");

    std::map<int, std::vector<std::pair<int, const BigInt*>>> inn_by_l;
    for (const auto& [wh, c] : inner.table)
        if (c != 0) inn_by_l[wh.first].push_back({wh.second, &c});

    std::map<std::tuple<int, int, int>, BigRat> cells;
    for (const auto& [wl, co] : outer.table) {
        if (co == 0) continue;
        auto iit = inn_by_l.find(wl.second);
        if (iit == inn_by_l.end()) continue;
        const BigInt denom = binomial(n2, wl.second);
        for (const auto& [h, ci] : iit->second)
            cells[{wl.first, h, 0}] += BigRat(co * (*ci), denom);
    }

    ConcatIowc r;
    r.kind = SchemeKind::Sccc;
    r.n1 = outer.n_steps * outer.k_in;
    r.n2 = n2;
    r.info_len = r.n1;
    r.limits = merge_limits(outer.limits, inner.limits);
    for (const auto& [cell, v] : cells)
        if (v != 0) r.log_cells[cell] = log_bigrat(v);
    return r;
}

}  // namespace trelliskit
