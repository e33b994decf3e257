#include "trelliskit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "trelliskit/errors.hpp"

namespace trelliskit {

std::string to_string(Channel channel) {
    return channel == Channel::Awgn ? "awgn" : "rayleigh_csi";
}

double pairwise_error_awgn(int d, double rate, double gamma, PepMode mode) {
    const double x = 2.0 * rate * d * gamma;
    if (mode == PepMode::Chernoff) return 0.5 * std::exp(-0.5 * x);
    return q_func(std::sqrt(x));
}

double pairwise_error_rayleigh(int d, double rate, double gamma) {
    return 0.5 * std::pow(1.0 + rate * gamma, -static_cast<double>(d));
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double pairwise_error_rayleigh_quadrature(int d, double rate, double gamma) {
    // X = sum of d i.i.d. unit-mean exponential fading powers, so the
    // average is the Gamma(d,1)-weighted integral of the conditional Q.
    double log_norm = 0.0;
    for (int i = 2; i < d; ++i) log_norm += std::log(static_cast<double>(i));
    auto integrand = [&](double x) -> double {
        if (x < 0.0) return 0.0;
        double logpdf;
        if (d == 1)
            logpdf = -x;
        else if (x == 0.0)
            return 0.0;
        else
            logpdf = (d - 1) * std::log(x) - x - log_norm;
        return q_func(std::sqrt(2.0 * rate * gamma * x)) * std::exp(logpdf);
    };
    // Piecewise panels keep the adaptive rule from stepping over the
    // density mass near the mode.
    const double upper = d + 48.0 + 14.0 * std::sqrt(static_cast<double>(d));
    double total = 0.0;
    double lo = 0.0;
    const double first = std::max(1.0, d / 8.0);
    for (double hi = first; lo < upper; hi = std::min(upper, hi * 2.0)) {
        total += integrate(integrand, lo, std::min(hi, upper), 1e-14);
        lo = hi;
    }
    return total;
}

double log_pep(Channel channel, PepMode mode, int d, double rate, double gamma) {
    if (channel == Channel::Awgn) {
        if (mode == PepMode::Chernoff) return std::log(0.5) - rate * d * gamma;
        return log_q(std::sqrt(2.0 * rate * d * gamma));
    }
    // Chernoff-averaged form is the default Rayleigh bound in both modes;
    // the quadrature cross-check is not a bound and stays out of curves.
    return std::log(0.5) - d * std::log1p(rate * gamma);
}

BoundCurve union_bound(const ConcatIowc& iowc, double rate, Channel channel, PepMode pep,
                       const std::vector<double>& ebn0_db_grid) {
    if (iowc.log_cells.empty()) throw InputError("union_bound: empty IOWC");

    BoundCurve curve;
    curve.channel = channel;
    curve.pep = pep;
    curve.scheme_id = iowc.scheme_id;
    curve.n1 = iowc.n1;
    curve.n2 = iowc.n2;
    curve.truncation = iowc.limits;
    curve.rate = rate;
    curve.points.reserve(ebn0_db_grid.size());

    const double log_k = std::log(static_cast<double>(iowc.info_len));
    for (double db : ebn0_db_grid) {
        const double gamma = db_to_linear(db);
        std::vector<double> terms;
        terms.reserve(iowc.log_cells.size());
        for (const auto& [cell, log_a] : iowc.log_cells) {
            const int w = std::get<0>(cell);
            if (w < 1) continue;
            const int d = std::get<1>(cell) + std::get<2>(cell);
            if (d < 1) continue;
            terms.push_back(std::log(static_cast<double>(w)) - log_k + log_a +
                            log_pep(channel, pep, d, rate, gamma));
        }
        curve.points.emplace_back(db, std::exp(log_sum(std::move(terms))));
    }
    return curve;
}

namespace {

struct StratifiedView {
    // w -> list of (j, count) at the pinned output weight.
    std::map<int, std::vector<std::pair<int, const BigInt*>>> at_h;

    StratifiedView(const WeightSpectrum& s, int h_pin) {
        for (const auto& [whj, c] : s.stratified) {
            if (std::get<1>(whj) != h_pin || c == 0) continue;
            at_h[std::get<0>(whj)].push_back({std::get<2>(whj), &c});
        }
    }
};

int min_stratified_h(const WeightSpectrum& s, const char* role) {
    int best = -1;
    for (const auto& [whj, c] : s.stratified) {
        if (std::get<2>(whj) != 1 || c == 0) continue;
        if (best < 0 || std::get<1>(whj) < best) best = std::get<1>(whj);
    }
    if (best < 0)
        throw InputError(std::string("exponent scan: ") + role +
                         " spectrum lacks stratified single-event cells");
    return best;
}

std::vector<int> single_event_w_support(const WeightSpectrum& s) {
    std::vector<int> ws;
    for (const auto& [whj, c] : s.stratified)
        if (std::get<2>(whj) == 1 && c != 0) ws.push_back(std::get<0>(whj));
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    return ws;
}

}  // namespace

AsymptoticParams hctc_exponent_scan(const WeightSpectrum& parallel, const WeightSpectrum& outer,
                                    const WeightSpectrum& inner, int k_o, int p) {
    AsymptoticParams r;
    r.h_m_p = min_stratified_h(parallel, "parallel");
    r.h_m_i = min_stratified_h(inner, "inner");
    r.d_f_o = min_stratified_h(outer, "outer");

    const auto wp = single_event_w_support(parallel);
    const auto wo = single_event_w_support(outer);
    std::vector<int> common;
    std::set_intersection(wp.begin(), wp.end(), wo.begin(), wo.end(), std::back_inserter(common));
    if (common.empty())
        throw InputError("exponent scan: no common input weight with error events in both the "
                         "parallel and outer codes within truncation");
    r.w_m = common.front();

    const StratifiedView par(parallel, r.h_m_p);
    const StratifiedView inn(inner, r.h_m_i);

    r.alpha = std::numeric_limits<int>::min();
    std::vector<std::tuple<int, int, int, int, int>> achievers;  // (w,l,np,no,ni)
    for (const auto& [wl_key, c_o] : outer.stratified) {
        if (c_o == 0) continue;
        const int w = std::get<0>(wl_key);
        const int l = std::get<1>(wl_key);
        const int no = std::get<2>(wl_key);
        auto pit = par.at_h.find(w);
        if (pit == par.at_h.end()) continue;
        auto iit = inn.at_h.find(l);
        if (iit == inn.at_h.end()) continue;
        for (const auto& [np, cp] : pit->second)
            for (const auto& [ni, ci] : iit->second) {
                ++r.tuples_scanned;
                const int exponent = np + no + ni - w - l - 1;
                if (exponent > r.alpha) {
                    r.alpha = exponent;
                    achievers.clear();
                }
                if (exponent == r.alpha) achievers.emplace_back(w, l, np, no, ni);
            }
    }
    if (achievers.empty()) throw InputError("exponent scan: no contributing tuple in truncation");

    // Leading coefficient: sum of B over the tuples achieving alpha, with
    // B = w! l! / (p^l k_o^w n^p! n^o! n^i!) (w/k_o) A^p A^o A^i.
    BigRat b_m = 0;
    for (const auto& [w, l, np, no, ni] : achievers) {
        const BigInt ap = parallel.stratified.at({w, r.h_m_p, np});
        const BigInt ao = outer.stratified.at({w, l, no});
        const BigInt ai = inner.stratified.at({l, r.h_m_i, ni});
        BigInt num = factorial(w) * factorial(l) * w * ap * ao * ai;
        BigInt den = factorial(np) * factorial(no) * factorial(ni);
        den *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(l));
        den *= boost::multiprecision::pow(BigInt(k_o), static_cast<unsigned>(w) + 1u);
        b_m += BigRat(num, den);
    }
    r.log_b_m = log_bigrat(b_m);
    return r;
}

int pccc_exponent_scan(const WeightSpectrum& first, const WeightSpectrum& second) {
    const int h_m_1 = min_stratified_h(first, "first");
    const int h_m_2 = min_stratified_h(second, "second");
    const StratifiedView v1(first, h_m_1);
    const StratifiedView v2(second, h_m_2);

    int alpha = std::numeric_limits<int>::min();
    for (const auto& [w, list1] : v1.at_h) {
        auto it2 = v2.at_h.find(w);
        if (it2 == v2.at_h.end()) continue;
        for (const auto& [n1, c1] : list1)
            for (const auto& [n2, c2] : it2->second) alpha = std::max(alpha, n1 + n2 - w - 1);
    }
    if (alpha == std::numeric_limits<int>::min())
        throw InputError("pccc exponent scan: no contributing tuple in truncation");
    return alpha;
}

BoundCurve asymptotic_bound(const AsymptoticParams& params, double rate, int n,
                            const std::vector<double>& ebn0_db_grid) {
    if (params.log_b_m == kLogZero)
        throw InputError("asymptotic_bound: params lack the leading coefficient");
    BoundCurve curve;
    curve.asymptotic = true;
    curve.rate = rate;
    curve.n1 = n;
    const int d = params.h_m_p + params.h_m_i;
    for (double db : ebn0_db_grid) {
        const double gamma = db_to_linear(db);
        const double log_p = params.log_b_m + params.alpha * std::log(static_cast<double>(n)) +
                             log_q(std::sqrt(2.0 * rate * d * gamma));
        curve.points.emplace_back(db, std::exp(log_p));
    }
    return curve;
}

}  // namespace trelliskit
