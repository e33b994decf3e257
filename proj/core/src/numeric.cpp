#include "trelliskit/numeric.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace trelliskit {

namespace {

std::mutex g_binom_mutex;
std::map<std::pair<std::int64_t, std::int64_t>, BigInt> g_binom_cache;

}  // namespace

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return BigInt(0);
    k = std::min(k, n - k);
    if (k == 0) return BigInt(1);
    {
        std::lock_guard<std::mutex> lock(g_binom_mutex);
        auto it = g_binom_cache.find({n, k});
        if (it != g_binom_cache.end()) return it->second;
    }
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;  // exact at every step: r is C(n-k+i, i)
    }
    std::lock_guard<std::mutex> lock(g_binom_mutex);
    g_binom_cache.emplace(std::make_pair(n, k), r);
    return r;
}

BigInt factorial(std::int64_t n) {
    BigInt r = 1;
    for (std::int64_t i = 2; i <= n; ++i) r *= i;
    return r;
}

double log_bigint(const BigInt& v) {
    if (v <= 0) {
        if (v == 0) return kLogZero;
        throw std::domain_error("log_bigint: negative argument");
    }
    // v = m * 2^e with m in [0.5, 1): extract the top bits exactly.
    const auto bits = boost::multiprecision::msb(v) + 1;
    if (bits <= 62) return std::log(static_cast<double>(v.convert_to<std::int64_t>()));
    const unsigned shift = static_cast<unsigned>(bits - 62);
    const BigInt top = v >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double log_bigrat(const BigRat& v) {
    const BigInt num = boost::multiprecision::numerator(v);
    const BigInt den = boost::multiprecision::denominator(v);
    if (num == 0) return kLogZero;
    return log_bigint(num) - log_bigint(den);
}

double log_add(double a, double b) {
    if (a == kLogZero) return b;
    if (b == kLogZero) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

double log_sum(std::vector<double> terms) {
    terms.erase(std::remove(terms.begin(), terms.end(), kLogZero), terms.end());
    if (terms.empty()) return kLogZero;
    std::sort(terms.begin(), terms.end(), std::greater<double>());
    const double m = terms.front();
    CompensatedSum acc;
    for (double t : terms) acc.add(std::exp(t - m));
    return m + std::log(acc.value());
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double log_q(double x) {
    if (x < 0.0) return std::log(q_func(x));
    if (x <= 35.0) return std::log(0.5) + std::log(std::erfc(x / std::sqrt(2.0)));
    // Asymptotic expansion: Q(x) ~ phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8).
    const double inv2 = 1.0 / (x * x);
    const double series = 1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * 105.0)));
    return -0.5 * x * x - 0.5 * std::log(2.0 * M_PI) - std::log(x) + std::log(series);
}

}  // namespace trelliskit
