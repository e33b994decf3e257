#include "trelliskit/siso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trelliskit/errors.hpp"
#include "trelliskit/numeric.hpp"

namespace trelliskit {

void DecodeConfig::validate() const {
    if (iterations < 1) throw ConfigError("decode config: iterations must be >= 1");
    if (clamp <= 0.0) throw ConfigError("decode config: clamp must be positive");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double combine(double a, double b, DecodeAlgorithm alg) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    if (alg == DecodeAlgorithm::MaxLogMap) return m;
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

SisoResult siso_decode(const Trellis& trellis, const std::vector<double>& channel_llrs,
                       const std::vector<double>& apriori_llrs, Termination termination,
                       DecodeAlgorithm algorithm) {
    const int k = trellis.k_in;
    const int n = trellis.n_out;
    if (apriori_llrs.size() % static_cast<std::size_t>(k) != 0)
        throw InputError("siso_decode: a-priori length not divisible by k_in");
    const std::size_t steps = apriori_llrs.size() / k;
    const std::size_t tail = (termination == Termination::Terminated) ? trellis.tail_steps : 0;
    const std::size_t total = steps + tail;
    if (channel_llrs.size() != total * n)
        throw InputError("siso_decode: channel LLR length " + std::to_string(channel_llrs.size()) +
                         " does not match " + std::to_string(total * n) + " coded bits");

    const int states = trellis.num_states;
    const int inputs = trellis.num_inputs();

    // Branch metric: sum of bit LLRs over the set bits of the branch
    // labels (the per-bit normalization constant is common to all
    // branches of a section and drops out). Tail sections admit only the
    // flushing branch, mirroring the encoder.
    std::vector<double> gamma(total * states * inputs, kNegInf);
    for (std::size_t t = 0; t < total; ++t) {
        const double* ch = channel_llrs.data() + t * n;
        const double* ap = (t < steps) ? apriori_llrs.data() + t * k : nullptr;
        for (int s = 0; s < states; ++s)
            for (int u = 0; u < inputs; ++u) {
                if (t >= steps && u != static_cast<int>(trellis.tail_input[s])) continue;
                double g = 0.0;
                const std::uint32_t out = trellis.out(s, u);
                for (int j = 0; j < n; ++j)
                    if ((out >> (n - 1 - j)) & 1u) g += ch[j];
                if (ap)
                    for (int i = 0; i < k; ++i)
                        if ((u >> (k - 1 - i)) & 1u) g += ap[i];
                gamma[(t * states + s) * inputs + u] = g;
            }
    }

    std::vector<double> alpha((total + 1) * states, kNegInf);
    alpha[0] = 0.0;
    for (std::size_t t = 0; t < total; ++t) {
        double* cur = alpha.data() + t * states;
        double* nxt = alpha.data() + (t + 1) * states;
        for (int s = 0; s < states; ++s) {
            if (cur[s] == kNegInf) continue;
            for (int u = 0; u < inputs; ++u) {
                const double g = gamma[(t * states + s) * inputs + u];
                if (g == kNegInf) continue;
                const int s2 = trellis.next(s, u);
                nxt[s2] = combine(nxt[s2], cur[s] + g, algorithm);
            }
        }
        const double m = *std::max_element(nxt, nxt + states);
        if (m != kNegInf)
            for (int s = 0; s < states; ++s) nxt[s] -= m;
    }

    std::vector<double> beta((total + 1) * states, kNegInf);
    if (termination == Termination::Terminated) {
        beta[total * states] = 0.0;
    } else {
        for (int s = 0; s < states; ++s) beta[total * states + s] = 0.0;
    }
    for (std::size_t t = total; t-- > 0;) {
        double* cur = beta.data() + t * states;
        const double* nxt = beta.data() + (t + 1) * states;
        for (int s = 0; s < states; ++s)
            for (int u = 0; u < inputs; ++u) {
                const double g = gamma[(t * states + s) * inputs + u];
                if (g == kNegInf) continue;
                const int s2 = trellis.next(s, u);
                if (nxt[s2] == kNegInf) continue;
                cur[s] = combine(cur[s], nxt[s2] + g, algorithm);
            }
        const double m = *std::max_element(cur, cur + states);
        if (m != kNegInf)
            for (int s = 0; s < states; ++s) cur[s] -= m;
    }

    SisoResult result;
    result.extrinsic_info.assign(steps * k, 0.0);
    result.posterior_info.assign(steps * k, 0.0);
    result.extrinsic_coded.assign(total * n, 0.0);

    std::vector<double> num(std::max(k, n)), den(std::max(k, n));
    for (std::size_t t = 0; t < total; ++t) {
        const double* a = alpha.data() + t * states;
        const double* b = beta.data() + (t + 1) * states;

        // Info-bit posteriors.
        if (t < steps) {
            std::fill(num.begin(), num.end(), kNegInf);
            std::fill(den.begin(), den.end(), kNegInf);
            for (int s = 0; s < states; ++s) {
                if (a[s] == kNegInf) continue;
                for (int u = 0; u < inputs; ++u) {
                    const double g = gamma[(t * states + s) * inputs + u];
                    if (g == kNegInf) continue;
                    const double bm = b[trellis.next(s, u)];
                    if (bm == kNegInf) continue;
                    const double metric = a[s] + g + bm;
                    for (int i = 0; i < k; ++i) {
                        if ((u >> (k - 1 - i)) & 1u)
                            num[i] = combine(num[i], metric, algorithm);
                        else
                            den[i] = combine(den[i], metric, algorithm);
                    }
                }
            }
            for (int i = 0; i < k; ++i) {
                const double post = num[i] - den[i];
                result.posterior_info[t * k + i] = post;
                result.extrinsic_info[t * k + i] = post - apriori_llrs[t * k + i];
            }
        }

        // Coded-bit posteriors (tail sections included).
        std::fill(num.begin(), num.end(), kNegInf);
        std::fill(den.begin(), den.end(), kNegInf);
        for (int s = 0; s < states; ++s) {
            if (a[s] == kNegInf) continue;
            for (int u = 0; u < inputs; ++u) {
                const double g = gamma[(t * states + s) * inputs + u];
                if (g == kNegInf) continue;
                const double bm = b[trellis.next(s, u)];
                if (bm == kNegInf) continue;
                const double metric = a[s] + g + bm;
                const std::uint32_t out = trellis.out(s, u);
                for (int j = 0; j < n; ++j) {
                    if ((out >> (n - 1 - j)) & 1u)
                        num[j] = combine(num[j], metric, algorithm);
                    else
                        den[j] = combine(den[j], metric, algorithm);
                }
            }
        }
        for (int j = 0; j < n; ++j) {
            const double post = num[j] - den[j];
            result.extrinsic_coded[t * n + j] = post - channel_llrs[t * n + j];
        }
    }
    return result;
}

}  // namespace trelliskit
