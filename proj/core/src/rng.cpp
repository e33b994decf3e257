#include "trelliskit/rng.hpp"

#include <cmath>

namespace trelliskit {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// splitmix64 finalizer; decorrelates structured stream ids.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream) {
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    counter_ = {0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

void Philox::refill() {
    std::array<std::uint32_t, 4> x = counter_;
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, x[0], hi0, lo0);
        mulhilo(kMul1, x[2], hi1, lo1);
        x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    block_ = x;
    avail_ = 4;
    if (++counter_[0] == 0) ++counter_[1];  // 64-bit draw counter; c2/c3 hold the stream id
}

Philox::result_type Philox::operator()() {
    if (avail_ == 0) refill();
    return block_[4 - (avail_--)];
}

double Philox::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::uniform_pos() { return 1.0 - uniform(); }

std::uint64_t Philox::next_u64() {
    const std::uint64_t lo = (*this)();
    const std::uint64_t hi = (*this)();
    return lo | (hi << 32);
}

std::uint64_t Philox::below(std::uint64_t n) {
    // Rejection sampling on the top range keeps the draw unbiased.
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

double Philox::gaussian() {
    if (have_gauss_) {
        have_gauss_ = false;
        return spare_gauss_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_gauss_ = r * std::sin(a);
    have_gauss_ = true;
    return r * std::cos(a);
}

double Philox::rayleigh() { return std::sqrt(-std::log(uniform_pos())); }

std::vector<std::uint32_t> Philox::permutation(std::uint32_t n) {
    std::vector<std::uint32_t> p(n);
    for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
    for (std::uint32_t i = n; i > 1; --i) {
        const std::uint32_t j = static_cast<std::uint32_t>(below(i));
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

std::uint64_t make_stream(std::uint64_t point, std::uint64_t frame, RngPurpose purpose) {
    std::uint64_t h = mix64(point + 0x8000000000000000ull);
    h = mix64(h ^ frame);
    h = mix64(h ^ (static_cast<std::uint64_t>(purpose) << 56));
    return h;
}

}  // namespace trelliskit
