#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace trelliskit {

// Exact integer/rational arithmetic for codeword counts. Binomials at the
// interleaver sizes used here (N up to 1000, w up to ~25) overflow 64-bit
// integers, so all spectrum counts are arbitrary precision.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigInt binomial(std::int64_t n, std::int64_t k);
BigInt factorial(std::int64_t n);

// Natural log of a positive big integer, accurate to double precision.
double log_bigint(const BigInt& v);
// Natural log of a positive rational.
double log_bigrat(const BigRat& v);

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(e^a + e^b) without leaving the log domain.
double log_add(double a, double b);

// log(sum_i e^{t_i}), largest terms first, compensated accumulation.
double log_sum(std::vector<double> terms);

double db_to_linear(double db);

// Gaussian tail Q(x) = P(N(0,1) > x) via the complementary error integral.
double q_func(double x);
// log Q(x) for x >= 0; switches to the asymptotic tail expansion once
// erfc underflows (x beyond ~37).
double log_q(double x);

// Kahan compensated accumulator for linear-domain sums.
class CompensatedSum {
  public:
    void add(double x) {
        const double y = x - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace trelliskit
