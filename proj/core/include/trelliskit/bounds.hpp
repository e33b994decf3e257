#pragma once

#include <string>
#include <vector>

#include "trelliskit/concat.hpp"
#include "trelliskit/numeric.hpp"
#include "trelliskit/weight_spectrum.hpp"

namespace trelliskit {

enum class Channel { Awgn, RayleighCsi };

std::string to_string(Channel channel);

// Pairwise-error-probability evaluation mode. Exact uses the Gaussian
// tail integral on AWGN and the closed-form fading average on Rayleigh;
// Chernoff uses (1/2)exp(-R d gamma) resp. (1/2)(1+R gamma)^{-d}.
enum class PepMode { Exact, Chernoff };

// Q(sqrt(2 R d gamma)); gamma is the linear Eb/N0.
double pairwise_error_awgn(int d, double rate, double gamma, PepMode mode = PepMode::Exact);
// Per-bit i.i.d. Rayleigh fading with perfect CSI, Chernoff-averaged:
// (1/2)(1 + R gamma)^{-d}.
double pairwise_error_rayleigh(int d, double rate, double gamma);
// Cross-check mode: numeric quadrature of E[Q(sqrt(2 R gamma X))] with X
// the sum of d unit-mean exponential fading powers.
double pairwise_error_rayleigh_quadrature(int d, double rate, double gamma);

double log_pep(Channel channel, PepMode mode, int d, double rate, double gamma);

struct BoundCurve {
    std::vector<std::pair<double, double>> points;  // (Eb/N0 dB, P_b)
    Channel channel = Channel::Awgn;
    PepMode pep = PepMode::Exact;
    std::string scheme_id;
    int n1 = 0;
    int n2 = 0;
    SpectrumLimits truncation;
    double rate = 0.0;
    bool asymptotic = false;
};

// Union bound P_b(gamma) = sum (w/K) A_{w,h1,h2} PEP(h1+h2, R, gamma),
// accumulated in the log domain largest-terms-first.
BoundCurve union_bound(const ConcatIowc& iowc, double rate, Channel channel, PepMode pep,
                       const std::vector<double>& ebn0_db_grid);

// Interleaver-gain analysis of the hybrid scheme: the N-exponent
// n^p + n^o + n^i - w - l - 1 maximized over event-count tuples with the
// parallel and inner codes pinned to their minimum-distance cells.
struct AsymptoticParams {
    int h_m_p = 0;   // minimum distance of the parallel code
    int h_m_i = 0;   // minimum distance of the inner code
    int d_f_o = 0;   // free distance of the outer code
    int w_m = 0;     // min input weight with error events in parallel AND outer
    int alpha = 0;   // scanned exponent at (h_m_p, h_m_i)
    double log_b_m = kLogZero;  // leading coefficient over the alpha-achieving tuples
    long long tuples_scanned = 0;
};

// The spectra must carry stratified (w,h,j) tables (event route).
// k_o and p are the outer input/output widths per trellis step.
AsymptoticParams hctc_exponent_scan(const WeightSpectrum& parallel, const WeightSpectrum& outer,
                                    const WeightSpectrum& inner, int k_o, int p);

// Same scan for the parallel concatenation; returns max n1+n2-w-1 at the
// components' minimum-distance cells (the classical value is -1 for
// recursive components).
int pccc_exponent_scan(const WeightSpectrum& first, const WeightSpectrum& second);

// P_b = B_m N^alpha Q(sqrt(2 R (h_m_p + h_m_i) gamma)); with the scanned
// exponent alpha = -d_f_o this is the asymptotic interleaver-gain bound.
BoundCurve asymptotic_bound(const AsymptoticParams& params, double rate, int n,
                            const std::vector<double>& ebn0_db_grid);

}  // namespace trelliskit
