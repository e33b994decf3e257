#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "trelliskit/conv_code.hpp"
#include "trelliskit/weight_spectrum.hpp"

namespace trelliskit {

enum class SchemeKind { Pccc, Sccc, Hctc, Uncoded };

std::string to_string(SchemeKind kind);

// A concatenated scheme. The hybrid scheme transmits the parallel
// codeword (fed by the Pi1-permuted info word) followed by the inner
// codeword (inner input = Pi2-permuted outer codeword); information bits
// reach the channel only through the serial branch, so the parity-only
// parallel convention is expressed by configuring the parallel component
// as a rate-1/1 parity encoder.
struct ConcatScheme {
    SchemeKind kind = SchemeKind::Hctc;
    std::string id;
    // Hctc: {parallel, outer, inner}; Sccc: {outer, inner};
    // Pccc: {first, second}; Uncoded: {}.
    std::vector<ConvCodeSpec> components;
    int n1 = 0;  // info interleaver length (Hctc/Pccc); info length
    int n2 = 0;  // serial interleaver length (Hctc/Sccc)
    Termination termination = Termination::Truncated;
    // Count termination tails in the rate used for energy bookkeeping.
    // Off by default: nominal code rates ignore termination overhead.
    bool count_tail_in_rate = false;

    const ConvCodeSpec& parallel() const { return components.at(0); }
    const ConvCodeSpec& outer() const {
        return components.at(kind == SchemeKind::Hctc ? 1 : 0);
    }
    const ConvCodeSpec& inner() const {
        return components.at(kind == SchemeKind::Hctc ? 2 : 1);
    }
    const ConvCodeSpec& pccc_first() const { return components.at(0); }
    const ConvCodeSpec& pccc_second() const { return components.at(1); }

    int info_len() const;
    // Trellis steps per component under the common-step bookkeeping
    // N2/p = N1/k; validate() rejects schemes where this is fractional.
    int common_steps() const;
    std::size_t transmitted_len(Termination termination_mode) const;
    // Nominal rate: info bits over transmitted bits with tails excluded.
    double nominal_rate() const;
    // Rate used for Eb/N0 energy accounting; equals the nominal rate
    // unless count_tail_in_rate is set and the scheme is terminated.
    double energy_rate() const;
    void validate() const;
};

// Combined input-output weight coefficients after uniform-interleaver
// averaging. Cells are rational-valued; they are computed exactly and
// stored as natural logs. Pccc/Sccc cells use h2 = 0.
struct ConcatIowc {
    std::map<std::tuple<int, int, int>, double> log_cells;  // (w,h1,h2) -> log A
    SchemeKind kind = SchemeKind::Hctc;
    std::string scheme_id;
    int n1 = 0;
    int n2 = 0;
    int info_len = 0;
    SpectrumLimits limits;

    double log_at(int w, int h1, int h2 = 0) const;
    int min_total_weight() const;  // min h1+h2 over nonzero cells with w >= 1
};

// Uniform-interleaver combination for the hybrid scheme:
//   A_{w,h1,h2} = sum_l Ap_{w,h1} Ao_{w,l} Ai_{l,h2} / (C(N1,w) C(N2,l)).
// Exact when fed exact component spectra.
ConcatIowc hctc_iowc(const WeightSpectrum& parallel, const WeightSpectrum& outer,
                     const WeightSpectrum& inner, int n1, int n2);

// Parallel concatenation with one uniform interleaver. With
// systematic_once (the default bookkeeping) the component spectra count
// parity weight only and the cell lands at h = w + h1 + h2.
ConcatIowc pccc_iowc(const WeightSpectrum& first, const WeightSpectrum& second, int n1,
                     bool systematic_once = true);

// Serial concatenation: A_{w,h} = sum_l Ao_{w,l} Ai_{l,h} / C(N2,l).
ConcatIowc sccc_iowc(const WeightSpectrum& outer, const WeightSpectrum& inner, int n2);

}  // namespace trelliskit
