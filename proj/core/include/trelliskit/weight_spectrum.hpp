#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "trelliskit/conv_code.hpp"
#include "trelliskit/numeric.hpp"

namespace trelliskit {

struct EventLimits {
    int w_max = 12;
    int h_max = 40;
    int len_max = 64;
};

// Exact counts of simple error events, indexed by (input weight, output
// weight, event length in trellis steps).
struct EventSpectrum {
    std::map<std::tuple<int, int, int>, BigInt> table;
    EventLimits limits;
    int k_in = 1;
    int n_out = 1;
    int memory = 0;
    // True when some path ran into a limit, i.e. events beyond the
    // truncation window exist.
    bool limits_reached = false;
    std::string code_name;

    bool empty() const { return table.empty(); }
    // Marginal over event length.
    std::map<std::pair<int, int>, BigInt> by_weight() const;
    int min_event_output_weight() const;  // h_m of the code
    int min_event_input_weight() const;   // smallest w with an event
};

struct SpectrumLimits {
    int w_max = -1;  // -1: untruncated
    int h_max = -1;
    int j_max = 6;
};

// Input-output weight coefficients A_{w,h} of the equivalent block code,
// optionally stratified by the number of concatenated error events j.
struct WeightSpectrum {
    std::map<std::pair<int, int>, BigInt> table;              // (w,h) -> count
    std::map<std::tuple<int, int, int>, BigInt> stratified;   // (w,h,j) -> count
    int n_steps = 0;
    int k_in = 1;
    int n_out = 1;
    SpectrumLimits limits;
    bool exact = false;
    Termination termination = Termination::Truncated;
    std::vector<std::string> warnings;
    std::string code_name;

    std::size_t block_info_len() const { return static_cast<std::size_t>(n_steps) * k_in; }
    BigInt at(int w, int h) const;
    int min_nonzero_h(int min_w = 1) const;
    int max_w() const;
    int max_h() const;
};

// Exhaustively count the simple error events of the trellis within the
// limits: paths leaving state 0 at step 0, off state 0 until the final
// step, remerging at state 0.
EventSpectrum enumerate_error_events(const Trellis& trellis, const EventLimits& limits);

// Block-code approximation from the event spectrum: A_{w,h,j} is the
// j-fold convolution of the single-event counts and
// A_{w,h} = sum_j C(N_steps, j) A_{w,h,j}. Event lengths enter only
// through the binomial placement factor, so the result overcounts
// near-boundary placements; the exact DP below bounds that error at
// small N.
WeightSpectrum events_to_block_iowc(const EventSpectrum& events, int n_steps, int j_max);

// Exact IOWC by forward dynamic programming over the trellis with
// bivariate weight tables. Terminated mode appends the flushing tail;
// tail outputs count toward h but tail inputs not toward w.
struct ExactIowcOptions {
    SpectrumLimits limits;                           // j_max unused here
    std::size_t memory_budget_bytes = 512ull << 20;  // DP table guard
};

WeightSpectrum exact_block_iowc(const Trellis& trellis, int n_steps, Termination termination,
                                const ExactIowcOptions& options = {});

// CSV export (columns w,h,j,count); marginal rows carry j = 0.
std::string spectrum_to_csv(const WeightSpectrum& spectrum);

}  // namespace trelliskit
