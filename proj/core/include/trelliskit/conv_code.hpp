#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trelliskit {

enum class Termination { Terminated, Truncated };

// Binary convolutional component code. Generator polynomials are octal
// values with bit i holding the coefficient of D^i, so classical table
// entries like (7,5) or (23,35) can be transcribed directly.
//
// Realization: one shift register per input. Register i has
// nu_i = max(deg of row-i generators, deg of feedback_i) cells and the sum
// of the nu_i must equal `memory`. Within a register the newest bit is the
// most significant one; registers are packed into the state integer with
// input 0 in the least significant field.
struct ConvCodeSpec {
    int k_in = 1;
    int n_out = 1;
    int memory = 0;
    // k_in rows of n_out octal generator values.
    std::vector<std::vector<std::uint32_t>> generators;
    // Empty for feedforward codes, else one octal polynomial per input.
    // Entries 0 and 1 both mean "no feedback" for that input.
    std::vector<std::uint32_t> feedback;
    bool systematic_flag = false;
    Termination termination = Termination::Terminated;
    std::string name;

    bool recursive() const;
    double rate() const { return static_cast<double>(k_in) / n_out; }
    // Throws ConfigError when the invariants do not hold.
    void validate() const;
};

std::uint32_t parse_octal(const std::string& s);

struct Trellis {
    int num_states = 1;
    int k_in = 1;
    int n_out = 1;
    int memory = 0;
    int tail_steps = 0;
    ConvCodeSpec spec;

    // Indexed by state * 2^k_in + input pattern. Input patterns enumerate
    // the k_in-tuples lexicographically (input 0 in the most significant
    // position); output patterns use the same convention.
    std::vector<std::uint32_t> next_state;
    std::vector<std::uint32_t> output;
    // Input pattern that feeds zeros into every register (flushes the
    // state); all-zero for feedforward codes.
    std::vector<std::uint32_t> tail_input;

    int num_inputs() const { return 1 << k_in; }
    std::uint32_t next(std::uint32_t state, std::uint32_t u) const {
        return next_state[(state << k_in) | u];
    }
    std::uint32_t out(std::uint32_t state, std::uint32_t u) const {
        return output[(state << k_in) | u];
    }
};

struct Codeword {
    std::vector<std::uint8_t> bits;
    std::size_t info_len = 0;
    std::size_t coded_len = 0;
};

// Deterministic trellis realization of the code; state numbering is the
// register contents read as an integer.
Trellis build_trellis(const ConvCodeSpec& spec);

// Encode an info sequence (length divisible by k_in). Terminated mode
// appends tail_steps flushing steps; their outputs count toward coded_len
// but the tail inputs are not information bits.
Codeword encode(const Trellis& trellis, const std::vector<std::uint8_t>& info,
                Termination termination);

struct FreeDistanceLimits {
    int max_event_len = 64;
    int max_weight = 64;
};

// Minimum output Hamming weight over all simple error events (paths that
// leave state zero and first return to it). Exhaustive within the limits;
// throws LimitError when no remerging event exists inside them.
int free_distance(const ConvCodeSpec& spec, const FreeDistanceLimits& limits = {});

inline int popcount32(std::uint32_t v) { return __builtin_popcount(v); }

}  // namespace trelliskit
