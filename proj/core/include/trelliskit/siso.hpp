#pragma once

#include <vector>

#include "trelliskit/conv_code.hpp"

namespace trelliskit {

enum class DecodeAlgorithm { ExactMap, MaxLogMap };

// Role tag kept with soft values moving between decoders.
enum class LlrRole { Channel, Apriori, Extrinsic, Posterior };

struct SoftSequence {
    std::vector<double> llrs;
    LlrRole role = LlrRole::Channel;
};

// Activation order of the three component decoders within one hybrid
// iteration.
enum class HctcSchedule { InnerOuterParallel, ParallelInnerOuter };

struct DecodeConfig {
    int iterations = 8;
    DecodeAlgorithm algorithm = DecodeAlgorithm::MaxLogMap;
    double clamp = 50.0;  // LLR saturation applied at message exchanges
    HctcSchedule schedule = HctcSchedule::InnerOuterParallel;
    // Keep the info posterior of every iteration for convergence
    // inspection (trace_to_csv).
    bool record_posteriors = false;

    void validate() const;
};

struct SisoResult {
    std::vector<double> extrinsic_info;   // posterior minus the a-priori input
    std::vector<double> extrinsic_coded;  // coded posterior minus the channel input
    std::vector<double> posterior_info;
};

// Log-domain forward-backward (BCJR) pass over one component trellis.
//
// channel_llrs covers the coded-bit grid, (steps + tail) * n_out values in
// terminated mode; apriori_llrs covers the info grid, steps * k_in values.
// Terminated codes pin both boundary state metrics to state 0. All LLRs
// are log P(bit=1)/P(bit=0).
SisoResult siso_decode(const Trellis& trellis, const std::vector<double>& channel_llrs,
                       const std::vector<double>& apriori_llrs, Termination termination,
                       DecodeAlgorithm algorithm);

}  // namespace trelliskit
