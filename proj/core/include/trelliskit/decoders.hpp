#pragma once

#include <cstdint>
#include <vector>

#include "trelliskit/concat.hpp"
#include "trelliskit/siso.hpp"

namespace trelliskit {

// A fixed permutation pi. apply() gathers (out[i] = in[pi[i]]), so a
// value attached to position i of the permuted sequence talks about
// position pi[i] of the original one and travels back through inverse().
class Interleaver {
  public:
    Interleaver() = default;
    explicit Interleaver(std::vector<std::uint32_t> perm);
    static Interleaver identity(std::size_t n);

    std::size_t size() const { return perm_.size(); }
    const std::vector<std::uint32_t>& permutation() const { return perm_; }

    template <typename T>
    std::vector<T> apply(const std::vector<T>& x) const {
        require(x.size());
        std::vector<T> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[perm_[i]];
        return y;
    }

    template <typename T>
    std::vector<T> inverse(const std::vector<T>& x) const {
        require(x.size());
        std::vector<T> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[perm_[i]] = x[i];
        return y;
    }

  private:
    void require(std::size_t n) const;
    std::vector<std::uint32_t> perm_;
};

struct DecodeResult {
    // Hard info-bit decisions after each iteration.
    std::vector<std::vector<std::uint8_t>> per_iteration;
    // Combined info posterior after the final iteration.
    std::vector<double> posterior;
    // Per-iteration info posteriors, filled when record_posteriors is set.
    std::vector<std::vector<double>> posterior_trace;

    const std::vector<std::uint8_t>& final_decisions() const { return per_iteration.back(); }
};

// Convergence trace as CSV (columns: iteration, bit, llr).
std::string trace_to_csv(const DecodeResult& result);

// Encoder/decoder pair for one configured scheme. Trellises are built
// once; encode and decode are const and safe to call from many workers.
class SchemeCodec {
  public:
    explicit SchemeCodec(const ConcatScheme& scheme);

    const ConcatScheme& scheme() const { return scheme_; }
    std::size_t info_len() const;
    std::size_t transmitted_len() const;
    double nominal_rate() const { return scheme_.nominal_rate(); }

    // Interleavers required per frame: Hctc {pi1 (N1), pi2 (N2)},
    // Pccc {pi (N1)}, Sccc {pi2 (N2)}, uncoded {}.
    std::vector<std::size_t> interleaver_lengths() const;

    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& info,
                                     const std::vector<Interleaver>& pis) const;

    // Channel LLRs over the transmitted bits in encode() order.
    DecodeResult decode(const std::vector<double>& channel_llrs,
                        const std::vector<Interleaver>& pis, const DecodeConfig& config) const;

  private:
    DecodeResult decode_hctc(const std::vector<double>& llrs, const Interleaver& pi1,
                             const Interleaver& pi2, const DecodeConfig& config) const;
    DecodeResult decode_pccc(const std::vector<double>& llrs, const Interleaver& pi,
                             const DecodeConfig& config) const;
    DecodeResult decode_sccc(const std::vector<double>& llrs, const Interleaver& pi2,
                             const DecodeConfig& config) const;

    std::size_t component_coded_len(std::size_t idx, int in_bits) const;

    ConcatScheme scheme_;
    std::vector<Trellis> trellises_;
};

}  // namespace trelliskit
