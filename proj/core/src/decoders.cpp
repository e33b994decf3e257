#include "trelliskit/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trelliskit/errors.hpp"

namespace trelliskit {

namespace {

void clamp_llrs(std::vector<double>& llrs, double clamp) {
    for (double& v : llrs) v = std::clamp(v, -clamp, clamp);
}

std::vector<std::uint8_t> hard_decisions(const std::vector<double>& llrs) {
    std::vector<std::uint8_t> bits(llrs.size());
    for (std::size_t i = 0; i < llrs.size(); ++i) bits[i] = llrs[i] > 0.0 ? 1 : 0;
    return bits;
}

std::vector<double> slice(const std::vector<double>& v, std::size_t offset, std::size_t len) {
    return std::vector<double>(v.begin() + offset, v.begin() + offset + len);
}

}  // namespace

std::string trace_to_csv(const DecodeResult& result) {
    std::ostringstream os;
    os << "iteration,bit,llr\n";
    os.precision(10);
    for (std::size_t it = 0; it < result.posterior_trace.size(); ++it)
        for (std::size_t i = 0; i < result.posterior_trace[it].size(); ++i)
            os << (it + 1) << ',' << i << ',' << result.posterior_trace[it][i] << '\n';
    return os.str();
}

Interleaver::Interleaver(std::vector<std::uint32_t> perm) : perm_(std::move(perm)) {
    std::vector<bool> seen(perm_.size(), false);
    for (std::uint32_t p : perm_) {
        if (p >= perm_.size() || seen[p])
            throw InputError("interleaver: not a permutation of [0, n)");
        seen[p] = true;
    }
}

Interleaver Interleaver::identity(std::size_t n) {
    std::vector<std::uint32_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
    return Interleaver(std::move(p));
}

void Interleaver::require(std::size_t n) const {
    if (n != perm_.size())
        throw InputError("interleaver: sequence length " + std::to_string(n) +
                         " does not match interleaver length " + std::to_string(perm_.size()));
}

SchemeCodec::SchemeCodec(const ConcatScheme& scheme) : scheme_(scheme) {
    scheme_.validate();
    if ((scheme_.kind == SchemeKind::Hctc || scheme_.kind == SchemeKind::Sccc) &&
        scheme_.termination == Termination::Terminated)
        throw ConfigError("scheme '" + scheme_.id +
                          "': serial chains need truncated components so the outer codeword "
                          "length equals N2 exactly");
    for (const auto& c : scheme_.components) trellises_.push_back(build_trellis(c));
}

std::size_t SchemeCodec::info_len() const { return scheme_.info_len(); }

std::size_t SchemeCodec::transmitted_len() const {
    return scheme_.transmitted_len(scheme_.termination);
}

std::size_t SchemeCodec::component_coded_len(std::size_t idx, int in_bits) const {
    const Trellis& t = trellises_[idx];
    const int steps = in_bits / t.k_in;
    const int tail = (scheme_.termination == Termination::Terminated) ? t.tail_steps : 0;
    return static_cast<std::size_t>(steps + tail) * t.n_out;
}

std::vector<std::size_t> SchemeCodec::interleaver_lengths() const {
    switch (scheme_.kind) {
        case SchemeKind::Hctc:
            return {static_cast<std::size_t>(scheme_.n1), static_cast<std::size_t>(scheme_.n2)};
        case SchemeKind::Pccc:
            return {static_cast<std::size_t>(scheme_.n1)};
        case SchemeKind::Sccc:
            return {static_cast<std::size_t>(scheme_.n2)};
        case SchemeKind::Uncoded:
            return {};
    }
    return {};
}

std::vector<std::uint8_t> SchemeCodec::encode(const std::vector<std::uint8_t>& info,
                                              const std::vector<Interleaver>& pis) const {
    if (info.size() != info_len())
        throw InputError("encode: info length does not match the scheme");
    const auto want = interleaver_lengths();
    if (pis.size() != want.size()) throw InputError("encode: wrong number of interleavers");
    for (std::size_t i = 0; i < want.size(); ++i)
        if (pis[i].size() != want[i]) throw InputError("encode: interleaver length mismatch");

    const Termination term = scheme_.termination;
    std::vector<std::uint8_t> tx;
    switch (scheme_.kind) {
        case SchemeKind::Uncoded:
            return info;
        case SchemeKind::Hctc: {
            // Parallel parity on the permuted info word, then the serial
            // outer -> pi2 -> inner chain carrying the information.
            const auto par = trelliskit::encode(trellises_[0], pis[0].apply(info), term).bits;
            const auto outer_cw = trelliskit::encode(trellises_[1], info, term).bits;
            const auto inner_cw =
                trelliskit::encode(trellises_[2], pis[1].apply(outer_cw), term).bits;
            tx = par;
            tx.insert(tx.end(), inner_cw.begin(), inner_cw.end());
            return tx;
        }
        case SchemeKind::Pccc: {
            const auto p1 = trelliskit::encode(trellises_[0], info, term).bits;
            const auto p2 = trelliskit::encode(trellises_[1], pis[0].apply(info), term).bits;
            tx = info;
            tx.insert(tx.end(), p1.begin(), p1.end());
            tx.insert(tx.end(), p2.begin(), p2.end());
            return tx;
        }
        case SchemeKind::Sccc: {
            const auto outer_cw = trelliskit::encode(trellises_[0], info, term).bits;
            return trelliskit::encode(trellises_[1], pis[0].apply(outer_cw), term).bits;
        }
    }
    return tx;
}

DecodeResult SchemeCodec::decode(const std::vector<double>& channel_llrs,
                                 const std::vector<Interleaver>& pis,
                                 const DecodeConfig& config) const {
    config.validate();
    if (channel_llrs.size() != transmitted_len())
        throw InputError("decode: LLR length " + std::to_string(channel_llrs.size()) +
                         " does not match the transmitted length " +
                         std::to_string(transmitted_len()));
    switch (scheme_.kind) {
        case SchemeKind::Uncoded: {
            DecodeResult r;
            r.posterior = channel_llrs;
            r.per_iteration.push_back(hard_decisions(channel_llrs));
            return r;
        }
        case SchemeKind::Hctc:
            return decode_hctc(channel_llrs, pis[0], pis[1], config);
        case SchemeKind::Pccc:
            return decode_pccc(channel_llrs, pis[0], config);
        case SchemeKind::Sccc:
            return decode_sccc(channel_llrs, pis[0], config);
    }
    throw InputError("decode: unknown scheme kind");
}

DecodeResult SchemeCodec::decode_hctc(const std::vector<double>& llrs, const Interleaver& pi1,
                                      const Interleaver& pi2, const DecodeConfig& config) const {
    const Termination term = scheme_.termination;
    const std::size_t n1 = scheme_.n1;
    const std::size_t n2 = scheme_.n2;
    const std::size_t par_len = component_coded_len(0, scheme_.n1);

    std::vector<double> ch_par = slice(llrs, 0, par_len);
    std::vector<double> ch_inner = slice(llrs, par_len, llrs.size() - par_len);
    clamp_llrs(ch_par, config.clamp);
    clamp_llrs(ch_inner, config.clamp);

    std::vector<double> apriori_inner(n2, 0.0);   // on inner input bits (pi2 domain)
    std::vector<double> apriori_outer(n1, 0.0);   // on outer info bits
    std::vector<double> ext_outer_info(n1, 0.0);  // feeds the parallel decoder

    DecodeResult result;
    for (int it = 0; it < config.iterations; ++it) {
        if (config.schedule == HctcSchedule::ParallelInnerOuter) {
            auto par = siso_decode(trellises_[0], ch_par, pi1.apply(ext_outer_info), term,
                                   config.algorithm);
            clamp_llrs(par.extrinsic_info, config.clamp);
            apriori_outer = pi1.inverse(par.extrinsic_info);

            auto inner = siso_decode(trellises_[2], ch_inner, apriori_inner, term,
                                     config.algorithm);
            clamp_llrs(inner.extrinsic_info, config.clamp);
            auto outer_ch = pi2.inverse(inner.extrinsic_info);

            auto outer = siso_decode(trellises_[1], outer_ch, apriori_outer, term,
                                     config.algorithm);
            clamp_llrs(outer.extrinsic_info, config.clamp);
            clamp_llrs(outer.extrinsic_coded, config.clamp);
            ext_outer_info = outer.extrinsic_info;
            apriori_inner = pi2.apply(outer.extrinsic_coded);

            result.per_iteration.push_back(hard_decisions(outer.posterior_info));
            if (it + 1 == config.iterations) result.posterior = outer.posterior_info;
        } else {
            // Serial branch first: inner -> outer, then the parallel
            // decoder refines the info estimate.
            auto inner = siso_decode(trellises_[2], ch_inner, apriori_inner, term,
                                     config.algorithm);
            clamp_llrs(inner.extrinsic_info, config.clamp);
            auto outer_ch = pi2.inverse(inner.extrinsic_info);

            auto outer = siso_decode(trellises_[1], outer_ch, apriori_outer, term,
                                     config.algorithm);
            clamp_llrs(outer.extrinsic_info, config.clamp);
            clamp_llrs(outer.extrinsic_coded, config.clamp);
            apriori_inner = pi2.apply(outer.extrinsic_coded);

            auto par = siso_decode(trellises_[0], ch_par, pi1.apply(outer.extrinsic_info), term,
                                   config.algorithm);
            clamp_llrs(par.extrinsic_info, config.clamp);
            apriori_outer = pi1.inverse(par.extrinsic_info);

            // The parallel posterior combines both branches' extrinsics.
            const auto posterior = pi1.inverse(par.posterior_info);
            result.per_iteration.push_back(hard_decisions(posterior));
            if (config.record_posteriors) result.posterior_trace.push_back(posterior);
            if (it + 1 == config.iterations) result.posterior = posterior;
        }
    }
    return result;
}

DecodeResult SchemeCodec::decode_pccc(const std::vector<double>& llrs, const Interleaver& pi,
                                      const DecodeConfig& config) const {
    const Termination term = scheme_.termination;
    const std::size_t n1 = scheme_.n1;
    const std::size_t len1 = component_coded_len(0, scheme_.n1);
    const std::size_t len2 = component_coded_len(1, scheme_.n1);

    std::vector<double> ch_sys = slice(llrs, 0, n1);
    std::vector<double> ch_p1 = slice(llrs, n1, len1);
    std::vector<double> ch_p2 = slice(llrs, n1 + len1, len2);
    clamp_llrs(ch_sys, config.clamp);
    clamp_llrs(ch_p1, config.clamp);
    clamp_llrs(ch_p2, config.clamp);

    const std::vector<double> ch_sys_int = pi.apply(ch_sys);
    std::vector<double> ext2(n1, 0.0);  // second decoder's extrinsic, info order

    DecodeResult result;
    for (int it = 0; it < config.iterations; ++it) {
        std::vector<double> apriori1(n1);
        for (std::size_t i = 0; i < n1; ++i)
            apriori1[i] = std::clamp(ch_sys[i] + ext2[i], -config.clamp, config.clamp);
        auto dec1 = siso_decode(trellises_[0], ch_p1, apriori1, term, config.algorithm);
        clamp_llrs(dec1.extrinsic_info, config.clamp);

        const auto ext1_int = pi.apply(dec1.extrinsic_info);
        std::vector<double> apriori2(n1);
        for (std::size_t i = 0; i < n1; ++i)
            apriori2[i] = std::clamp(ch_sys_int[i] + ext1_int[i], -config.clamp, config.clamp);
        auto dec2 = siso_decode(trellises_[1], ch_p2, apriori2, term, config.algorithm);
        clamp_llrs(dec2.extrinsic_info, config.clamp);
        ext2 = pi.inverse(dec2.extrinsic_info);

        std::vector<double> posterior(n1);
        for (std::size_t i = 0; i < n1; ++i)
            posterior[i] = ch_sys[i] + dec1.extrinsic_info[i] + ext2[i];
        result.per_iteration.push_back(hard_decisions(posterior));
        if (config.record_posteriors) result.posterior_trace.push_back(posterior);
        if (it + 1 == config.iterations) result.posterior = posterior;
    }
    return result;
}

DecodeResult SchemeCodec::decode_sccc(const std::vector<double>& llrs, const Interleaver& pi2,
                                      const DecodeConfig& config) const {
    const Termination term = scheme_.termination;
    const std::size_t n2 = scheme_.n2;
    const std::size_t info = info_len();

    std::vector<double> ch_inner = llrs;
    clamp_llrs(ch_inner, config.clamp);

    std::vector<double> apriori_inner(n2, 0.0);
    const std::vector<double> apriori_outer(info, 0.0);

    DecodeResult result;
    for (int it = 0; it < config.iterations; ++it) {
        auto inner = siso_decode(trellises_[1], ch_inner, apriori_inner, term, config.algorithm);
        clamp_llrs(inner.extrinsic_info, config.clamp);
        auto outer_ch = pi2.inverse(inner.extrinsic_info);

        auto outer = siso_decode(trellises_[0], outer_ch, apriori_outer, term, config.algorithm);
        clamp_llrs(outer.extrinsic_coded, config.clamp);
        apriori_inner = pi2.apply(outer.extrinsic_coded);

        result.per_iteration.push_back(hard_decisions(outer.posterior_info));
        if (config.record_posteriors) result.posterior_trace.push_back(outer.posterior_info);
        if (it + 1 == config.iterations) result.posterior = outer.posterior_info;
    }
    return result;
}

}  // namespace trelliskit
