#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trelliskit/bounds.hpp"
#include "trelliskit/concat.hpp"
#include "trelliskit/modem.hpp"
#include "trelliskit/sim.hpp"
#include "trelliskit/siso.hpp"

namespace trelliskit::tools {

struct TruncationConfig {
    int w_max = 12;
    int h_margin = 20;  // h_max = (min event weight) + h_margin per code
    int j_max = 6;
    int event_len_max = 64;
};

struct BoundSection {
    std::vector<double> snr_grid_db;
    std::vector<Channel> channels{Channel::Awgn, Channel::RayleighCsi};
    PepMode pep = PepMode::Exact;
};

struct SimSection {
    std::vector<double> snr_grid_db;
    std::vector<Channel> channels{Channel::Awgn};
    DecodeConfig decode;
    StopRule stop;
    InterleaverKind interleavers = InterleaverKind::UniformRandomPerFrame;
    FadingGranularity fading = FadingGranularity::PerBit;
    std::uint32_t batch_frames = 256;
};

struct PlanSection {
    std::vector<std::string> schemes;
    std::optional<std::vector<double>> snr_grid_db;  // absent: inherit sim section
    std::optional<std::vector<Channel>> channels;    // absent: inherit sim section
    std::optional<int> iterations;
    std::optional<std::uint64_t> min_bit_errors;
    std::optional<std::uint64_t> max_bits;
    bool with_bounds = false;
};

struct CompareSection {
    std::vector<std::string> schemes;  // exactly three: pccc, sccc, hctc
    std::vector<Channel> channels{Channel::Awgn, Channel::RayleighCsi};
    std::vector<double> snr_grid_db;
};

// The single structured configuration document driving every command.
// Cross-references (scheme -> code ids) are resolved at load; interleaver
// divisibility constraints are enforced by ConcatScheme::validate.
struct ToolkitConfig {
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    ModemConfig modem;
    TruncationConfig truncation;
    std::map<std::string, ConvCodeSpec> codes;
    std::map<std::string, ConcatScheme> schemes;
    BoundSection bound;
    SimSection sim;
    std::map<std::string, PlanSection> plans;
    std::optional<CompareSection> compare;

    const ConcatScheme& scheme(const std::string& id) const;
    const ConvCodeSpec& code(const std::string& id) const;

    static ToolkitConfig load(const std::string& path);
    static ToolkitConfig parse(const std::string& json_text, const std::string& origin);
};

}  // namespace trelliskit::tools
