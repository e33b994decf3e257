#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "trelliskit/rng.hpp"

namespace trelliskit {

enum class FadingGranularity { PerBit, PerBlock };

// Complex-baseband CPFSK. MSK is mod_index = 0.5, the minimum tone
// spacing f0 - f1 = 1/(2 Tb) that keeps the two tones coherently
// orthogonal.
struct ModemConfig {
    double mod_index = 0.5;
    int samples_per_symbol = 8;
    double eb = 1.0;
    double tb = 1.0;
    double theta0 = 0.0;

    double amplitude() const;  // sqrt(2 Eb / Tb), the constant envelope
    // Tone spacing f0 - f1 = mod_index / Tb (1/(2 Tb) for MSK); the two
    // tones sit at +/- half the spacing around the carrier.
    double tone_separation() const { return mod_index / tb; }
    double tone_offset(int bit) const {
        return (bit ? 0.5 : -0.5) * tone_separation();
    }
    void validate(bool require_msk = false) const;
};

struct PhaseTrajectory {
    std::vector<std::complex<double>> samples;  // midpoint-sampled, M per bit
    std::vector<double> boundary_phase;         // theta at bit boundaries, size bits+1
    int samples_per_symbol = 0;
    double amplitude = 0.0;
    double dt = 0.0;  // Tb / samples_per_symbol

    std::size_t num_bits() const { return boundary_phase.empty() ? 0 : boundary_phase.size() - 1; }
};

struct ChannelOutput {
    std::vector<std::complex<double>> received;
    std::vector<double> csi;             // per-bit fading amplitude; all ones on AWGN
    std::vector<double> boundary_phase;  // known transmit trajectory (coherent detection)
    double noise_var = 0.0;              // per-dimension, per-sample
    int samples_per_symbol = 0;
    double amplitude = 0.0;
};

enum class ChannelKind { Awgn, RayleighCsi };

// Bit 1 advances the phase by +pi*mod_index over the bit, bit 0 by the
// negative; the phase is continuous at every boundary.
PhaseTrajectory modulate(const std::vector<std::uint8_t>& bits, const ModemConfig& config);

// ebn0_db is the energy per *transmitted* bit over N0. An infinite value
// is the noiseless sentinel (noise_var = 0, received = faded signal).
ChannelOutput apply_channel(const PhaseTrajectory& signal, ChannelKind kind, double ebn0_db,
                            FadingGranularity granularity, Philox& rng);

// Coherent orthogonal-tone correlation against the two per-bit reference
// trajectories, CSI-weighted; LLR = log P(bit=1|r) / P(bit=0|r).
std::vector<double> demodulate_llr(const ChannelOutput& output, const ModemConfig& config);

// Magnitude used for bit decisions when noise_var = 0.
constexpr double kNoiselessLlr = 1e12;

std::string trajectory_to_csv(const PhaseTrajectory& trajectory);

}  // namespace trelliskit
