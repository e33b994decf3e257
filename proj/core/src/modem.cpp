#include "trelliskit/modem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "trelliskit/errors.hpp"
#include "trelliskit/numeric.hpp"

namespace trelliskit {

double ModemConfig::amplitude() const { return std::sqrt(2.0 * eb / tb); }

void ModemConfig::validate(bool require_msk) const {
    if (mod_index <= 0.0) throw ConfigError("modem: mod_index must be positive");
    if (samples_per_symbol < 1) throw ConfigError("modem: samples_per_symbol must be >= 1");
    if (eb <= 0.0 || tb <= 0.0) throw ConfigError("modem: Eb and Tb must be positive");
    if (require_msk && mod_index != 0.5)
        throw ConfigError("modem: MSK mode requires mod_index = 0.5");
}

PhaseTrajectory modulate(const std::vector<std::uint8_t>& bits, const ModemConfig& config) {
    config.validate();
    if (bits.empty()) throw InputError("modulate: empty bit sequence");

    const int m = config.samples_per_symbol;
    PhaseTrajectory traj;
    traj.samples_per_symbol = m;
    traj.amplitude = config.amplitude();
    traj.dt = config.tb / m;
    traj.samples.reserve(bits.size() * m);
    traj.boundary_phase.reserve(bits.size() + 1);

    double theta = config.theta0;
    traj.boundary_phase.push_back(theta);
    const double step = M_PI * config.mod_index;
    for (std::uint8_t b : bits) {
        const double dir = (b & 1u) ? 1.0 : -1.0;
        // Midpoint sampling keeps the discrete tone correlation purely
        // imaginary, i.e. the two tones stay coherently orthogonal.
        for (int i = 0; i < m; ++i) {
            const double phase = theta + dir * step * (i + 0.5) / m;
            traj.samples.emplace_back(traj.amplitude * std::cos(phase),
                                      traj.amplitude * std::sin(phase));
        }
        theta += dir * step;
        traj.boundary_phase.push_back(theta);
    }
    return traj;
}

ChannelOutput apply_channel(const PhaseTrajectory& signal, ChannelKind kind, double ebn0_db,
                            FadingGranularity granularity, Philox& rng) {
    if (!std::isfinite(ebn0_db) && ebn0_db < 0)
        throw InputError("apply_channel: Eb/N0 must be finite or +inf");

    const std::size_t bits = signal.num_bits();
    const int m = signal.samples_per_symbol;

    ChannelOutput out;
    out.boundary_phase = signal.boundary_phase;
    out.samples_per_symbol = m;
    out.amplitude = signal.amplitude;
    out.csi.assign(bits, 1.0);

    if (kind == ChannelKind::RayleighCsi) {
        if (granularity == FadingGranularity::PerBlock) {
            const double rho = rng.rayleigh();
            out.csi.assign(bits, rho);
        } else {
            for (auto& rho : out.csi) rho = rng.rayleigh();
        }
    }

    const bool noiseless = std::isinf(ebn0_db);
    // Per-dimension sample noise variance making the matched-filter error
    // rate Q(rho sqrt(2 gamma)): sigma^2 = M A^2 / (4 gamma).
    out.noise_var = noiseless ? 0.0
                              : m * signal.amplitude * signal.amplitude /
                                    (4.0 * db_to_linear(ebn0_db));

    out.received.resize(signal.samples.size());
    const double sigma = std::sqrt(out.noise_var);
    for (std::size_t k = 0; k < bits; ++k) {
        const double rho = out.csi[k];
        for (int i = 0; i < m; ++i) {
            const std::size_t idx = k * m + i;
            std::complex<double> r = rho * signal.samples[idx];
            if (!noiseless) r += std::complex<double>(sigma * rng.gaussian(), sigma * rng.gaussian());
            out.received[idx] = r;
        }
    }
    return out;
}

std::vector<double> demodulate_llr(const ChannelOutput& output, const ModemConfig& config) {
    const std::size_t bits = output.boundary_phase.empty() ? 0 : output.boundary_phase.size() - 1;
    if (output.csi.size() != bits)
        throw InputError("demodulate_llr: csi length does not match the symbol count");
    const int m = output.samples_per_symbol;
    if (output.received.size() != bits * static_cast<std::size_t>(m))
        throw InputError("demodulate_llr: sample count does not match the symbol count");

    std::vector<double> llrs(bits);
    const double step = M_PI * config.mod_index;
    const double a = output.amplitude;
    for (std::size_t k = 0; k < bits; ++k) {
        const double theta = output.boundary_phase[k];
        double u = 0.0;
        for (int i = 0; i < m; ++i) {
            const double p1 = theta + step * (i + 0.5) / m;
            const double p0 = theta - step * (i + 0.5) / m;
            const std::complex<double> diff(a * (std::cos(p1) - std::cos(p0)),
                                            a * (std::sin(p1) - std::sin(p0)));
            const std::complex<double> r = output.received[k * m + i];
            u += r.real() * diff.real() + r.imag() * diff.imag();
        }
        if (output.noise_var == 0.0)
            llrs[k] = (u > 0.0) ? kNoiselessLlr : (u < 0.0 ? -kNoiselessLlr : 0.0);
        else
            llrs[k] = output.csi[k] * u / output.noise_var;
    }
    return llrs;
}

std::string trajectory_to_csv(const PhaseTrajectory& trajectory) {
    std::ostringstream os;
    os << "t,i,q,theta\n";
    os.precision(12);
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        const double t = (static_cast<double>(i) + 0.5) * trajectory.dt;
        const auto& s = trajectory.samples[i];
        os << t << ',' << s.real() << ',' << s.imag() << ',' << std::arg(s) << '\n';
    }
    return os.str();
}

}  // namespace trelliskit
