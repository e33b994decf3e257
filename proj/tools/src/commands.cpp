#include "trelliskit_tools/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "trelliskit/errors.hpp"
#include "trelliskit/weight_spectrum.hpp"

namespace trelliskit::tools {

namespace {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string timestamp_line() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return std::string("# generated ") + buf + "\n";
}

std::string open_path(const ToolkitConfig&, const CommandOptions& options,
                      const std::string& filename) {
    std::filesystem::create_directories(options.output_dir);
    return (std::filesystem::path(options.output_dir) / filename).string();
}

void write_file(const std::string& path, const std::string& body, const CommandOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot write '" + path + "'");
    if (options.timestamp) out << timestamp_line();
    out << body;
}

struct EventCache {
    const ToolkitConfig& config;
    std::map<std::string, EventSpectrum> events;

    const EventSpectrum& get(const ConvCodeSpec& code) {
        auto it = events.find(code.name);
        if (it != events.end()) return it->second;
        const auto trellis = build_trellis(code);
        // probe the minimum event weight, then enumerate with the margin
        EventLimits probe{4, 63, 63};
        const int h_min = enumerate_error_events(trellis, probe).min_event_output_weight();
        if (h_min < 0)
            throw ResourceError("code '" + code.name + "': no error events within probe limits");
        EventLimits lim{config.truncation.w_max, h_min + config.truncation.h_margin,
                        config.truncation.event_len_max};
        return events.emplace(code.name, enumerate_error_events(trellis, lim)).first->second;
    }

    WeightSpectrum block(const ConvCodeSpec& code, int n_steps) {
        return events_to_block_iowc(get(code), n_steps, config.truncation.j_max);
    }
};

}  // namespace

SchemeAnalysis analyze_scheme(const ToolkitConfig& config, const std::string& scheme_id) {
    const ConcatScheme& s = config.scheme(scheme_id);
    EventCache cache{config, {}};
    SchemeAnalysis a;
    a.rate = s.nominal_rate();
    switch (s.kind) {
        case SchemeKind::Hctc: {
            const int steps = s.common_steps();
            const auto sp = cache.block(s.parallel(), steps);
            const auto so = cache.block(s.outer(), steps);
            const auto si = cache.block(s.inner(), steps);
            a.iowc = hctc_iowc(sp, so, si, s.n1, s.n2);
            a.params = hctc_exponent_scan(sp, so, si, s.outer().k_in, s.outer().n_out);
            a.has_asymptotics = true;
            break;
        }
        case SchemeKind::Pccc: {
            const int steps = s.common_steps();
            a.iowc = pccc_iowc(cache.block(s.pccc_first(), steps),
                               cache.block(s.pccc_second(), steps), s.n1);
            break;
        }
        case SchemeKind::Sccc: {
            const auto so = cache.block(s.outer(), s.info_len() / s.outer().k_in);
            const auto si = cache.block(s.inner(), s.n2 / s.inner().k_in);
            a.iowc = sccc_iowc(so, si, s.n2);
            break;
        }
        case SchemeKind::Uncoded:
            throw ConfigError("scheme '" + scheme_id + "': no analytical bound for uncoded");
    }
    a.iowc.scheme_id = scheme_id;
    return a;
}

std::string cmd_spectrum(const ToolkitConfig& config, const std::string& code_id, int n_steps,
                         const CommandOptions& options) {
    const ConvCodeSpec& code = config.code(code_id);
    if (n_steps < 1) throw ConfigError("spectrum: N must be positive");

    const auto trellis = build_trellis(code);
    EventCache cache{config, {}};
    const auto& events = cache.get(code);
    const auto approx = events_to_block_iowc(events, n_steps, config.truncation.j_max);

    ExactIowcOptions opts;
    opts.limits.w_max = config.truncation.w_max;
    opts.limits.h_max = approx.limits.h_max;
    const auto exact = exact_block_iowc(trellis, n_steps, code.termination, opts);

    std::ostringstream body;
    body << "# code=" << code_id << " n_steps=" << n_steps << " termination="
         << (code.termination == Termination::Terminated ? "terminated" : "truncated")
         << " w_max=" << opts.limits.w_max << " h_max=" << opts.limits.h_max
         << " j_max=" << config.truncation.j_max
         << " events_truncated=" << (events.limits_reached ? 1 : 0) << "\n";
    for (const auto& w : exact.warnings) body << "# warning: " << w << "\n";
    body << "w,h,exact_count,approx_count\n";
    std::map<std::pair<int, int>, std::pair<BigInt, BigInt>> joined;
    for (const auto& [wh, c] : exact.table) joined[wh].first = c;
    for (const auto& [wh, c] : approx.table) joined[wh].second = c;
    for (const auto& [wh, counts] : joined)
        body << wh.first << ',' << wh.second << ',' << counts.first << ',' << counts.second
             << '\n';

    const auto path = open_path(config, options,
                                "spectrum_" + code_id + "_" + std::to_string(n_steps) + ".csv");
    write_file(path, body.str(), options);
    return path;
}

namespace {

void bound_rows(std::ostringstream& body, const BoundCurve& curve, const std::string& scheme_id,
                const std::string& kind) {
    for (const auto& [db, pb] : curve.points)
        body << format_double(db) << ',' << format_double(pb) << ',' << to_string(curve.channel)
             << ',' << scheme_id << ',' << kind << ',' << curve.n1 << ',' << curve.n2 << ','
             << format_double(curve.rate) << ',' << curve.truncation.w_max << ','
             << curve.truncation.h_max << ',' << curve.truncation.j_max << ','
             << (curve.pep == PepMode::Exact ? "exact" : "chernoff") << '\n';
}

}  // namespace

std::string cmd_bound(const ToolkitConfig& config, const std::string& scheme_id,
                      const CommandOptions& options) {
    if (config.bound.snr_grid_db.empty())
        throw ConfigError("bound: config lacks bound.snr_grid_db");
    const auto analysis = analyze_scheme(config, scheme_id);
    const ConcatScheme& s = config.scheme(scheme_id);

    std::ostringstream body;
    body << "# scheme=" << scheme_id << " kind=" << to_string(s.kind) << " rate="
         << format_double(analysis.rate)
         << " rate_convention=parity_only_parallel_info_via_serial\n";
    if (analysis.has_asymptotics) {
        const auto& p = analysis.params;
        body << "# h_m_p=" << p.h_m_p << " h_m_i=" << p.h_m_i << " d_f_o=" << p.d_f_o
             << " w_m=" << p.w_m << " alpha=" << p.alpha << " log_B_m=" << format_double(p.log_b_m)
             << "\n";
    }
    body << "ebn0_db,pb_bound,channel,scheme_id,curve,n1,n2,rate,w_max,h_max,j_max,pep\n";

    for (Channel ch : config.bound.channels) {
        auto curve = union_bound(analysis.iowc, analysis.rate, ch, config.bound.pep,
                                 config.bound.snr_grid_db);
        bound_rows(body, curve, scheme_id, "union");
    }
    if (analysis.has_asymptotics) {
        auto curve = asymptotic_bound(analysis.params, analysis.rate, s.n1,
                                      config.bound.snr_grid_db);
        curve.n2 = s.n2;
        curve.truncation = analysis.iowc.limits;
        bound_rows(body, curve, scheme_id, "asymptotic");
    }

    const auto path = open_path(config, options, "bound_" + scheme_id + ".csv");
    write_file(path, body.str(), options);
    return path;
}

namespace {

std::string sim_csv(const std::vector<SimRow>& rows) {
    std::ostringstream body;
    body << "scheme_id,n1,n2,channel,ebn0_db,iteration,bits,errors,ber,ci_lo,ci_hi,seed\n";
    for (const auto& r : rows) {
        body << r.scheme_id << ',' << r.n1 << ',' << r.n2 << ','
             << (r.channel == ChannelKind::Awgn ? "awgn" : "rayleigh_csi") << ','
             << format_double(r.ebn0_db) << ',' << r.iteration << ',' << r.bits << ',' << r.errors
             << ',' << format_double(r.ber) << ',' << format_double(r.ci_lo) << ','
             << format_double(r.ci_hi) << ',' << r.seed << '\n';
    }
    return body.str();
}

PointConfig plan_point_config(const ToolkitConfig& config, const PlanSection& plan,
                              const std::string& scheme_id, Channel channel) {
    PointConfig pc;
    pc.scheme = config.scheme(scheme_id);
    pc.channel = channel == Channel::Awgn ? ChannelKind::Awgn : ChannelKind::RayleighCsi;
    pc.fading = config.sim.fading;
    pc.modem = config.modem;
    pc.decode = config.sim.decode;
    if (plan.iterations) pc.decode.iterations = *plan.iterations;
    pc.interleavers = config.sim.interleavers;
    pc.stop = config.sim.stop;
    if (plan.min_bit_errors) pc.stop.min_bit_errors = *plan.min_bit_errors;
    if (plan.max_bits) pc.stop.max_bits = *plan.max_bits;
    pc.batch_frames = config.sim.batch_frames;
    return pc;
}

}  // namespace

std::vector<std::string> cmd_simulate(const ToolkitConfig& config, const std::string& plan_id,
                                      const CommandOptions& options, std::string* csv_path_out) {
    auto pit = config.plans.find(plan_id);
    if (pit == config.plans.end()) throw ConfigError("unknown plan id '" + plan_id + "'");
    const PlanSection& plan = pit->second;

    const auto& grid = plan.snr_grid_db ? *plan.snr_grid_db : config.sim.snr_grid_db;
    const auto& channels = plan.channels ? *plan.channels : config.sim.channels;
    if (grid.empty())
        std::cerr << "warning: plan '" << plan_id << "' has an empty SNR grid; nothing to do\n";

    std::vector<PlanEntry> entries;
    for (const auto& scheme_id : plan.schemes)
        for (Channel ch : channels)
            entries.push_back({plan_point_config(config, plan, scheme_id, ch), grid});

    const auto result = run_plan(entries, config.seed, options.threads);

    std::ostringstream body;
    for (const auto& r : result.rows)
        if (r.errors < 100 && r.iteration == config.sim.decode.iterations)
            body << "# warning: point " << r.scheme_id << " @ " << format_double(r.ebn0_db)
                 << " dB collected only " << r.errors << " errors\n";
    body << sim_csv(result.rows);
    const auto path = open_path(config, options, "sim_" + plan_id + ".csv");
    write_file(path, body.str(), options);
    if (csv_path_out) *csv_path_out = path;

    if (plan.with_bounds) {
        std::ostringstream overlay;
        overlay << "ebn0_db,pb_bound,channel,scheme_id,curve,n1,n2,rate,w_max,h_max,j_max,pep\n";
        for (const auto& scheme_id : plan.schemes) {
            if (config.scheme(scheme_id).kind == SchemeKind::Uncoded) continue;
            const auto analysis = analyze_scheme(config, scheme_id);
            for (Channel ch : channels) {
                auto curve = union_bound(analysis.iowc, analysis.rate, ch, config.bound.pep, grid);
                bound_rows(overlay, curve, scheme_id, "union");
            }
        }
        write_file(open_path(config, options, "bound_" + plan_id + ".csv"), overlay.str(),
                   options);
    }
    return result.failures;
}

std::string cmd_compare(const ToolkitConfig& config, const CommandOptions& options) {
    if (!config.compare) throw ConfigError("config lacks a compare section");
    const CompareSection& cmp = *config.compare;
    if (cmp.snr_grid_db.empty()) throw ConfigError("compare.snr_grid_db is empty");

    PlanSection plan;
    plan.schemes = cmp.schemes;
    plan.snr_grid_db = cmp.snr_grid_db;
    plan.channels = cmp.channels;

    std::ostringstream body;
    body << "scheme_id,channel,ebn0_db,pb_bound,sim_ber,sim_ci_lo,sim_ci_hi,sim_errors,sim_bits,"
            "bound_violation\n";

    std::uint64_t point_index = 0;
    for (const auto& scheme_id : cmp.schemes) {
        const auto analysis = analyze_scheme(config, scheme_id);
        for (Channel ch : cmp.channels) {
            const auto curve =
                union_bound(analysis.iowc, analysis.rate, ch, config.bound.pep, cmp.snr_grid_db);
            PointConfig pc = plan_point_config(config, plan, scheme_id, ch);
            for (std::size_t i = 0; i < cmp.snr_grid_db.size(); ++i) {
                const double db = cmp.snr_grid_db[i];
                const auto point = run_point(pc, db, config.seed, ++point_index, options.threads);
                const auto& row = point.rows.back();
                const double bound_pb = curve.points[i].second;
                const bool violation = row.errors >= 100 && row.ber > bound_pb;
                if (violation)
                    std::cerr << "warning: measured BER exceeds the union bound for " << scheme_id
                              << " at " << format_double(db) << " dB\n";
                body << scheme_id << ',' << to_string(ch) << ',' << format_double(db) << ','
                     << format_double(bound_pb) << ',' << format_double(row.ber) << ','
                     << format_double(row.ci_lo) << ',' << format_double(row.ci_hi) << ','
                     << row.errors << ',' << row.bits << ',' << (violation ? 1 : 0) << '\n';
            }
        }
    }

    const auto path = open_path(config, options, "compare.csv");
    write_file(path, body.str(), options);
    return path;
}

}  // namespace trelliskit::tools
