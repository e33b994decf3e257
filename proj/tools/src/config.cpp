#include "trelliskit_tools/config.hpp"

#include <fstream>
#include <json.hpp>
#include <cctype>
#include <sstream>

#include "trelliskit/errors.hpp"

namespace trelliskit::tools {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw ConfigError(origin + ": " + what);
}

double parse_snr(const json& v, const std::string& origin) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        fail(origin, "SNR entries must be numbers or \"inf\"");
    }
    fail(origin, "SNR entries must be numbers or \"inf\"");
}

std::vector<double> parse_grid(const json& v, const std::string& origin) {
    std::vector<double> grid;
    for (const auto& e : v) grid.push_back(parse_snr(e, origin));
    return grid;
}

Channel parse_channel(const std::string& s, const std::string& origin) {
    if (s == "awgn") return Channel::Awgn;
    if (s == "rayleigh_csi" || s == "rayleigh") return Channel::RayleighCsi;
    fail(origin, "unknown channel '" + s + "' (awgn | rayleigh_csi)");
}

std::vector<Channel> parse_channels(const json& v, const std::string& origin) {
    std::vector<Channel> out;
    for (const auto& e : v) out.push_back(parse_channel(e.get<std::string>(), origin));
    return out;
}

Termination parse_termination(const std::string& s, const std::string& origin) {
    if (s == "terminated") return Termination::Terminated;
    if (s == "truncated") return Termination::Truncated;
    fail(origin, "unknown termination '" + s + "' (terminated | truncated)");
}

bool valid_id(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

ConvCodeSpec parse_code(const std::string& id, const json& j, const std::string& origin) {
    if (!valid_id(id)) fail(origin, "code id '" + id + "' must be [A-Za-z0-9_.-]+");
    ConvCodeSpec c;
    c.name = id;
    c.k_in = j.value("k", 1);
    c.n_out = j.value("n", 1);
    c.memory = j.value("memory", 0);
    if (!j.contains("generators")) fail(origin, "code '" + id + "' lacks generators");
    for (const auto& row : j.at("generators")) {
        std::vector<std::uint32_t> r;
        for (const auto& g : row) r.push_back(parse_octal(g.get<std::string>()));
        c.generators.push_back(std::move(r));
    }
    if (j.contains("feedback"))
        for (const auto& f : j.at("feedback")) c.feedback.push_back(parse_octal(f.get<std::string>()));
    c.systematic_flag = j.value("systematic", false);
    c.termination = parse_termination(j.value("termination", "terminated"), origin);
    c.validate();
    return c;
}

}  // namespace

const ConcatScheme& ToolkitConfig::scheme(const std::string& id) const {
    auto it = schemes.find(id);
    if (it == schemes.end()) throw ConfigError("unknown scheme id '" + id + "'");
    return it->second;
}

const ConvCodeSpec& ToolkitConfig::code(const std::string& id) const {
    auto it = codes.find(id);
    if (it == codes.end()) throw ConfigError("unknown code id '" + id + "'");
    return it->second;
}

ToolkitConfig ToolkitConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

ToolkitConfig ToolkitConfig::parse(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("invalid JSON: ") + e.what());
    }

    ToolkitConfig cfg;
    cfg.seed = j.value("seed", 1ull);
    cfg.output_dir = j.value("output_dir", std::string("out"));

    if (j.contains("modem")) {
        const auto& m = j.at("modem");
        cfg.modem.mod_index = m.value("mod_index", 0.5);
        cfg.modem.samples_per_symbol = m.value("samples_per_symbol", 8);
        cfg.modem.eb = m.value("eb", 1.0);
        cfg.modem.tb = m.value("tb", 1.0);
        cfg.modem.theta0 = m.value("theta0", 0.0);
        cfg.modem.validate();
    }

    if (j.contains("truncation")) {
        const auto& t = j.at("truncation");
        cfg.truncation.w_max = t.value("w_max", 12);
        cfg.truncation.h_margin = t.value("h_margin", 20);
        cfg.truncation.j_max = t.value("j_max", 6);
        cfg.truncation.event_len_max = t.value("event_len_max", 64);
        if (cfg.truncation.w_max < 1 || cfg.truncation.h_margin < 0 || cfg.truncation.j_max < 1 ||
            cfg.truncation.event_len_max < 1)
            fail(origin, "truncation limits must be positive");
    }

    if (j.contains("codes"))
        for (const auto& [id, body] : j.at("codes").items())
            cfg.codes.emplace(id, parse_code(id, body, origin));

    if (j.contains("schemes")) {
        for (const auto& [id, body] : j.at("schemes").items()) {
            if (!valid_id(id)) fail(origin, "scheme id '" + id + "' must be [A-Za-z0-9_.-]+");
            ConcatScheme s;
            s.id = id;
            const std::string kind = body.value("kind", "hctc");
            auto ref = [&](const char* key) -> ConvCodeSpec {
                if (!body.contains(key))
                    fail(origin, "scheme '" + id + "' lacks component '" + key + "'");
                const std::string code_id = body.at(key).get<std::string>();
                auto it = cfg.codes.find(code_id);
                if (it == cfg.codes.end())
                    fail(origin, "scheme '" + id + "' references unknown code '" + code_id + "'");
                return it->second;
            };
            if (kind == "hctc") {
                s.kind = SchemeKind::Hctc;
                s.components = {ref("parallel"), ref("outer"), ref("inner")};
            } else if (kind == "sccc") {
                s.kind = SchemeKind::Sccc;
                s.components = {ref("outer"), ref("inner")};
            } else if (kind == "pccc") {
                s.kind = SchemeKind::Pccc;
                s.components = {ref("first"), ref("second")};
            } else if (kind == "uncoded") {
                s.kind = SchemeKind::Uncoded;
            } else {
                fail(origin, "scheme '" + id + "': unknown kind '" + kind + "'");
            }
            s.n1 = body.value("n1", 0);
            s.n2 = body.value("n2", 0);
            s.termination =
                parse_termination(body.value("termination", "truncated"), origin);
            s.count_tail_in_rate = body.value("count_tail_in_rate", false);
            try {
                s.validate();
            } catch (const ConfigError& e) {
                fail(origin, e.what());
            }
            cfg.schemes.emplace(id, std::move(s));
        }
    }

    if (j.contains("bound")) {
        const auto& b = j.at("bound");
        if (b.contains("snr_grid_db")) cfg.bound.snr_grid_db = parse_grid(b.at("snr_grid_db"), origin);
        if (b.contains("channels")) cfg.bound.channels = parse_channels(b.at("channels"), origin);
        const std::string pep = b.value("pep", "exact");
        if (pep == "exact")
            cfg.bound.pep = PepMode::Exact;
        else if (pep == "chernoff")
            cfg.bound.pep = PepMode::Chernoff;
        else
            fail(origin, "bound.pep must be exact or chernoff");
    }

    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        if (s.contains("snr_grid_db")) cfg.sim.snr_grid_db = parse_grid(s.at("snr_grid_db"), origin);
        if (s.contains("channels")) cfg.sim.channels = parse_channels(s.at("channels"), origin);
        cfg.sim.decode.iterations = s.value("iterations", 8);
        const std::string alg = s.value("algorithm", "max_log_map");
        if (alg == "max_log_map")
            cfg.sim.decode.algorithm = DecodeAlgorithm::MaxLogMap;
        else if (alg == "exact_map")
            cfg.sim.decode.algorithm = DecodeAlgorithm::ExactMap;
        else
            fail(origin, "sim.algorithm must be exact_map or max_log_map");
        cfg.sim.decode.clamp = s.value("llr_clamp", 50.0);
        const std::string sched = s.value("hctc_schedule", "inner_outer_parallel");
        if (sched == "inner_outer_parallel")
            cfg.sim.decode.schedule = HctcSchedule::InnerOuterParallel;
        else if (sched == "parallel_inner_outer")
            cfg.sim.decode.schedule = HctcSchedule::ParallelInnerOuter;
        else
            fail(origin, "sim.hctc_schedule must be inner_outer_parallel or parallel_inner_outer");
        cfg.sim.stop.min_bit_errors = s.value("min_bit_errors", 100ull);
        cfg.sim.stop.max_bits = s.value("max_bits", 10'000'000ull);
        cfg.sim.stop.max_frames = s.value("max_frames", 0ull);
        const std::string il = s.value("interleavers", "uniform");
        if (il == "uniform")
            cfg.sim.interleavers = InterleaverKind::UniformRandomPerFrame;
        else if (il == "fixed")
            cfg.sim.interleavers = InterleaverKind::FixedSeeded;
        else if (il == "identity")
            cfg.sim.interleavers = InterleaverKind::Identity;
        else
            fail(origin, "sim.interleavers must be uniform, fixed or identity");
        const std::string fading = s.value("fading", "per_bit");
        if (fading == "per_bit")
            cfg.sim.fading = FadingGranularity::PerBit;
        else if (fading == "per_block")
            cfg.sim.fading = FadingGranularity::PerBlock;
        else
            fail(origin, "sim.fading must be per_bit or per_block");
        cfg.sim.batch_frames = s.value("batch_frames", 256u);
        cfg.sim.decode.validate();
        if (cfg.sim.stop.min_bit_errors < 100)
            cfg.sim.decode.validate();  // allowed, flagged at report time
    }

    if (j.contains("plans")) {
        for (const auto& [id, body] : j.at("plans").items()) {
            PlanSection p;
            for (const auto& s : body.at("schemes")) {
                const std::string sid = s.get<std::string>();
                if (!cfg.schemes.count(sid))
                    fail(origin, "plan '" + id + "' references unknown scheme '" + sid + "'");
                p.schemes.push_back(sid);
            }
            if (body.contains("snr_grid_db")) p.snr_grid_db = parse_grid(body.at("snr_grid_db"), origin);
            if (body.contains("channels")) p.channels = parse_channels(body.at("channels"), origin);
            if (body.contains("iterations")) p.iterations = body.at("iterations").get<int>();
            if (body.contains("min_bit_errors"))
                p.min_bit_errors = body.at("min_bit_errors").get<std::uint64_t>();
            if (body.contains("max_bits")) p.max_bits = body.at("max_bits").get<std::uint64_t>();
            p.with_bounds = body.value("with_bounds", false);
            cfg.plans.emplace(id, std::move(p));
        }
    }

    if (j.contains("compare")) {
        const auto& c = j.at("compare");
        CompareSection cmp;
        for (const auto& s : c.at("schemes")) {
            const std::string sid = s.get<std::string>();
            if (!cfg.schemes.count(sid))
                fail(origin, "compare references unknown scheme '" + sid + "'");
            cmp.schemes.push_back(sid);
        }
        if (cmp.schemes.size() != 3)
            fail(origin, "compare.schemes must list exactly three schemes");
        if (c.contains("channels")) cmp.channels = parse_channels(c.at("channels"), origin);
        if (c.contains("snr_grid_db")) cmp.snr_grid_db = parse_grid(c.at("snr_grid_db"), origin);
        cfg.compare = std::move(cmp);
    }

    return cfg;
}

}  // namespace trelliskit::tools
