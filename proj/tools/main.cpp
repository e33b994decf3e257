#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "trelliskit/errors.hpp"
#include "trelliskit_tools/commands.hpp"
#include "trelliskit_tools/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitPartial = 4;

std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("TRELLISKIT_OUT"); env && *env) return env;
    return config_value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concatenated trellis code bounds and Monte Carlo link simulation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir_flag;
    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    int threads = 1;
    bool verbose = false;
    bool no_timestamp = false;
    app.add_option("--config", config_path, "configuration file (JSON)")->required();
    app.add_option("--out", out_dir_flag, "output directory (overrides TRELLISKIT_OUT and config)");
    app.add_option("--seed", seed_flag, "master seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--threads", threads, "worker threads for simulation")->check(CLI::PositiveNumber);
    app.add_flag("--verbose", verbose, "progress logging");
    app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp header line");

    auto* spectrum = app.add_subcommand("spectrum", "exact and event-approximated IOWC of a code");
    std::string code_id;
    int n_steps = 0;
    spectrum->add_option("--code", code_id, "code id from the config")->required();
    spectrum->add_option("--n", n_steps, "number of trellis steps N")->required();

    auto* bound = app.add_subcommand("bound", "union and asymptotic bit-error bounds");
    std::vector<std::string> scheme_ids;
    bound->add_option("--scheme", scheme_ids, "scheme id(s); default: all non-uncoded schemes");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo BER plan execution");
    std::string plan_id;
    simulate->add_option("--plan", plan_id, "plan id from the config")->required();

    auto* compare = app.add_subcommand("compare", "joined bound + simulation comparison table");

    CLI11_PARSE(app, argc, argv);

    try {
        auto config = trelliskit::tools::ToolkitConfig::load(config_path);
        if (seed_set) config.seed = seed_flag;

        trelliskit::tools::CommandOptions options;
        options.output_dir = resolve_out_dir(out_dir_flag, config.output_dir);
        options.threads = threads;
        options.verbose = verbose;
        options.timestamp = !no_timestamp;

        if (*spectrum) {
            const auto path = trelliskit::tools::cmd_spectrum(config, code_id, n_steps, options);
            std::cout << "wrote " << path << "\n";
            return kExitOk;
        }
        if (*bound) {
            if (scheme_ids.empty())
                for (const auto& [id, s] : config.schemes)
                    if (s.kind != trelliskit::SchemeKind::Uncoded) scheme_ids.push_back(id);
            for (const auto& id : scheme_ids) {
                const auto path = trelliskit::tools::cmd_bound(config, id, options);
                std::cout << "wrote " << path << "\n";
            }
            return kExitOk;
        }
        if (*simulate) {
            std::string path;
            const auto failures = trelliskit::tools::cmd_simulate(config, plan_id, options, &path);
            std::cout << "wrote " << path << "\n";
            for (const auto& f : failures) std::cerr << "failed: " << f << "\n";
            return failures.empty() ? kExitOk : kExitPartial;
        }
        if (*compare) {
            const auto path = trelliskit::tools::cmd_compare(config, options);
            std::cout << "wrote " << path << "\n";
            return kExitOk;
        }
    } catch (const trelliskit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const trelliskit::InputError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    }
    return kExitOk;
}
