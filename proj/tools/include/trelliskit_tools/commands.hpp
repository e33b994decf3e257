#pragma once

#include <string>
#include <vector>

#include "trelliskit_tools/config.hpp"

namespace trelliskit::tools {

struct CommandOptions {
    std::string output_dir;  // resolved: flag > TRELLISKIT_OUT env > config
    int threads = 1;
    bool verbose = false;
    bool timestamp = true;  // disabled in tests for byte-stable goldens
};

// Analytical bound pipeline shared by the bound and compare commands:
// per-component error events -> block IOWC at the common step count ->
// uniform-interleaver combination.
struct SchemeAnalysis {
    ConcatIowc iowc;
    double rate = 0.0;
    // populated for the hybrid scheme
    bool has_asymptotics = false;
    AsymptoticParams params;
};

SchemeAnalysis analyze_scheme(const ToolkitConfig& config, const std::string& scheme_id);

// Exact and event-approximated spectra of one component code, side by
// side; writes <out>/spectrum_<code>_<N>.csv.
std::string cmd_spectrum(const ToolkitConfig& config, const std::string& code_id, int n_steps,
                         const CommandOptions& options);

// Union and asymptotic bound curves; writes <out>/bound_<scheme>.csv.
std::string cmd_bound(const ToolkitConfig& config, const std::string& scheme_id,
                      const CommandOptions& options);

// Monte Carlo plan execution; writes <out>/sim_<plan>.csv (and
// <out>/bound_<plan>.csv overlays when requested). Returns the failure
// messages of points that did not run.
std::vector<std::string> cmd_simulate(const ToolkitConfig& config, const std::string& plan_id,
                                      const CommandOptions& options, std::string* csv_path_out);

// Joined bound + simulation table for the three-scheme comparison;
// writes <out>/compare.csv.
std::string cmd_compare(const ToolkitConfig& config, const CommandOptions& options);

}  // namespace trelliskit::tools
