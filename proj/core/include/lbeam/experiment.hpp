#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "lbeam/ber_sim.hpp"

namespace lbeam {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

struct ExperimentSpec {
    SimConfig sim{};
    std::string output_path = "results.csv";
    OutputFormat output_format = OutputFormat::Csv;
    bool report_margins = false;

    bool operator==(const ExperimentSpec&) const = default;
};

// Parses a config document — JSON object or key=value lines ('#' comments) —
// over the documented defaults (N=8, M=3, K=2, L=2, SNR grid 0..24 step 2 dB,
// both schemes, max_trials 1e6, min_bit_errors 200, seed 1, csv output).
// Later assignments win. The SNR grid comes either from snr_grid_db or from
// snr_start_db/snr_stop_db/snr_step_db (the latter take precedence when any
// of them appears). Throws ParseError with line/field diagnostics, or
// ValidationError naming the violated invariant.
ExperimentSpec parse_config(const std::string& text);

// key=value rendering; parse_config(emit_config(s)) == s.
std::string emit_config(const ExperimentSpec& spec);

// Runs the sweep, writes the result file (and the margins sibling file when
// requested) atomically, logs a summary including the interpolated dB gain
// at BER 1e-4 when bracketed, and returns the process exit code:
// 0 success, 2 config error, 3 I/O error, 1 numerical failure.
int run_experiment(const ExperimentSpec& spec, std::ostream& log);

}  // namespace lbeam
