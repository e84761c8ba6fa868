#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvqnd/protocols.hpp"

// Batch front-end: parse a run configuration from argv and an optional
// key=value config file (sections named after the subcommands), execute the
// protocol or sweep, and emit CSV plus an optional JSON summary.

namespace cvqnd::cli {

enum class Protocol { One, OneBs, Two, Baseline };

struct RunSpec {
    Protocol protocol = Protocol::One;

    double r = 0.115;
    double kappa = 0.1;
    QndKind kind = QndKind::XP;
    double eta = 1.0;
    double xi = 1.0;
    double s = 0.2;
    double T = 0.95;
    double theta = 0.0;
    double z = 0.0;
    int cutoff = 12;
    bool adaptive = false;

    bool is_sweep = false;
    std::string axis;
    std::vector<double> values;

    std::string out = "-";   // CSV path, "-" = stdout
    std::string summary;     // JSON summary path, empty = none
    int jobs = 1;
};

/// Thrown on bad usage; carries the process exit code (2 for usage errors,
/// 0 when --help was requested).
struct UsageError : std::runtime_error {
    UsageError(std::string msg, int code)
        : std::runtime_error(std::move(msg)), exit_code(code) {}
    int exit_code;
};

/// Parses the argument vector (without argv[0]).
RunSpec parse_args(const std::vector<std::string>& args);

/// Executes the run described by the spec.
std::vector<SweepPoint> execute(const RunSpec& spec);

/// CSV with header
///   axis_value,input_logneg,output_logneg,success_weight,pre_norm_trace,cutoff
/// one row per successful point, 12 significant digits, LF line endings.
/// Failed points are omitted (they are reported in the summary and on
/// stderr). Zero-success outcomes print nan for the output columns.
std::string format_csv(const std::vector<SweepPoint>& points);
void emit_csv(const std::vector<SweepPoint>& points, const std::string& path);

/// JSON summary: run parameters, point totals, per-point errors, wall time
/// and cutoff-drift diagnostics. Schema documented in the README.
std::string format_summary(const RunSpec& spec, const std::vector<SweepPoint>& points,
                           double wall_time_seconds);

/// Full CLI entry point; returns the process exit code (0 on success, 1 when
/// any point failed, 2 on usage errors).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvqnd::cli
