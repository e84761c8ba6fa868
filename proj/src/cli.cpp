#include "cvqnd/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace cvqnd::cli {

namespace {

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::One: return "protocol1";
        case Protocol::OneBs: return "protocol1-bs";
        case Protocol::Two: return "protocol2";
        case Protocol::Baseline: return "baseline";
    }
    return "?";
}

std::vector<double> parse_range(const std::string& text) {
    double lo = 0.0, hi = 0.0;
    long count = 0;
    char tail = '\0';
    if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &count, &tail) != 3 ||
        count < 1)
        throw UsageError("--range: expected LO:HI:COUNT with COUNT >= 1", 2);
    std::vector<double> values(count);
    if (count == 1) {
        values[0] = lo;
    } else {
        for (long k = 0; k < count; ++k)
            values[k] = lo + (hi - lo) * static_cast<double>(k) /
                                 static_cast<double>(count - 1);
    }
    return values;
}

struct ParserState {
    RunSpec spec;
    std::string kind_name = "xp";
    std::string protocol_name_arg;
    std::string range_text;
};

void add_output_options(CLI::App* cmd, RunSpec& spec) {
    cmd->add_option("--out", spec.out, "CSV output path ('-' = stdout)")
        ->capture_default_str();
    cmd->add_option("--summary", spec.summary, "JSON summary output path");
    cmd->add_option("--jobs", spec.jobs, "parallel sweep evaluations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_cutoff_options(CLI::App* cmd, RunSpec& spec) {
    cmd->add_option("--cutoff", spec.cutoff, "Fock cutoff n_max per mode")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    cmd->add_flag("--adaptive", spec.adaptive,
                  "re-run at n_max+4 and require log-negativity drift < 1e-4");
}

void add_r_option(CLI::App* cmd, RunSpec& spec) {
    cmd->add_option("--r", spec.r, "TMSV squeezing parameter")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

void add_kind_option(CLI::App* cmd, ParserState& st) {
    cmd->add_option("--kind", st.kind_name, "QND quadrature pair (xx|xp|px|pp)")
        ->check(CLI::IsMember({"xx", "xp", "px", "pp"}, CLI::ignore_case))
        ->capture_default_str();
}

void add_protocol1_options(CLI::App* cmd, ParserState& st) {
    add_r_option(cmd, st.spec);
    cmd->add_option("--kappa", st.spec.kappa, "QND interaction strength")
        ->capture_default_str();
    add_kind_option(cmd, st);
    cmd->add_option("--eta", st.spec.eta, "on/off detector efficiency")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    add_cutoff_options(cmd, st.spec);
}

void add_protocol1_bs_options(CLI::App* cmd, ParserState& st) {
    add_r_option(cmd, st.spec);
    cmd->add_option("--T", st.spec.T, "beamsplitter amplitude transmittance")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--eta", st.spec.eta, "on/off detector efficiency")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    add_cutoff_options(cmd, st.spec);
}

void add_protocol2_options(CLI::App* cmd, ParserState& st) {
    add_r_option(cmd, st.spec);
    cmd->add_option("--s", st.spec.s, "ancilla squeezing parameter")
        ->capture_default_str();
    cmd->add_option("--T", st.spec.T, "subtraction beamsplitter amplitude transmittance")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--kappa", st.spec.kappa, "QND interaction strength")
        ->capture_default_str();
    add_kind_option(cmd, st);
    cmd->add_option("--eta", st.spec.eta, "preparation detector efficiency")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--xi", st.spec.xi, "homodyne detector efficiency")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--theta", st.spec.theta, "homodyne angle")
        ->capture_default_str();
    cmd->add_option("--z", st.spec.z, "homodyne outcome (applied to both ancillas)")
        ->capture_default_str();
    add_cutoff_options(cmd, st.spec);
}

void add_baseline_options(CLI::App* cmd, ParserState& st) {
    add_r_option(cmd, st.spec);
    add_cutoff_options(cmd, st.spec);
}

}  // namespace

RunSpec parse_args(const std::vector<std::string>& args) {
    CLI::App app{"continuous-variable QND entanglement-concentration simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file with [section] per subcommand");

    ParserState st;

    CLI::App* p1 = app.add_subcommand("protocol1",
                                      "QND coupling to vacuum ancillas + on/off detection");
    add_protocol1_options(p1, st);
    add_output_options(p1, st.spec);
    p1->configurable();

    CLI::App* p1bs = app.add_subcommand("protocol1-bs",
                                        "beamsplitter variant of protocol1");
    add_protocol1_bs_options(p1bs, st);
    add_output_options(p1bs, st.spec);
    p1bs->configurable();

    CLI::App* p2 = app.add_subcommand("protocol2",
                                      "photon-subtracted ancillas + homodyne detection");
    add_protocol2_options(p2, st);
    add_output_options(p2, st.spec);
    p2->configurable();

    CLI::App* base = app.add_subcommand("baseline", "TMSV log-negativity through the pipeline");
    add_baseline_options(base, st);
    add_output_options(base, st.spec);
    base->configurable();

    CLI::App* sw = app.add_subcommand("sweep", "run one protocol over a list of axis values");
    sw->add_option("--protocol", st.protocol_name_arg, "protocol to sweep")
        ->check(CLI::IsMember({"protocol1", "protocol1-bs", "protocol2", "baseline"}))
        ->required();
    sw->add_option("--axis", st.spec.axis, "config field to sweep")->required();
    CLI::Option* values_opt =
        sw->add_option("--values", st.spec.values, "comma-separated axis values")
            ->delimiter(',');
    CLI::Option* range_opt =
        sw->add_option("--range", st.range_text, "axis values as LO:HI:COUNT");
    values_opt->excludes(range_opt);
    add_protocol2_options(sw, st);  // superset of every protocol's parameters
    add_output_options(sw, st.spec);
    sw->configurable();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("cvqnd");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), 0);
    } catch (const CLI::ParseError& err) {
        throw UsageError(err.what(), 2);
    }

    st.spec.kind = qnd_kind_from_string(st.kind_name);

    if (app.got_subcommand(sw)) {
        st.spec.is_sweep = true;
        static const std::map<std::string, Protocol> kProtocols = {
            {"protocol1", Protocol::One},
            {"protocol1-bs", Protocol::OneBs},
            {"protocol2", Protocol::Two},
            {"baseline", Protocol::Baseline}};
        st.spec.protocol = kProtocols.at(st.protocol_name_arg);
        if (!st.range_text.empty()) st.spec.values = parse_range(st.range_text);
        if (values_opt->count() == 0 && st.range_text.empty())
            throw UsageError("sweep: one of --values or --range is required", 2);
    } else if (app.got_subcommand(p1)) {
        st.spec.protocol = Protocol::One;
    } else if (app.got_subcommand(p1bs)) {
        st.spec.protocol = Protocol::OneBs;
    } else if (app.got_subcommand(p2)) {
        st.spec.protocol = Protocol::Two;
    } else if (app.got_subcommand(base)) {
        st.spec.protocol = Protocol::Baseline;
    }
    return st.spec;
}

namespace {

CutoffPolicy cutoff_policy(const RunSpec& spec) {
    return CutoffPolicy{FockCutoff(spec.cutoff), spec.adaptive};
}

template <typename Config>
std::vector<SweepPoint> run_with(const Config& cfg, const RunSpec& spec) {
    if (spec.is_sweep) return sweep(cfg, spec.axis, spec.values, spec.jobs);
    // A single run is a one-point sweep along r at the configured value.
    return sweep(cfg, "r", {cfg.r}, 1);
}

}  // namespace

std::vector<SweepPoint> execute(const RunSpec& spec) {
    switch (spec.protocol) {
        case Protocol::One: {
            Protocol1Config cfg{spec.r, spec.kappa, spec.kind, spec.eta, cutoff_policy(spec)};
            return run_with(cfg, spec);
        }
        case Protocol::OneBs: {
            BeamsplitterConfig cfg{spec.r, spec.T, spec.eta, cutoff_policy(spec)};
            return run_with(cfg, spec);
        }
        case Protocol::Two: {
            Protocol2Config cfg{spec.r,     spec.s,  spec.T,
                                spec.kappa, spec.kind, spec.eta,
                                spec.xi,    spec.theta,
                                Eigen::Vector2d::Constant(spec.z),
                                cutoff_policy(spec)};
            return run_with(cfg, spec);
        }
        case Protocol::Baseline: {
            BaselineConfig cfg{spec.r, cutoff_policy(spec)};
            return run_with(cfg, spec);
        }
    }
    throw std::logic_error("execute: unreachable protocol");
}

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::string format_csv(const std::vector<SweepPoint>& points) {
    std::string out =
        "axis_value,input_logneg,output_logneg,success_weight,pre_norm_trace,cutoff\n";
    for (const auto& point : points) {
        if (!point.result) continue;
        const RunResult& res = *point.result;
        out += fmt12(point.axis_value);
        out += ',';
        out += fmt12(res.input_log_neg);
        out += ',';
        out += fmt12(res.output_log_neg);
        out += ',';
        out += fmt12(res.success_weight);
        out += ',';
        out += fmt12(res.pre_norm_trace);
        out += ',';
        out += std::to_string(res.cutoff_used);
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<SweepPoint>& points, const std::string& path) {
    const std::string csv = format_csv(points);
    if (path == "-") {
        std::cout << csv;
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open CSV output path '" + path + "'");
    file << csv;
    file.flush();
    if (!file) throw std::runtime_error("failed writing CSV to '" + path + "'");
}

std::string format_summary(const RunSpec& spec, const std::vector<SweepPoint>& points,
                           double wall_time_seconds) {
    nlohmann::json errors = nlohmann::json::array();
    int ok = 0, zero_success = 0;
    double max_drift = 0.0;
    bool any_drift = false;
    for (const auto& point : points) {
        if (point.result) {
            ++ok;
            if (point.result->zero_success) ++zero_success;
            if (point.result->adaptive_drift) {
                any_drift = true;
                max_drift = std::max(max_drift, *point.result->adaptive_drift);
            }
        } else {
            errors.push_back({{"axis_value", point.axis_value}, {"message", point.error}});
        }
    }

    nlohmann::json summary = {
        {"protocol", protocol_name(spec.protocol)},
        {"parameters",
         {{"r", spec.r},
          {"kappa", spec.kappa},
          {"kind", to_string(spec.kind)},
          {"eta", spec.eta},
          {"xi", spec.xi},
          {"s", spec.s},
          {"T", spec.T},
          {"theta", spec.theta},
          {"z", spec.z}}},
        {"sweep", spec.is_sweep
                      ? nlohmann::json{{"axis", spec.axis},
                                       {"num_values", spec.values.size()}}
                      : nlohmann::json(nullptr)},
        {"cutoff",
         {{"policy", spec.adaptive ? "adaptive" : "fixed"},
          {"n_max", spec.cutoff},
          {"max_log_negativity_drift",
           any_drift ? nlohmann::json(max_drift) : nlohmann::json(nullptr)}}},
        {"points_total", points.size()},
        {"points_ok", ok},
        {"points_failed", points.size() - ok},
        {"zero_success_points", zero_success},
        {"errors", errors},
        {"wall_time_seconds", wall_time_seconds},
        {"csv_path", spec.out}};
    return summary.dump(2) + "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunSpec spec;
    try {
        spec = parse_args(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const UsageError& usage) {
        (usage.exit_code == 0 ? out : err) << usage.what() << "\n";
        return usage.exit_code;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        const std::vector<SweepPoint> points = execute(spec);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (spec.out == "-")
            out << format_csv(points) << std::flush;
        else
            emit_csv(points, spec.out);
        if (!spec.summary.empty()) {
            std::ofstream file(spec.summary, std::ios::binary);
            if (!file)
                throw std::runtime_error("cannot open summary path '" + spec.summary + "'");
            file << format_summary(spec, points, wall);
        }

        int failed = 0;
        for (const auto& point : points) {
            if (!point.result) {
                ++failed;
                err << "point " << fmt12(point.axis_value) << " failed: " << point.error
                    << "\n";
            }
        }
        return failed == 0 ? 0 : 1;
    } catch (const std::exception& fatal) {
        err << "error: " << fatal.what() << "\n";
        return 1;
    }
}

}  // namespace cvqnd::cli
