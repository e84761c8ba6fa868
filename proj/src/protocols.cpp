#include "cvqnd/protocols.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cvqnd {

namespace {

constexpr double kZeroSuccessTol = 1e-12;
constexpr double kAdaptiveDriftTol = 1e-4;

RunResult zero_success_result(double input_log_neg, int cutoff) {
    RunResult res;
    res.input_log_neg = input_log_neg;
    res.output_log_neg = std::numeric_limits<double>::quiet_NaN();
    res.pre_norm_trace = std::numeric_limits<double>::quiet_NaN();
    res.success_weight = 0.0;
    res.cutoff_used = cutoff;
    res.zero_success = true;
    return res;
}

// Runs `evaluate` at the requested cutoff, and in adaptive mode again at
// n_max + 4 as a convergence check on the logarithmic negativity.
template <typename Evaluate>
RunResult with_cutoff_policy(const CutoffPolicy& policy, Evaluate evaluate) {
    RunResult res = evaluate(policy.cutoff);
    if (policy.adaptive && !res.zero_success) {
        const RunResult check = evaluate(FockCutoff(policy.cutoff.n_max + 4));
        const double drift = std::abs(check.output_log_neg - res.output_log_neg);
        res.adaptive_drift = drift;
        if (!(drift < kAdaptiveDriftTol))
            throw std::runtime_error(
                "adaptive cutoff check failed: log-negativity drift " +
                std::to_string(drift) + " between n_max " +
                std::to_string(policy.cutoff.n_max) + " and " +
                std::to_string(policy.cutoff.n_max + 4));
    }
    return res;
}

RunResult run_on_off(double r, const SignedGaussianMixture& mixture,
                     const CutoffPolicy& policy) {
    const double input = tmsv_log_negativity_baseline(r);
    if (std::abs(mixture.success_weight()) < kZeroSuccessTol)
        return zero_success_result(input, policy.cutoff.n_max);
    return with_cutoff_policy(policy, [&](FockCutoff cutoff) {
        const AssembledState state = assemble_protocol1(mixture, cutoff);
        const EntanglementReport report = log_negativity(state.rho);
        RunResult res;
        res.input_log_neg = input;
        res.output_log_neg = report.log_negativity;
        res.success_weight = mixture.success_weight();
        res.pre_norm_trace = state.pre_norm_trace;
        res.cutoff_used = cutoff.n_max;
        return res;
    });
}

}  // namespace

RunResult run_protocol1(const Protocol1Config& cfg) {
    const CovarianceMatrix gamma =
        protocol1_pre_measurement_cov(cfg.r, cfg.kappa, cfg.kind, cfg.eta);
    return run_on_off(cfg.r, on_off_branches(gamma), cfg.cutoff);
}

RunResult run_protocol1_beamsplitter(const BeamsplitterConfig& cfg) {
    const CovarianceMatrix gamma =
        protocol1_pre_measurement_cov_beamsplitter(cfg.r, cfg.T, cfg.eta);
    return run_on_off(cfg.r, on_off_branches(gamma), cfg.cutoff);
}

RunResult run_protocol2(const Protocol2Config& cfg) {
    const double input = tmsv_log_negativity_baseline(cfg.r);
    const SignedGaussianMixture prep = prepare_subtracted_ancilla(cfg.s, cfg.T, cfg.eta);
    if (std::abs(prep.success_weight()) < kZeroSuccessTol)
        return zero_success_result(input, cfg.cutoff.cutoff.n_max);

    // Per-branch QND interaction with the TMSV, then homodyne reduction; the
    // interaction acts on each branch of the signed mixture independently.
    const SymplecticMap coupling =
        compose(embed_two_mode(qnd_map(cfg.kind, cfg.kappa, 0, 1, 2), 1, 3, 4),
                embed_two_mode(qnd_map(cfg.kind, cfg.kappa, 0, 1, 2), 0, 2, 4));
    const GaussianState tmsv = tmsv_state(cfg.r);

    SignedGaussianMixture reduced;
    for (const GaussianBranch& prep_branch : prep.branches) {
        const GaussianState joint =
            apply(coupling, direct_sum(tmsv, GaussianState(prep_branch.cov)));
        const HomodyneReduction red =
            homodyne_reduce(joint.cov, cfg.theta, cfg.xi, cfg.z);
        GaussianBranch branch;
        branch.index = prep_branch.index;
        branch.cov = CovarianceMatrix(red.cov);
        branch.weight = prep_branch.weight * red.q_z;
        branch.sign = prep_branch.sign;
        branch.linear = red.lambda;
        branch.scalar_prefactor = red.exp_prefactor;
        reduced.branches.push_back(std::move(branch));
    }
    reduced.normalization = 1.0 / reduced.success_weight();

    if (std::abs(reduced.success_weight()) < kZeroSuccessTol)
        return zero_success_result(input, cfg.cutoff.cutoff.n_max);

    return with_cutoff_policy(cfg.cutoff, [&](FockCutoff cutoff) {
        const AssembledState state = assemble_protocol2(reduced, cutoff);
        const EntanglementReport report = log_negativity(state.rho);
        RunResult res;
        res.input_log_neg = input;
        res.output_log_neg = report.log_negativity;
        res.success_weight = reduced.success_weight();
        res.pre_norm_trace = state.pre_norm_trace;
        res.cutoff_used = cutoff.n_max;
        return res;
    });
}

RunResult run_baseline(const BaselineConfig& cfg) {
    SignedGaussianMixture mixture;
    GaussianBranch branch;
    branch.cov = CovarianceMatrix(tmsv_state(cfg.r).cov.matrix());
    branch.weight = 1.0;
    branch.sign = +1;
    mixture.branches.push_back(std::move(branch));
    mixture.normalization = 1.0;

    return with_cutoff_policy(cfg.cutoff, [&](FockCutoff cutoff) {
        const AssembledState state = assemble_protocol1(mixture, cutoff);
        const EntanglementReport report = log_negativity(state.rho);
        RunResult res;
        res.input_log_neg = tmsv_log_negativity_baseline(cfg.r);
        res.output_log_neg = report.log_negativity;
        res.success_weight = 1.0;
        res.pre_norm_trace = state.pre_norm_trace;
        res.cutoff_used = cutoff.n_max;
        return res;
    });
}

namespace {

[[noreturn]] void bad_axis(const std::string& axis, const std::string& valid) {
    throw std::invalid_argument("unknown sweep axis '" + axis + "' (valid: " + valid + ")");
}

}  // namespace

void set_axis(Protocol1Config& cfg, const std::string& axis, double value) {
    if (axis == "r") cfg.r = value;
    else if (axis == "kappa") cfg.kappa = value;
    else if (axis == "eta") cfg.eta = value;
    else bad_axis(axis, "r, kappa, eta");
}

void set_axis(BeamsplitterConfig& cfg, const std::string& axis, double value) {
    if (axis == "r") cfg.r = value;
    else if (axis == "T") cfg.T = value;
    else if (axis == "eta") cfg.eta = value;
    else bad_axis(axis, "r, T, eta");
}

void set_axis(Protocol2Config& cfg, const std::string& axis, double value) {
    if (axis == "r") cfg.r = value;
    else if (axis == "s") cfg.s = value;
    else if (axis == "T") cfg.T = value;
    else if (axis == "kappa") cfg.kappa = value;
    else if (axis == "eta") cfg.eta = value;
    else if (axis == "xi") cfg.xi = value;
    else if (axis == "theta") cfg.theta = value;
    else if (axis == "z") cfg.z = Eigen::Vector2d::Constant(value);
    else bad_axis(axis, "r, s, T, kappa, eta, xi, theta, z");
}

void set_axis(BaselineConfig& cfg, const std::string& axis, double value) {
    if (axis == "r") cfg.r = value;
    else bad_axis(axis, "r");
}

namespace {

RunResult run_config(const Protocol1Config& cfg) { return run_protocol1(cfg); }
RunResult run_config(const BeamsplitterConfig& cfg) { return run_protocol1_beamsplitter(cfg); }
RunResult run_config(const Protocol2Config& cfg) { return run_protocol2(cfg); }
RunResult run_config(const BaselineConfig& cfg) { return run_baseline(cfg); }

}  // namespace

template <typename Config>
std::vector<SweepPoint> sweep(const Config& base, const std::string& axis,
                              const std::vector<double>& values, int jobs) {
    if (jobs < 1) throw std::invalid_argument("sweep: jobs must be >= 1");
    {
        Config probe = base;           // validate the axis name up front
        set_axis(probe, axis, base.r); // value irrelevant
    }

    std::vector<SweepPoint> points(values.size());
    auto evaluate_point = [&](std::size_t k) {
        points[k].axis_value = values[k];
        try {
            Config cfg = base;
            set_axis(cfg, axis, values[k]);
            points[k].result = run_config(cfg);
        } catch (const std::exception& err) {
            points[k].error = err.what();
        }
    };

    const std::size_t workers =
        std::min(static_cast<std::size_t>(jobs), values.size());
    if (workers <= 1) {
        for (std::size_t k = 0; k < values.size(); ++k) evaluate_point(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < values.size();
                     k = next.fetch_add(1))
                    evaluate_point(k);
            });
        for (auto& t : pool) t.join();
    }
    return points;
}

template std::vector<SweepPoint> sweep(const Protocol1Config&, const std::string&,
                                       const std::vector<double>&, int);
template std::vector<SweepPoint> sweep(const BeamsplitterConfig&, const std::string&,
                                       const std::vector<double>&, int);
template std::vector<SweepPoint> sweep(const Protocol2Config&, const std::string&,
                                       const std::vector<double>&, int);
template std::vector<SweepPoint> sweep(const BaselineConfig&, const std::string&,
                                       const std::vector<double>&, int);

}  // namespace cvqnd
