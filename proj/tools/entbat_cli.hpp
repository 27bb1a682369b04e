#pragma once

// Command-line front end. `run` is separate from main so tests can drive it
// with in-memory streams.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "entbat/entbat.hpp"

namespace entbat::cli {

/// Fixed notation with 12 decimals, independent of the global locale.
inline std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[512];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 12);
    std::string s(buf, r.ptr);
    if (s == "-0.000000000000") s.erase(0, 1);
    return s;
}

inline const char* yes_no(bool b) { return b ? "true" : "false"; }

struct OptimizerFlags {
    OptimizerOptions opts;

    void attach(CLI::App* app) {
        app->add_option("--restarts", opts.restarts, "Optimizer restarts for relative-entropy")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->add_option("--max-iters", opts.max_iterations, "Iterations per restart")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->add_option("--tol", opts.tolerance, "Improvement threshold over the convergence window")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
    }
};

inline std::vector<std::string> measure_names() {
    std::vector<std::string> v;
    for (auto id : kAllMeasures) v.push_back(to_string(id));
    return v;
}

inline CLI::Option* add_measure(CLI::App* app, std::string& target, const std::string& flag = "--measure") {
    return app->add_option(flag, target, "Entanglement measure")->required()->check(CLI::IsMember(measure_names()));
}

inline void print_plan(std::ostream& out, const RatePlan& plan) {
    out << "rate: " << num(plan.rate) << '\n'
        << "m: " << plan.m << '\n'
        << "n: " << plan.n << '\n'
        << "epsilon_gap: " << num(plan.epsilon_gap) << '\n'
        << "exact: " << yes_no(plan.exact) << '\n'
        << "zero_error: " << yes_no(plan.zero_error) << '\n';
}

inline std::vector<std::string> reversed_args(const std::vector<std::string>& args) {
    return {args.rbegin(), args.rend()};
}

/// Runs one invocation; `args` excludes the program name. Returns the exit
/// code: 0 success, 1 domain error, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement and free-energy batteries: monotones, feasibility, rates and protocols", "entbat"};
    app.require_subcommand(1);
    app.fallthrough(false);

    // measure
    std::string measure, measure2, state, from, to, out_path;
    bool details = false;
    OptimizerFlags of;
    auto* c_measure = app.add_subcommand("measure", "Evaluate an entanglement measure on a state file");
    add_measure(c_measure, measure);
    c_measure->add_option("--state", state, "State file")->required();
    c_measure->add_flag("--details", details, "Also print convergence metadata");
    of.attach(c_measure);

    auto* c_feasible = app.add_subcommand(
        "feasible", "Single-copy battery-assisted convertibility: feasible iff E(from) >= E(to)");
    add_measure(c_feasible, measure);
    c_feasible->add_option("--from", from, "Initial state file")->required();
    c_feasible->add_option("--to", to, "Target state file")->required();
    of.attach(c_feasible);

    auto* c_rate = app.add_subcommand(
        "rate", "Asymptotic battery-assisted rate E(from)/E(to) with a one-sided m/n copy plan");
    add_measure(c_rate, measure);
    c_rate->add_option("--from", from, "Initial state file")->required();
    c_rate->add_option("--to", to, "Target state file")->required();
    of.attach(c_rate);

    auto* c_zero = app.add_subcommand("zero-error", "Zero-error rate E(from)/E(to) for an additive measure");
    add_measure(c_zero, measure);
    c_zero->add_option("--from", from, "Initial state file")->required();
    c_zero->add_option("--to", to, "Target state file")->required();
    of.attach(c_zero);

    auto* c_swap = app.add_subcommand(
        "swap", "Swap protocol: battery prepared in the target, then local exchange of system and battery");
    add_measure(c_swap, measure);
    c_swap->add_option("--from", from, "Initial state file")->required();
    c_swap->add_option("--to", to, "Target state file")->required();
    c_swap->add_option("--out", out_path, "Write the final global state here");
    of.attach(c_swap);

    auto* c_multi = app.add_subcommand(
        "multi-measure", "Rate bounds min(E1(from)/E1(to), E2(from)/E2(to)) when two measures are conserved");
    add_measure(c_multi, measure);
    add_measure(c_multi, measure2, "--measure2");
    c_multi->add_option("--from", from, "First state file")->required();
    c_multi->add_option("--to", to, "Second state file")->required();
    of.attach(c_multi);

    std::string rho_path, sigma_path, tau_path;
    auto* c_cont = app.add_subcommand(
        "continuity-check",
        "Relative entropy of entanglement continuity: |E_r(rho x tau) - E_r(sigma x tau)| <= "
        "eps log2 d + (1 + eps) h(eps/(1 + eps))");
    c_cont->add_option("--rho", rho_path, "State file")->required();
    c_cont->add_option("--sigma", sigma_path, "State file")->required();
    c_cont->add_option("--tau", tau_path, "Ancilla state file (default: trivial)");
    of.attach(c_cont);

    // thermo
    auto* c_thermo = app.add_subcommand("thermo", "Thermal operations with a free-energy battery");
    c_thermo->require_subcommand(1);
    std::string variant = "standard-offset";
    std::optional<double> alpha;
    auto* t_free = c_thermo->add_subcommand("free-energy", "Free energy S(rho||gamma) - log2 Z and its variants");
    t_free->add_option("--state", state, "Thermo scenario file")->required();
    t_free->add_option("--variant", variant, "standard-offset | relative-to-gibbs | max | renyi")
        ->check(CLI::IsMember({"standard-offset", "relative-to-gibbs", "max", "renyi"}));
    t_free->add_option("--alpha", alpha, "Renyi order (inf allowed); requires --variant renyi");
    auto* t_fmax = c_thermo->add_subcommand("f-max", "Max free energy log2 min{lambda : rho <= lambda gamma}");
    t_fmax->add_option("--state", state, "Thermo scenario file")->required();
    auto* t_feas = c_thermo->add_subcommand("feasible", "Feasible iff F(from) >= F(to) at a common temperature");
    t_feas->add_option("--from", from, "Initial thermo scenario file")->required();
    t_feas->add_option("--to", to, "Target thermo scenario file")->required();
    auto* t_self = c_thermo->add_subcommand(
        "self-dilution", "Product (F_max(rho)/F(rho)) (F(|1><1|)/F_max(|1><1|)) for an incoherent qubit");
    t_self->add_option("--state", state, "Thermo scenario file")->required();

    double alpha_min = kDefaultAlphaMin, alpha_max = kDefaultAlphaMax;
    std::size_t steps = kDefaultCurveSteps;
    auto* c_curve = app.add_subcommand(
        "dilution-curve", "Self-dilution rate E_n/E_c of cos(a)|00> + sin(a)|11> as CSV");
    c_curve->add_option("--alpha-min", alpha_min, "Smallest angle")->capture_default_str();
    c_curve->add_option("--alpha-max", alpha_max, "Largest angle (at most pi/4)")->capture_default_str();
    c_curve->add_option("--steps", steps, "Grid points")->capture_default_str();
    c_curve->add_option("--out", out_path, "CSV path (default: stdout)");

    std::vector<std::size_t> ds;
    auto* c_emb = app.add_subcommand(
        "embezzle-demo", "Geometric-entanglement battery: E_g stays 1/2 while the entropy of psi_d grows");
    c_emb->add_option("--d", ds, "Schmidt ranks (default 2..17)")->delimiter(',');

    std::size_t budget = kSearchBudget;
    std::string rho_out, sigma_out;
    auto* c_search = app.add_subcommand(
        "search-pair", "Random search for states ordered oppositely by two measures");
    add_measure(c_search, measure);
    add_measure(c_search, measure2, "--measure2");
    c_search->add_option("--budget", budget, "Number of trials")->capture_default_str();
    c_search->add_option("--rho-out", rho_out, "Write rho here");
    c_search->add_option("--sigma-out", sigma_out, "Write sigma here");
    of.attach(c_search);

    try {
        auto rev = reversed_args(args);
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        const OptimizerOptions& opts = of.opts;
        if (c_measure->parsed()) {
            const MeasureResult r = evaluate(parse_measure(measure), load_state(state), opts);
            out << num(r.value) << '\n';
            if (details)
                out << "converged: " << yes_no(r.converged) << '\n'
                    << "iterations: " << r.iterations << '\n'
                    << "certificate_terms: " << (r.certificate ? r.certificate->terms() : 0) << '\n';
        } else if (c_feasible->parsed()) {
            out << to_string(feasible(load_state(from), load_state(to), parse_measure(measure), opts)) << '\n';
        } else if (c_rate->parsed()) {
            print_plan(out, conversion_rate(load_state(from), load_state(to), parse_measure(measure), opts));
        } else if (c_zero->parsed()) {
            print_plan(out, zero_error_rate(load_state(from), load_state(to), parse_measure(measure), opts));
        } else if (c_swap->parsed()) {
            const ProtocolReport r = swap_protocol(load_state(from), load_state(to), parse_measure(measure), opts);
            out << "feasible: " << yes_no(r.feasible) << '\n'
                << "e_system_before: " << num(r.e_system_before) << '\n'
                << "e_system_after: " << num(r.e_system_after) << '\n'
                << "e_battery_before: " << num(r.e_battery_before) << '\n'
                << "e_battery_after: " << num(r.e_battery_after) << '\n'
                << "final_system_trace_distance_to_target: " << num(r.final_system_trace_distance_to_target)
                << '\n';
            if (!out_path.empty()) save_state(r.final_global, out_path);
        } else if (c_multi->parsed()) {
            const auto b =
                multi_measure_bound(load_state(from), load_state(to), parse_measure(measure), parse_measure(measure2), opts);
            out << "r_fwd_bound: " << num(b.r_fwd_bound) << '\n'
                << "r_bwd_bound: " << num(b.r_bwd_bound) << '\n'
                << "product_bound: " << num(b.product_bound) << '\n';
        } else if (c_cont->parsed()) {
            const BipartiteState tau = tau_path.empty() ? scalar_state() : load_state(tau_path);
            const auto c = continuity_bound_check(load_state(rho_path), load_state(sigma_path), tau, opts);
            out << "epsilon: " << num(c.epsilon) << '\n'
                << "lhs: " << num(c.lhs) << '\n'
                << "rhs: " << num(c.rhs) << '\n'
                << "holds: " << yes_no(c.holds) << '\n';
        } else if (t_free->parsed()) {
            const ThermoState s = load_thermo(state);
            const auto v = parse_free_energy_variant(variant);
            if (v == FreeEnergyVariant::Renyi) {
                if (!alpha) throw DomainError("--variant renyi needs --alpha");
                out << num(renyi_free_energy(s, *alpha).f) << '\n';
            } else {
                if (alpha) throw DomainError("--alpha only applies to --variant renyi");
                out << num(free_energy(s, v).f) << '\n';
            }
        } else if (t_fmax->parsed()) {
            out << num(f_max(load_thermo(state)).f) << '\n';
        } else if (t_feas->parsed()) {
            out << to_string(thermo_feasible(load_thermo(from), load_thermo(to))) << '\n';
        } else if (t_self->parsed()) {
            const auto r = thermo_self_dilution(load_thermo(state));
            out << "p: " << num(r.p) << '\n'
                << "r: " << num(r.r) << '\n'
                << "r_prime: " << num(r.r_prime) << '\n'
                << "product: " << num(r.product) << '\n'
                << "at_gibbs: " << yes_no(r.at_gibbs) << '\n';
        } else if (c_curve->parsed()) {
            const auto curve = self_dilution_curve(alpha_min, alpha_max, steps);
            if (out_path.empty()) {
                write_curve_csv(out, curve);
            } else {
                std::ofstream f(out_path);
                if (!f) throw ParseError("cannot write '" + out_path + "'");
                write_curve_csv(f, curve);
            }
        } else if (c_emb->parsed()) {
            if (ds.empty())
                for (std::size_t d = 2; d <= 17; ++d) ds.push_back(d);
            out << "d,e_g,entropy,amplification,swap_feasible\n";
            for (const auto& row : embezzlement_demo(ds))
                out << row.d << ',' << format_g12(row.e_g) << ',' << format_g12(row.entropy) << ','
                    << format_g12(row.amplification) << ',' << yes_no(row.swap_feasible) << '\n';
        } else if (c_search->parsed()) {
            const auto r = search_nonequivalent_pair(parse_measure(measure), parse_measure(measure2), opts.seed, opts,
                                                     budget);
            out << "trial: " << r.trial << '\n'
                << "e1_rho: " << num(r.values.e1_rho) << '\n'
                << "e1_sigma: " << num(r.values.e1_sigma) << '\n'
                << "e2_rho: " << num(r.values.e2_rho) << '\n'
                << "e2_sigma: " << num(r.values.e2_sigma) << '\n'
                << "product_bound: " << num(r.values.product_bound) << '\n';
            if (!rho_out.empty()) save_state(r.rho, rho_out);
            if (!sigma_out.empty()) save_state(r.sigma, sigma_out);
        }
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace entbat::cli
