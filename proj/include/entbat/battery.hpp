#pragma once

// Battery-assisted transformations: feasibility, the swap protocol, rate
// plans, multi-measure bounds and the relative-entropy continuity check.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "entbat/measures.hpp"
#include "entbat/rational.hpp"

namespace entbat {

enum class Verdict { Feasible, Infeasible, Undecided };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Undecided: return "undecided";
    }
    return "?";
}

/// Relative tolerance for comparing closed-form measure values.
inline constexpr double kRelativeTolerance = 1e-9;
inline constexpr std::int64_t kMaxDenominator = 1'000'000;
inline constexpr double kExactRateTolerance = 1e-12;

namespace detail {

inline bool same_state(const BipartiteState& x, const BipartiteState& y) {
    return x.layout() == y.layout() && (x.matrix() - y.matrix()).cwiseAbs().maxCoeff() <= 1e-12;
}

inline Verdict compare(MeasureId id, double e_rho, double e_sigma, const OptimizerOptions& opts) {
    const double diff = e_rho - e_sigma;
    if (traits(id).optimizer_backed) {
        if (std::abs(diff) <= 2.0 * opts.slack) return Verdict::Undecided;
        return diff > 0 ? Verdict::Feasible : Verdict::Infeasible;
    }
    const double tol = kRelativeTolerance * std::max({1.0, std::abs(e_rho), std::abs(e_sigma)});
    return diff >= -tol ? Verdict::Feasible : Verdict::Infeasible;
}

/// Values at or below this are treated as "no resource".
inline double zero_threshold(MeasureId id) { return traits(id).optimizer_backed ? 1e-4 : 1e-9; }

} // namespace detail

/// Single-copy battery-assisted convertibility rho -> sigma: feasible iff
/// E(rho) >= E(sigma).
inline Verdict feasible(const BipartiteState& rho, const BipartiteState& sigma, MeasureId id,
                        const OptimizerOptions& opts = {}) {
    if (detail::same_state(rho, sigma)) {
        (void)evaluate(id, rho, opts); // applicability errors still propagate
        return Verdict::Feasible;
    }
    return detail::compare(id, measure_value(id, rho, opts), measure_value(id, sigma, opts), opts);
}

struct ProtocolReport {
    BipartiteState initial_global;
    BipartiteState final_global;
    MeasureId battery_measure;
    double e_system_before = 0.0;
    double e_system_after = 0.0;
    double e_battery_before = 0.0;
    double e_battery_after = 0.0;
    bool feasible = false;
    double final_system_trace_distance_to_target = 0.0;
    /// Trace distance between the permuted global state and target (x) input.
    double final_global_trace_distance = 0.0;
    std::size_t system_components = 1;
    std::size_t battery_components = 1;
};

namespace detail {

inline std::size_t nontrivial_components(const BipartiteState& s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.components(); ++i)
        if (s.layout().a[i] * s.layout().b[i] != 1) ++n;
    return n;
}

inline std::vector<std::size_t> iota(std::size_t from, std::size_t to) {
    std::vector<std::size_t> v;
    for (std::size_t i = from; i < to; ++i) v.push_back(i);
    return v;
}

} // namespace detail

/// Runs the swap protocol with the battery prepared in the target state:
/// rho (x) sigma on (A A' | B B') followed by the local relabeling A <-> A',
/// B <-> B'. The resulting global state is sigma (x) rho exactly.
inline ProtocolReport swap_protocol(const BipartiteState& rho, const BipartiteState& sigma, MeasureId id,
                                    const OptimizerOptions& opts = {},
                                    std::size_t max_dim = kDefaultMaxDimension) {
    const std::size_t nr = detail::nontrivial_components(rho), ns = detail::nontrivial_components(sigma);
    if (nr == 0 || ns == 0) throw ShapeError("swap protocol needs non-trivial system and battery");
    const double e_rho = measure_value(id, rho, opts);
    const double e_sigma = detail::same_state(rho, sigma) ? e_rho : measure_value(id, sigma, opts);
    const Verdict v = detail::same_state(rho, sigma) ? Verdict::Feasible : detail::compare(id, e_rho, e_sigma, opts);
    if (v != Verdict::Feasible)
        throw InfeasibleError(to_string(id) + " verdict " + to_string(v) + ": E(rho) = " + detail::sci(e_rho, 12) +
                              ", E(sigma) = " + detail::sci(e_sigma, 12));

    BipartiteState initial = tensor(rho, sigma, max_dim);
    std::vector<std::size_t> order = detail::iota(nr, nr + ns);
    for (std::size_t i = 0; i < nr; ++i) order.push_back(i);
    BipartiteState final_global = permute_components(initial, order);

    const auto sys = detail::iota(0, ns);
    const auto bat = detail::iota(ns, ns + nr);
    const BipartiteState system_out = partial_trace(final_global, sys);
    const BipartiteState battery_out = partial_trace(final_global, bat);

    ProtocolReport r{initial, final_global, id};
    r.e_system_before = e_rho;
    r.e_system_after = detail::same_state(system_out, sigma) ? e_sigma : measure_value(id, system_out, opts);
    r.e_battery_before = e_sigma;
    r.e_battery_after = detail::same_state(battery_out, rho) ? e_rho : measure_value(id, battery_out, opts);
    r.final_system_trace_distance_to_target = trace_distance(system_out.matrix(), sigma.matrix());
    r.final_global_trace_distance = trace_distance(final_global.matrix(), tensor(sigma, rho, max_dim).matrix());
    r.feasible = detail::compare(id, r.e_battery_after, r.e_battery_before, opts) == Verdict::Feasible;
    r.system_components = ns;
    r.battery_components = nr;
    return r;
}

struct RatePlan {
    double rate = 0.0;
    std::int64_t m = 0;
    std::int64_t n = 1;
    /// rate - m/n.
    double epsilon_gap = 0.0;
    bool exact = false;
    bool zero_error = false;
    double e_from = 0.0;
    double e_to = 0.0;
};

/// Plan from already evaluated monotone values.
inline RatePlan rate_plan(double e_from, double e_to, MeasureId id) {
    if (e_to <= detail::zero_threshold(id))
        throw UnboundedRate("target carries no " + to_string(id) + " (E = " + detail::sci(e_to, 3) + ")");
    RatePlan plan;
    plan.e_from = e_from;
    plan.e_to = e_to;
    plan.rate = std::max(0.0, e_from) / e_to;
    const auto approx = lower_rational(plan.rate, kMaxDenominator, kExactRateTolerance);
    plan.m = approx.fraction.p;
    plan.n = approx.fraction.q;
    plan.exact = approx.exact;
    plan.epsilon_gap = plan.rate - approx.fraction.value();
    return plan;
}

/// Asymptotic battery-assisted rate E(rho)/E(sigma) with an (m, n) copy plan.
inline RatePlan conversion_rate(const BipartiteState& rho, const BipartiteState& sigma, MeasureId id,
                                const OptimizerOptions& opts = {}) {
    const double e_to = measure_value(id, sigma, opts);
    const double e_from = detail::same_state(rho, sigma) ? e_to : measure_value(id, rho, opts);
    return rate_plan(e_from, e_to, id);
}

/// R(rho -> sigma) R(sigma -> rho).
inline double rate_cycle_product(const BipartiteState& rho, const BipartiteState& sigma, MeasureId id,
                                 const OptimizerOptions& opts = {}) {
    const double e_rho = measure_value(id, rho, opts);
    const double e_sigma = detail::same_state(rho, sigma) ? e_rho : measure_value(id, sigma, opts);
    return rate_plan(e_rho, e_sigma, id).rate * rate_plan(e_sigma, e_rho, id).rate;
}

inline void require_additive(MeasureId id) {
    if (!traits(id).additive) throw ApplicabilityError(to_string(id) + " is not additive");
}

/// Zero-error rate; only defined for additive measures.
inline RatePlan zero_error_rate(const BipartiteState& rho, const BipartiteState& sigma, MeasureId id,
                                const OptimizerOptions& opts = {}) {
    require_additive(id);
    RatePlan plan = conversion_rate(rho, sigma, id, opts);
    plan.zero_error = true;
    return plan;
}

struct MultiMeasureBound {
    double e1_rho, e1_sigma, e2_rho, e2_sigma;
    double r_fwd_bound;
    double r_bwd_bound;
    double product_bound;
};

namespace detail {

inline double ratio_or_inf(double num, double den, MeasureId id) {
    if (den <= zero_threshold(id)) return std::numeric_limits<double>::infinity();
    return std::max(0.0, num) / den;
}

inline MultiMeasureBound multi_bound_from_values(double e1r, double e1s, double e2r, double e2s, MeasureId m1,
                                                 MeasureId m2) {
    MultiMeasureBound b{e1r, e1s, e2r, e2s, 0, 0, 0};
    b.r_fwd_bound = std::min(ratio_or_inf(e1r, e1s, m1), ratio_or_inf(e2r, e2s, m2));
    b.r_bwd_bound = std::min(ratio_or_inf(e1s, e1r, m1), ratio_or_inf(e2s, e2r, m2));
    b.product_bound = b.r_fwd_bound * b.r_bwd_bound;
    return b;
}

} // namespace detail

/// Rate bounds when the battery must preserve two measures at once.
inline MultiMeasureBound multi_measure_bound(const BipartiteState& rho, const BipartiteState& sigma, MeasureId m1,
                                             MeasureId m2, const OptimizerOptions& opts = {}) {
    return detail::multi_bound_from_values(measure_value(m1, rho, opts), measure_value(m1, sigma, opts),
                                           measure_value(m2, rho, opts), measure_value(m2, sigma, opts), m1, m2);
}

struct NonequivalentPair {
    BipartiteState rho;
    BipartiteState sigma;
    std::size_t trial = 0;
    MultiMeasureBound values;
};

inline constexpr std::size_t kSearchBudget = 100'000;
inline constexpr double kSearchMargin = 1e-3;

namespace detail {

inline double ordering_margin(MeasureId id, const OptimizerOptions& opts) {
    return traits(id).optimizer_backed ? std::max(kSearchMargin, 2.0 * opts.slack) : kSearchMargin;
}

} // namespace detail

/// Seeded random search for a pair ordered oppositely by two measures:
/// E1(rho) > E1(sigma) but E2(rho) < E2(sigma), each by a clear margin.
/// Trial t draws from an engine seeded by (seed, t), so the first hit is
/// independent of how trials are scheduled.
inline NonequivalentPair search_nonequivalent_pair(MeasureId m1, MeasureId m2, std::uint64_t seed,
                                                   const OptimizerOptions& opts = {},
                                                   std::size_t budget = kSearchBudget) {
    if (m1 == m2) throw SearchExhausted("identical measures order every pair the same way");
    const bool pure = traits(m1).pure_only || traits(m2).pure_only;
    const double g1 = detail::ordering_margin(m1, opts), g2 = detail::ordering_margin(m2, opts);

    for (std::size_t t = 0; t < budget; ++t) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(t & 0xffffffffu), static_cast<std::uint32_t>(t >> 32)};
        std::mt19937_64 rng(seq);
        auto draw = [&] {
            if (pure) return random_pure_state(2, 2, rng);
            std::uniform_int_distribution<std::size_t> rank(1, 3);
            return random_mixed_state(2, 2, rank(rng), rng);
        };
        BipartiteState a = draw();
        BipartiteState b = draw();

        // Cheap measure first so most trials skip the optimizer.
        const bool first_cheap = !traits(m1).optimizer_backed || traits(m2).optimizer_backed;
        const MeasureId mc = first_cheap ? m1 : m2, me = first_cheap ? m2 : m1;
        const double gc = first_cheap ? g1 : g2, ge = first_cheap ? g2 : g1;
        const double c_a = measure_value(mc, a, opts), c_b = measure_value(mc, b, opts);
        if (std::abs(c_a - c_b) < gc || std::min(c_a, c_b) <= detail::zero_threshold(mc)) continue;
        const double e_a = measure_value(me, a, opts), e_b = measure_value(me, b, opts);
        if (std::abs(e_a - e_b) < ge || std::min(e_a, e_b) <= detail::zero_threshold(me)) continue;
        if ((c_a > c_b) == (e_a > e_b)) continue;

        // Orient so that m1 prefers rho.
        const double m1_a = first_cheap ? c_a : e_a, m1_b = first_cheap ? c_b : e_b;
        const double m2_a = first_cheap ? e_a : c_a, m2_b = first_cheap ? e_b : c_b;
        if (m1_a > m1_b)
            return {std::move(a), std::move(b), t, detail::multi_bound_from_values(m1_a, m1_b, m2_a, m2_b, m1, m2)};
        return {std::move(b), std::move(a), t, detail::multi_bound_from_values(m1_b, m1_a, m2_b, m2_a, m1, m2)};
    }
    throw SearchExhausted("no oppositely ordered pair for " + to_string(m1) + " / " + to_string(m2) + " in " +
                          std::to_string(budget) + " trials");
}

struct ContinuityCheck {
    double epsilon = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double e_rho_tau = 0.0;
    double e_sigma_tau = 0.0;
};

/// Continuity of relative entropy of entanglement under a shared ancilla:
/// |E_r(rho (x) tau) - E_r(sigma (x) tau)| <= eps log2 d + (1 + eps) h(eps / (1 + eps)),
/// with eps the trace distance of rho and sigma and d the dimension of rho.
inline ContinuityCheck continuity_bound_check(const BipartiteState& rho, const BipartiteState& sigma,
                                              const BipartiteState& tau, const OptimizerOptions& opts = {}) {
    if (rho.layout() != sigma.layout()) throw ShapeError("rho and sigma must share dimensions");
    ContinuityCheck c;
    c.epsilon = std::min(1.0, trace_distance(rho, sigma));
    const double eps = c.epsilon;
    c.rhs = eps * std::log2(static_cast<double>(rho.dim())) + (1.0 + eps) * binary_entropy(eps / (1.0 + eps));
    const BipartiteState rt = tensor(rho, tau), st = tensor(sigma, tau);
    if (rt.dim() > opts.max_dimension)
        throw CapacityError("rho (x) tau has total dimension " + std::to_string(rt.dim()) + ", optimizer limit " +
                            std::to_string(opts.max_dimension));
    c.e_rho_tau = measure_value(MeasureId::RelativeEntropy, rt, opts);
    c.e_sigma_tau = eps == 0.0 ? c.e_rho_tau : measure_value(MeasureId::RelativeEntropy, st, opts);
    c.lhs = std::abs(c.e_rho_tau - c.e_sigma_tau);
    c.holds = c.lhs <= c.rhs + 2.0 * opts.slack;
    return c;
}

struct BalanceCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// System-side drop versus battery-side gain for an additive monotone.
inline BalanceCheck resource_balance_check(const ProtocolReport& report, MeasureId f,
                                           const OptimizerOptions& opts = {}) {
    require_additive(f);
    double sys_before, sys_after, bat_before, bat_after;
    if (f == report.battery_measure) {
        sys_before = report.e_system_before;
        sys_after = report.e_system_after;
        bat_before = report.e_battery_before;
        bat_after = report.e_battery_after;
    } else {
        const std::size_t nr = report.battery_components, ns = report.system_components;
        sys_before = measure_value(f, partial_trace(report.initial_global, detail::iota(0, nr)), opts);
        bat_before = measure_value(f, partial_trace(report.initial_global, detail::iota(nr, nr + ns)), opts);
        sys_after = measure_value(f, partial_trace(report.final_global, detail::iota(0, ns)), opts);
        bat_after = measure_value(f, partial_trace(report.final_global, detail::iota(ns, ns + nr)), opts);
    }
    BalanceCheck b;
    b.lhs = sys_before - sys_after;
    b.rhs = bat_after - bat_before;
    b.holds = b.lhs >= b.rhs - kRelativeTolerance * std::max({1.0, std::abs(b.lhs), std::abs(b.rhs)});
    return b;
}

} // namespace entbat
