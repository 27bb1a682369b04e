#pragma once

// Thermodynamic battery: Gibbs states and free energies in bits (k_B T = 1).

#include <cmath>
#include <limits>
#include <string>

#include "entbat/battery.hpp"
#include "entbat/state_io.hpp"

namespace entbat {

/// Density matrix with a diagonal Hamiltonian (energies, in its eigenbasis)
/// and inverse temperature.
class ThermoState {
public:
    ThermoState(ComplexMatrix rho, RealVector energies, double beta)
        : rho_(as_state(std::move(rho))), energies_(std::move(energies)), beta_(beta) {
        if (!(beta_ > 0.0) || !std::isfinite(beta_))
            throw DomainError("beta must be finite and > 0, got " + detail::sci(beta_, 6));
        if (energies_.size() != rho_.matrix().rows())
            throw ShapeError("rho is " + std::to_string(rho_.matrix().rows()) + "-dimensional but " +
                             std::to_string(energies_.size()) + " energies given");
        if (!energies_.allFinite()) throw ValidationError("non-finite energy");
        const double e0 = energies_.minCoeff();
        RealVector w = (-beta_ * (energies_.array() - e0)).exp().matrix();
        const double sum = w.sum();
        gibbs_ = w / sum;
        log2_z_ = (-beta_ * e0 + std::log(sum)) / std::numbers::ln2;
        if (!std::isfinite(log2_z_)) throw DomainError("partition function is not finite");
    }

    const ComplexMatrix& rho() const { return rho_.matrix(); }
    const RealVector& energies() const { return energies_; }
    double beta() const { return beta_; }
    std::size_t dim() const { return static_cast<std::size_t>(energies_.size()); }
    /// Diagonal of the Gibbs state.
    const RealVector& gibbs() const { return gibbs_; }
    ComplexMatrix gibbs_matrix() const { return gibbs_.cast<Complex>().asDiagonal(); }
    double log2_partition() const { return log2_z_; }
    double partition() const { return std::exp2(log2_z_); }

    /// Largest off-diagonal magnitude in the energy eigenbasis.
    double coherence() const {
        ComplexMatrix off = rho();
        off.diagonal().setZero();
        return off.size() == 0 ? 0.0 : off.cwiseAbs().maxCoeff();
    }

    RealVector populations() const { return rho().diagonal().real(); }

private:
    static BipartiteState as_state(ComplexMatrix m) {
        const auto n = static_cast<std::size_t>(m.rows());
        return {std::move(m), Layout::single(n, 1)};
    }

    BipartiteState rho_;
    RealVector energies_;
    double beta_;
    RealVector gibbs_;
    double log2_z_ = 0.0;
};

inline ThermoState gibbs_state(RealVector energies, double beta) {
    const auto n = energies.size();
    ThermoState probe(ComplexMatrix::Identity(n, n) / static_cast<double>(n), energies, beta);
    return {probe.gibbs_matrix(), std::move(energies), beta};
}

/// Same Hamiltonian and temperature, different state.
inline ThermoState with_rho(const ThermoState& s, ComplexMatrix rho) { return {std::move(rho), s.energies(), s.beta()}; }

/// Independent composition: rho1 (x) rho2 with H1 (x) 1 + 1 (x) H2.
inline ThermoState compose(const ThermoState& x, const ThermoState& y) {
    if (std::abs(x.beta() - y.beta()) > 1e-12 * std::max(x.beta(), y.beta()))
        throw DomainError("composition needs a single bath temperature");
    RealVector e(x.energies().size() * y.energies().size());
    for (Eigen::Index i = 0; i < x.energies().size(); ++i)
        for (Eigen::Index j = 0; j < y.energies().size(); ++j)
            e(i * y.energies().size() + j) = x.energies()(i) + y.energies()(j);
    return {kron(x.rho(), y.rho()), std::move(e), x.beta()};
}

enum class FreeEnergyVariant { StandardOffset, RelativeToGibbs, Max, Renyi };

inline std::string to_string(FreeEnergyVariant v) {
    switch (v) {
    case FreeEnergyVariant::StandardOffset: return "standard-offset";
    case FreeEnergyVariant::RelativeToGibbs: return "relative-to-gibbs";
    case FreeEnergyVariant::Max: return "max";
    case FreeEnergyVariant::Renyi: return "renyi";
    }
    return "?";
}

inline FreeEnergyVariant parse_free_energy_variant(std::string_view name) {
    for (auto v : {FreeEnergyVariant::StandardOffset, FreeEnergyVariant::RelativeToGibbs, FreeEnergyVariant::Max,
                   FreeEnergyVariant::Renyi})
        if (to_string(v) == name) return v;
    throw DomainError("unknown free-energy variant '" + std::string(name) + "'");
}

struct FreeEnergyValue {
    double f = 0.0;
    FreeEnergyVariant variant = FreeEnergyVariant::StandardOffset;
    double alpha = 1.0; // only meaningful for Renyi
};

/// F_max = log2 of the largest eigenvalue of gamma^{-1/2} rho gamma^{-1/2}.
inline FreeEnergyValue f_max(const ThermoState& s) {
    const RealVector& g = s.gibbs();
    if (g.minCoeff() <= 0.0) throw DomainError("Gibbs state is singular (population underflow)");
    const RealVector inv_sqrt = g.cwiseSqrt().cwiseInverse();
    const ComplexMatrix m = inv_sqrt.cast<Complex>().asDiagonal() * s.rho() * inv_sqrt.cast<Complex>().asDiagonal();
    return {std::log2(eigvalsh(0.5 * (m + m.adjoint()))(0)), FreeEnergyVariant::Max, 1.0};
}

/// S(rho || gamma) - log2 Z (standard-offset) or S(rho || gamma).
inline FreeEnergyValue free_energy(const ThermoState& s,
                                   FreeEnergyVariant variant = FreeEnergyVariant::StandardOffset) {
    switch (variant) {
    case FreeEnergyVariant::StandardOffset:
    case FreeEnergyVariant::RelativeToGibbs: {
        const double d = relative_entropy(s.rho(), s.gibbs_matrix());
        return {variant == FreeEnergyVariant::StandardOffset ? d - s.log2_partition() : d, variant, 1.0};
    }
    case FreeEnergyVariant::Max: return f_max(s);
    case FreeEnergyVariant::Renyi: break;
    }
    throw DomainError("Renyi free energy needs an order; use renyi_free_energy");
}

inline constexpr double kCoherenceTolerance = 1e-9;

/// Classical Renyi divergence D_alpha(p || g) of the populations from the
/// Gibbs distribution, for states diagonal in the energy basis. alpha = 1
/// is the relative entropy and alpha = +inf the max-divergence.
inline FreeEnergyValue renyi_free_energy(const ThermoState& s, double alpha) {
    if (std::isnan(alpha) || alpha < 0.0) throw DomainError("Renyi order must be >= 0, got " + detail::sci(alpha, 6));
    if (s.coherence() > kCoherenceTolerance)
        throw ApplicabilityError("state has coherence " + detail::sci(s.coherence()) + " in the energy basis");
    const RealVector p = s.populations();
    const RealVector& g = s.gibbs();
    FreeEnergyValue out{0.0, FreeEnergyVariant::Renyi, alpha};
    if (alpha == 1.0) {
        out.f = free_energy(s, FreeEnergyVariant::RelativeToGibbs).f;
    } else if (std::isinf(alpha)) {
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < p.size(); ++i)
            if (p(i) > kEigenCutoff) best = std::max(best, std::log2(p(i) / g(i)));
        out.f = best;
    } else {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < p.size(); ++i)
            if (p(i) > kEigenCutoff) sum += std::pow(p(i), alpha) * std::pow(g(i), 1.0 - alpha);
        out.f = std::log2(sum) / (alpha - 1.0);
    }
    return out;
}

namespace detail {

inline void require_same_bath(const ThermoState& x, const ThermoState& y) {
    if (std::abs(x.beta() - y.beta()) > 1e-12 * std::max(x.beta(), y.beta()))
        throw DomainError("states are at different temperatures (beta " + sci(x.beta(), 6) + " vs " +
                          sci(y.beta(), 6) + ")");
}

inline Verdict compare_free_energies(double f1, double f2) {
    const double tol = kRelativeTolerance * std::max({1.0, std::abs(f1), std::abs(f2)});
    return f1 - f2 >= -tol ? Verdict::Feasible : Verdict::Infeasible;
}

} // namespace detail

/// Convertibility under thermal operations with a free-energy battery:
/// feasible iff F(s1) >= F(s2) (standard-offset free energies).
inline Verdict thermo_feasible(const ThermoState& s1, const ThermoState& s2) {
    detail::require_same_bath(s1, s2);
    return detail::compare_free_energies(free_energy(s1).f, free_energy(s2).f);
}

struct ThermoProtocolReport {
    ComplexMatrix initial_global;
    RealVector initial_energies;
    ComplexMatrix final_global;
    RealVector final_energies;
    double f_system_before = 0.0;
    double f_system_after = 0.0;
    double f_battery_before = 0.0;
    double f_battery_after = 0.0;
    bool feasible = false;
    double final_system_trace_distance_to_target = 0.0;
};

/// Swap of system and battery together with their Hamiltonians, the battery
/// having been prepared in the target (sigma, H').
inline ThermoProtocolReport thermo_swap_protocol(const ThermoState& s1, const ThermoState& s2) {
    detail::require_same_bath(s1, s2);
    const double f1 = free_energy(s1).f, f2 = free_energy(s2).f;
    if (detail::compare_free_energies(f1, f2) != Verdict::Feasible)
        throw InfeasibleError("free energy " + detail::sci(f1, 12) + " below target " + detail::sci(f2, 12));

    const ThermoState before = compose(s1, s2);
    const std::vector<std::size_t> dims{s1.dim(), s2.dim()};
    const std::vector<std::size_t> order{1, 0};
    const ComplexMatrix swapped = detail::permute(before.rho(), dims, order);
    const ThermoState after = compose(s2, s1);

    ThermoProtocolReport r;
    r.initial_global = before.rho();
    r.initial_energies = before.energies();
    r.final_global = swapped;
    r.final_energies = after.energies();
    const std::vector<bool> keep_first{true, false};
    const std::vector<std::size_t> swapped_dims{s2.dim(), s1.dim()};
    const ComplexMatrix system_out = detail::reduce(swapped, swapped_dims, keep_first);
    const ComplexMatrix battery_out = detail::reduce(swapped, swapped_dims, std::vector<bool>{false, true});
    r.f_system_before = f1;
    r.f_system_after = free_energy(ThermoState(system_out, s2.energies(), s2.beta())).f;
    r.f_battery_before = f2;
    r.f_battery_after = free_energy(ThermoState(battery_out, s1.energies(), s1.beta())).f;
    r.final_system_trace_distance_to_target = trace_distance(system_out, s2.rho());
    r.feasible = detail::compare_free_energies(r.f_battery_after, r.f_battery_before) == Verdict::Feasible;
    return r;
}

struct ThermoSelfDilution {
    double p = 0.0; // excited-state population
    double r = 1.0;
    double r_prime = 1.0;
    double product = 1.0;
    /// rho equals the Gibbs state; both ratios are 0/0 and the product is
    /// reported as 1.
    bool at_gibbs = false;
};

/// r r' = (F_max(rho)/F(rho)) (F(|1><1|)/F_max(|1><1|)) for an incoherent
/// qubit, with F = S(. || gamma).
inline ThermoSelfDilution thermo_self_dilution(const ThermoState& s) {
    if (s.dim() != 2) throw ApplicabilityError("self-dilution needs a qubit, got dimension " + std::to_string(s.dim()));
    if (s.coherence() > kCoherenceTolerance)
        throw ApplicabilityError("state has coherence " + detail::sci(s.coherence()) + " in the energy basis");
    ThermoSelfDilution out;
    out.p = s.populations()(1);
    const ComplexMatrix excited = ComplexVector::Unit(2, 1) * ComplexVector::Unit(2, 1).adjoint();
    const ThermoState one = with_rho(s, excited);
    out.r_prime = free_energy(one, FreeEnergyVariant::RelativeToGibbs).f / f_max(one).f;
    if (trace_distance(s.rho(), s.gibbs_matrix()) <= kRelativeTolerance) {
        out.at_gibbs = true;
        out.r = 1.0;
        out.product = 1.0;
        return out;
    }
    out.r = f_max(s).f / free_energy(s, FreeEnergyVariant::RelativeToGibbs).f;
    out.product = out.r * out.r_prime;
    return out;
}

// ---- scenario files --------------------------------------------------------
//
//   {"energies": [0, 1], "beta": 1.0, "rho": [0.7, 0.3]}
//   {"hamiltonian": [[...]], "beta": 1.0, "rho": [[[re, im], ...], ...]}
//   {"energies": [0, 1], "beta": 1.0, "rho": "gibbs"}
//
// A full Hamiltonian is diagonalized and rho rotated into its eigenbasis.

inline ThermoState thermo_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("thermo file must be a JSON object");
    const double beta = detail::read_number(detail::require(j, "beta"), "beta");
    RealVector energies;
    ComplexMatrix basis;
    if (j.contains("energies")) {
        const Json& e = j["energies"];
        if (!e.is_array() || e.empty()) throw ParseError("field 'energies': expected a non-empty array");
        energies.resize(static_cast<Eigen::Index>(e.size()));
        for (std::size_t i = 0; i < e.size(); ++i)
            energies(static_cast<Eigen::Index>(i)) = detail::read_number(e[i], "energies[" + std::to_string(i) + "]");
    } else if (j.contains("hamiltonian")) {
        const ComplexMatrix h = detail::read_complex_matrix(j["hamiltonian"], "hamiltonian");
        if (detail::max_hermitian_defect(h) > kHermitianTolerance * std::max(1.0, h.cwiseAbs().maxCoeff()))
            throw ValidationError("hamiltonian is not Hermitian");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
        energies = es.eigenvalues();
        basis = es.eigenvectors();
    } else {
        throw ParseError("missing field 'energies' (or 'hamiltonian')");
    }
    const auto n = energies.size();
    const Json& r = detail::require(j, "rho");
    ComplexMatrix rho;
    if (r.is_string()) {
        if (r.get<std::string>() != "gibbs") throw ParseError("field 'rho': unknown state '" + r.get<std::string>() + "'");
        return gibbs_state(std::move(energies), beta);
    }
    if (r.is_array() && !r.empty() && r[0].is_number()) {
        if (r.size() != static_cast<std::size_t>(n))
            throw ValidationError("rho diagonal has " + std::to_string(r.size()) + " entries for " +
                                  std::to_string(n) + " energies");
        rho = ComplexMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            rho(i, i) = detail::read_number(r[static_cast<std::size_t>(i)], "rho[" + std::to_string(i) + "]");
    } else {
        rho = detail::read_complex_matrix(r, "rho");
    }
    if (basis.size() != 0) {
        if (rho.rows() != n) throw ValidationError("rho and hamiltonian dimensions differ");
        rho = (basis.adjoint() * rho * basis).eval();
    }
    return {std::move(rho), std::move(energies), beta};
}

inline ThermoState load_thermo(const std::string& path) {
    const Json j = read_json_file(path);
    try {
        return thermo_from_json(j);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace entbat
