#pragma once

// Entanglement quantifiers behind one evaluation contract.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "entbat/separable.hpp"

namespace entbat {

enum class MeasureId {
    EntropyOfEntanglement,
    LogNegativity,
    RelativeEntropy,
    Geometric,
    SquashedUpper,
    SquashedPure,
    EntanglementCostPure,
};

inline constexpr std::array kAllMeasures{
    MeasureId::EntropyOfEntanglement, MeasureId::LogNegativity, MeasureId::RelativeEntropy,
    MeasureId::Geometric,             MeasureId::SquashedUpper, MeasureId::SquashedPure,
    MeasureId::EntanglementCostPure,
};

struct MeasureTraits {
    std::string_view name;
    bool pure_only;
    bool additive;
    /// Value is an optimizer upper bound rather than a closed form.
    bool optimizer_backed;
};

inline constexpr MeasureTraits traits(MeasureId id) {
    switch (id) {
    case MeasureId::EntropyOfEntanglement: return {"entropy-of-entanglement", true, true, false};
    case MeasureId::LogNegativity: return {"log-negativity", false, true, false};
    case MeasureId::RelativeEntropy: return {"relative-entropy", false, false, true};
    case MeasureId::Geometric: return {"geometric", true, false, false};
    case MeasureId::SquashedUpper: return {"squashed-upper", false, false, false};
    case MeasureId::SquashedPure: return {"squashed-pure", true, false, false};
    case MeasureId::EntanglementCostPure: return {"entanglement-cost-pure", true, true, false};
    }
    return {"?", false, false, false};
}

inline std::string to_string(MeasureId id) { return std::string(traits(id).name); }

inline MeasureId parse_measure(std::string_view name) {
    for (auto id : kAllMeasures)
        if (traits(id).name == name) return id;
    throw DomainError("unknown measure '" + std::string(name) + "'");
}

struct MeasureResult {
    MeasureId id;
    double value = 0.0;
    /// Closest separable state (relative entropy) or closest product state
    /// (geometric, one term of weight 1).
    std::optional<SeparableAnsatz> certificate;
    bool converged = true;
    int iterations = 0;
};

// ---- pure-state measures ---------------------------------------------------

inline MeasureResult entanglement_entropy(const PureSchmidtState& s) {
    return {MeasureId::EntropyOfEntanglement, shannon_entropy(s.schmidt()), std::nullopt, true, 0};
}

inline MeasureResult entanglement_entropy(const BipartiteState& s) {
    return entanglement_entropy(schmidt_decomposition(s).coefficients);
}

/// Entanglement cost of a pure state in singlets; numerically the entropy,
/// tagged separately so dilution ratios read clearly.
inline MeasureResult entanglement_cost_pure(const PureSchmidtState& s) {
    auto r = entanglement_entropy(s);
    r.id = MeasureId::EntanglementCostPure;
    return r;
}

inline MeasureResult entanglement_cost_pure(const BipartiteState& s) {
    return entanglement_cost_pure(schmidt_decomposition(s).coefficients);
}

inline MeasureResult squashed_pure(const PureSchmidtState& s) {
    auto r = entanglement_entropy(s);
    r.id = MeasureId::SquashedPure;
    return r;
}

inline MeasureResult squashed_pure(const BipartiteState& s) {
    return squashed_pure(schmidt_decomposition(s).coefficients);
}

/// 1 - (largest Schmidt coefficient); certificate is the product state
/// built from the dominant Schmidt vectors.
inline MeasureResult geometric_entanglement(const BipartiteState& s) {
    if (!is_pure(s))
        throw ApplicabilityError("geometric entanglement is only available for pure states (purity " +
                                 detail::sci(purity(s), 12) + ")");
    const auto dec = schmidt_decomposition(s);
    SeparableAnsatz cert;
    cert.weights = RealVector::Ones(1);
    cert.local_a = dec.top_a;
    cert.local_b = dec.top_b;
    return {MeasureId::Geometric, 1.0 - dec.coefficients.schmidt().front(), std::move(cert), true, 0};
}

inline MeasureResult geometric_entanglement(const PureSchmidtState& s) {
    const auto d = static_cast<Eigen::Index>(s.dim());
    SeparableAnsatz cert;
    cert.weights = RealVector::Ones(1);
    cert.local_a = ComplexVector::Unit(d, 0);
    cert.local_b = ComplexVector::Unit(d, 0);
    return {MeasureId::Geometric, 1.0 - s.schmidt().front(), std::move(cert), true, 0};
}

// ---- general measures ------------------------------------------------------

inline MeasureResult log_negativity(const BipartiteState& s) {
    const double norm = trace_norm(partial_transpose(s));
    return {MeasureId::LogNegativity, std::max(0.0, std::log2(norm)), std::nullopt, true, 0};
}

inline double mutual_information(const BipartiteState& s) {
    return von_neumann_entropy(partial_trace(s, Side::A)) + von_neumann_entropy(partial_trace(s, Side::B)) -
           von_neumann_entropy(s);
}

/// Half the mutual information: the squashed-entanglement objective at the
/// trivial extension, hence an upper bound on it.
inline MeasureResult squashed_upper(const BipartiteState& s) {
    return {MeasureId::SquashedUpper, std::max(0.0, 0.5 * mutual_information(s)), std::nullopt, true, 0};
}

inline MeasureResult relative_entropy_of_entanglement(const BipartiteState& s, const OptimizerOptions& opts = {}) {
    SeparableFit fit = minimize_relative_entropy(s, opts);
    return {MeasureId::RelativeEntropy, std::max(0.0, fit.value), std::move(fit.ansatz), fit.converged,
            fit.iterations};
}

/// Recomputes the defining objective at a result's certificate.
inline double objective_at_certificate(MeasureId id, const BipartiteState& s, const SeparableAnsatz& cert) {
    switch (id) {
    case MeasureId::RelativeEntropy: return std::max(0.0, relative_entropy(s.matrix(), cert.assemble()));
    case MeasureId::Geometric: return 1.0 - fidelity(s.matrix(), cert.assemble());
    default: throw ApplicabilityError(to_string(id) + " has no certificate");
    }
}

/// Uniform dispatch.
inline MeasureResult evaluate(MeasureId id, const BipartiteState& s, const OptimizerOptions& opts = {}) {
    switch (id) {
    case MeasureId::EntropyOfEntanglement: return entanglement_entropy(s);
    case MeasureId::LogNegativity: return log_negativity(s);
    case MeasureId::RelativeEntropy: return relative_entropy_of_entanglement(s, opts);
    case MeasureId::Geometric: return geometric_entanglement(s);
    case MeasureId::SquashedUpper: return squashed_upper(s);
    case MeasureId::SquashedPure: return squashed_pure(s);
    case MeasureId::EntanglementCostPure: return entanglement_cost_pure(s);
    }
    throw DomainError("unknown measure");
}

inline double measure_value(MeasureId id, const BipartiteState& s, const OptimizerOptions& opts = {}) {
    return evaluate(id, s, opts).value;
}

} // namespace entbat
