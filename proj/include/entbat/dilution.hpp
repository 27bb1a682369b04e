#pragma once

// Self-dilution curves for log-negativity, the battery-assisted distillation
// rate, and the geometric-entanglement embezzlement table.

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "entbat/battery.hpp"

namespace entbat {

struct CurvePoint {
    double alpha = 0.0;
    double e_n = 0.0;
    double e_c = 0.0;
    double ratio = 0.0;
};

/// E_n / E_c for cos(alpha)|00> + sin(alpha)|11>, evaluated numerically:
/// E_n from the trace norm of the partial transpose of the 4x4 density
/// matrix, E_c from the Schmidt coefficients of the same matrix.
inline CurvePoint self_dilution_point(double alpha) {
    const BipartiteState psi = pure_alpha(alpha).to_state();
    CurvePoint pt;
    pt.alpha = alpha;
    pt.e_n = log_negativity(psi).value;
    const auto dec = schmidt_decomposition(psi);
    pt.e_c = binary_entropy(dec.coefficients.schmidt().front());
    pt.ratio = pt.e_n / pt.e_c;
    return pt;
}

inline constexpr double kDefaultAlphaMin = 0.01;
inline constexpr double kDefaultAlphaMax = std::numbers::pi / 4;
inline constexpr std::size_t kDefaultCurveSteps = 200;

/// `steps` equally spaced points on [alpha_min, alpha_max], endpoints included.
inline std::vector<CurvePoint> self_dilution_curve(double alpha_min = kDefaultAlphaMin,
                                                   double alpha_max = kDefaultAlphaMax,
                                                   std::size_t steps = kDefaultCurveSteps) {
    if (!(alpha_min > 0.0 && alpha_min < alpha_max && alpha_max <= std::numbers::pi / 4 + 1e-15))
        throw DomainError("need 0 < alpha_min < alpha_max <= pi/4, got [" + detail::sci(alpha_min, 6) + ", " +
                          detail::sci(alpha_max, 6) + "]");
    if (steps < 2) throw DomainError("curve needs at least 2 steps");
    std::vector<CurvePoint> out;
    out.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double a = i + 1 == steps ? alpha_max
                                        : alpha_min + (alpha_max - alpha_min) * static_cast<double>(i) /
                                                          static_cast<double>(steps - 1);
        out.push_back(self_dilution_point(a));
    }
    return out;
}

/// %.12g, independent of the global locale.
inline std::string format_g12(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    return std::string(buf, r.ptr);
}

inline void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
    out << "alpha,e_n,e_c,ratio\n";
    for (const auto& p : curve)
        out << format_g12(p.alpha) << ',' << format_g12(p.e_n) << ',' << format_g12(p.e_c) << ','
            << format_g12(p.ratio) << '\n';
}

/// Battery-assisted singlet distillation rate, which equals E_n.
inline double distillation_bound(const BipartiteState& rho) { return log_negativity(rho).value; }

struct EmbezzlementRow {
    std::size_t d = 0;
    double e_g = 0.0;
    double entropy = 0.0;
    /// Singlets of entanglement entropy gained per Bell pair spent.
    double amplification = 0.0;
    /// The swap Bell -> psi_d is allowed when the battery only tracks E_g.
    bool swap_feasible = false;
    double battery_before = 0.0;
    double battery_after = 0.0;
};

/// For each d: E_g(psi_d) stays 1/2 while its entropy grows without bound, so
/// a geometric-entanglement battery turns Bell pairs into arbitrarily
/// entangled states.
inline std::vector<EmbezzlementRow> embezzlement_demo(const std::vector<std::size_t>& ds) {
    std::vector<EmbezzlementRow> rows;
    const BipartiteState phi = bell();
    for (std::size_t d : ds) {
        const PureSchmidtState psi = embezzler_psi(d);
        EmbezzlementRow row;
        row.d = d;
        row.e_g = geometric_entanglement(psi).value;
        row.entropy = entanglement_entropy(psi).value;
        row.amplification = row.entropy / entanglement_entropy(PureSchmidtState({0.5, 0.5})).value;
        const ProtocolReport rep = swap_protocol(phi, psi.to_state(), MeasureId::Geometric);
        row.swap_feasible = rep.feasible && rep.final_system_trace_distance_to_target <= 1e-12;
        row.battery_before = rep.e_battery_before;
        row.battery_after = rep.e_battery_after;
        rows.push_back(row);
    }
    return rows;
}

} // namespace entbat
