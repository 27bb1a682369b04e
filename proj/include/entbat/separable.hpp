#pragma once

// Minimization of S(rho || sigma) over separable sigma, parametrized as a
// convex combination of product pure states.

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "entbat/states.hpp"

namespace entbat {

/// sigma = sum_i w_i |a_i><a_i| (x) |b_i><b_i|. Local vectors are stored
/// as the columns of `local_a` (dA x k) and `local_b` (dB x k).
struct SeparableAnsatz {
    RealVector weights;
    ComplexMatrix local_a;
    ComplexMatrix local_b;

    std::size_t terms() const { return static_cast<std::size_t>(weights.size()); }

    /// Columns are the product vectors a_i (x) b_i.
    ComplexMatrix product_vectors() const {
        const auto da = local_a.rows(), db = local_b.rows();
        ComplexMatrix p(da * db, local_a.cols());
        for (Eigen::Index x = 0; x < da; ++x)
            p.middleRows(x * db, db) = local_b * local_a.row(x).asDiagonal();
        return p;
    }

    ComplexMatrix assemble() const {
        const ComplexMatrix p = product_vectors();
        return p * weights.cast<Complex>().asDiagonal() * p.adjoint();
    }

    BipartiteState state(const Layout& layout) const {
        ComplexMatrix m = assemble();
        m = (0.5 * (m + m.adjoint())).eval();
        return {BipartiteState::Unchecked{}, std::move(m), layout};
    }
};

struct OptimizerOptions {
    int restarts = 8;
    int max_iterations = 5000;
    /// Converged once the objective improved by less than this over the
    /// last `window` iterations.
    double tolerance = 1e-8;
    int window = 20;
    std::uint64_t seed = 0;
    /// Accuracy band attached to optimizer values when they are compared
    /// with each other (feasibility verdicts, continuity checks).
    double slack = 5e-3;
    std::size_t max_dimension = 36;
    bool record_history = false;
};

struct SeparableFit {
    double value = std::numeric_limits<double>::infinity();
    SeparableAnsatz ansatz;
    bool converged = false;
    int iterations = 0;
    int best_restart = -1;
    /// Objective per iteration of the winning restart (if recorded).
    std::vector<double> history;
};

namespace detail {

/// Evaluation of S(rho || sigma) that keeps the spectral data needed for
/// the gradient.
struct RelativeEntropyPoint {
    double value = std::numeric_limits<double>::infinity();
    Spectrum spectrum;
    ComplexMatrix rotated; // U^dagger rho U in the eigenbasis of sigma
};

inline RelativeEntropyPoint evaluate_relative_entropy(const ComplexMatrix& rho, double rho_entropy,
                                                      const ComplexMatrix& sigma) {
    RelativeEntropyPoint p;
    p.spectrum = eigh(sigma);
    p.rotated = p.spectrum.eigenvectors.adjoint() * rho * p.spectrum.eigenvectors;
    double cross = 0.0;
    for (Eigen::Index k = 0; k < p.spectrum.eigenvalues.size(); ++k) {
        const double w = p.rotated(k, k).real();
        const double mu = p.spectrum.eigenvalues(k);
        if (mu <= kEigenCutoff) {
            if (w > kEigenCutoff) return p; // value stays +inf
            continue;
        }
        cross -= w * std::log2(mu);
    }
    p.value = cross - rho_entropy;
    return p;
}

/// Gradient of sigma -> -Tr(rho log2 sigma), via Loewner divided
/// differences of log2 in the eigenbasis of sigma.
inline ComplexMatrix relative_entropy_gradient(const RelativeEntropyPoint& p) {
    const auto n = p.spectrum.eigenvalues.size();
    ComplexMatrix h(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double mk = std::max(p.spectrum.eigenvalues(k), kEigenCutoff);
        for (Eigen::Index l = 0; l < n; ++l) {
            const double ml = std::max(p.spectrum.eigenvalues(l), kEigenCutoff);
            double dd;
            if (std::abs(mk - ml) > 1e-10 * std::max(mk, ml))
                dd = (std::log2(mk) - std::log2(ml)) / (mk - ml);
            else
                dd = 2.0 / ((mk + ml) * std::numbers::ln2);
            h(k, l) = -p.rotated(k, l) * dd;
        }
    }
    return p.spectrum.eigenvectors * h * p.spectrum.eigenvectors.adjoint();
}

inline void normalize_columns(ComplexMatrix& m) {
    const RealVector norms = m.colwise().norm();
    for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) /= norms(c);
}

/// Descent from one starting ansatz, alternating an exponentiated-gradient
/// step on the weights with a Riemannian gradient step on the local vectors.
/// Each step uses a halving line search and is only taken if it lowers the
/// objective, so the recorded objective never increases.
inline SeparableFit descend(const ComplexMatrix& rho, SeparableAnsatz ansatz, const OptimizerOptions& opts) {
    constexpr int kMaxHalvings = 30;
    const double rho_entropy = von_neumann_entropy(rho);
    const Eigen::Index da = ansatz.local_a.rows(), db = ansatz.local_b.rows(), k = ansatz.local_a.cols();

    RelativeEntropyPoint here = evaluate_relative_entropy(rho, rho_entropy, ansatz.assemble());
    std::vector<double> trace{here.value};
    double weight_step = 1.0, vector_step = 1.0;

    SeparableFit fit;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        // (i) weights
        {
            const ComplexMatrix p = ansatz.product_vectors();
            const ComplexMatrix gp = relative_entropy_gradient(here) * p;
            const RealVector g = p.conjugate().cwiseProduct(gp).colwise().sum().real().transpose();
            const RealVector shifted = (g.array() - g.minCoeff()).matrix();
            SeparableAnsatz trial = ansatz;
            double step = std::min(1.0, 2.0 * weight_step);
            for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
                trial.weights = ansatz.weights.cwiseProduct((-step * shifted.array()).exp().matrix());
                trial.weights /= trial.weights.sum();
                auto next = evaluate_relative_entropy(rho, rho_entropy, trial.assemble());
                if (next.value < here.value) {
                    ansatz.weights = trial.weights;
                    here = std::move(next);
                    weight_step = step;
                    break;
                }
            }
        }
        // (ii) local vectors
        {
            const ComplexMatrix p = ansatz.product_vectors();
            const ComplexMatrix gp = relative_entropy_gradient(here) * p;
            ComplexMatrix ga = ComplexMatrix::Zero(da, k);
            ComplexMatrix gb = ComplexMatrix::Zero(db, k);
            for (Eigen::Index x = 0; x < da; ++x) {
                const auto block = gp.middleRows(x * db, db);
                ga.row(x) = ansatz.local_b.conjugate().cwiseProduct(block).colwise().sum();
                gb += block * ansatz.local_a.row(x).conjugate().asDiagonal();
            }
            // Project onto the tangent spaces of the unit spheres.
            const Eigen::RowVectorXcd ca = ansatz.local_a.conjugate().cwiseProduct(ga).colwise().sum();
            const Eigen::RowVectorXcd cb = ansatz.local_b.conjugate().cwiseProduct(gb).colwise().sum();
            ga -= ansatz.local_a * ca.asDiagonal();
            gb -= ansatz.local_b * cb.asDiagonal();

            SeparableAnsatz trial = ansatz;
            double step = std::min(1.0, 2.0 * vector_step);
            for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
                trial.local_a = ansatz.local_a - step * ga;
                trial.local_b = ansatz.local_b - step * gb;
                normalize_columns(trial.local_a);
                normalize_columns(trial.local_b);
                auto next = evaluate_relative_entropy(rho, rho_entropy, trial.assemble());
                if (next.value < here.value) {
                    ansatz.local_a = std::move(trial.local_a);
                    ansatz.local_b = std::move(trial.local_b);
                    here = std::move(next);
                    vector_step = step;
                    break;
                }
            }
        }
        trace.push_back(here.value);
        const auto n = trace.size();
        const auto w = static_cast<std::size_t>(opts.window);
        if (n > w && trace[n - 1 - w] - here.value < opts.tolerance) {
            fit.converged = true;
            ++it;
            break;
        }
    }
    fit.value = here.value;
    fit.iterations = it;
    fit.ansatz = std::move(ansatz);
    if (opts.record_history) fit.history = std::move(trace);
    return fit;
}

template <class Rng>
SeparableAnsatz random_ansatz(std::size_t k, std::size_t da, std::size_t db, Rng& rng) {
    SeparableAnsatz s;
    const auto n = static_cast<Eigen::Index>(k);
    s.weights.resize(n);
    s.local_a.resize(static_cast<Eigen::Index>(da), n);
    s.local_b.resize(static_cast<Eigen::Index>(db), n);
    std::exponential_distribution<double> e(1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        s.weights(i) = e(rng);
        s.local_a.col(i) = random_unit_vector(da, rng);
        s.local_b.col(i) = random_unit_vector(db, rng);
    }
    s.weights /= s.weights.sum();
    return s;
}

} // namespace detail

/// Multi-start minimization of S(rho || sigma) over separable sigma with
/// (dA dB)^2 product terms. The returned value is an upper bound on the
/// relative entropy of entanglement, certified by `ansatz`.
inline SeparableFit minimize_relative_entropy(const BipartiteState& rho, const OptimizerOptions& opts = {}) {
    if (rho.dim() > opts.max_dimension)
        throw CapacityError("relative entropy optimizer limited to total dimension " +
                            std::to_string(opts.max_dimension) + ", got " + std::to_string(rho.dim()));
    if (opts.restarts < 1) throw DomainError("restarts must be >= 1");
    const std::size_t da = rho.dim_a(), db = rho.dim_b();
    const std::size_t k = rho.dim() * rho.dim();

    SeparableFit best;
    for (int r = 0; r < opts.restarts; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed & 0xffffffffu),
                          static_cast<std::uint32_t>(opts.seed >> 32), static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        SeparableFit fit = detail::descend(rho.matrix(), detail::random_ansatz(k, da, db, rng), opts);
        if (fit.value < best.value) {
            best = std::move(fit);
            best.best_restart = r;
        }
    }
    // Report the value recomputed at the certificate.
    best.value = relative_entropy(rho.matrix(), best.ansatz.assemble());
    return best;
}

} // namespace entbat
