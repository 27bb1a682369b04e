#pragma once

// Named states and random-state helpers.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "entbat/qmat.hpp"

namespace entbat {

/// Pure bipartite state given by its Schmidt probabilities (squared
/// amplitudes), kept sorted in descending order. Local dimensions equal the
/// vector length.
class PureSchmidtState {
public:
    explicit PureSchmidtState(std::vector<double> schmidt) : schmidt_(std::move(schmidt)) {
        if (schmidt_.empty()) throw DomainError("Schmidt vector is empty");
        double sum = 0.0;
        for (double p : schmidt_) {
            if (!std::isfinite(p) || p < 0.0) throw ValidationError("negative Schmidt coefficient " + detail::sci(p));
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("Schmidt coefficients sum to " + detail::sci(sum, 12));
        for (double& p : schmidt_) p /= sum;
        std::sort(schmidt_.begin(), schmidt_.end(), std::greater<>{});
    }

    const std::vector<double>& schmidt() const { return schmidt_; }
    std::size_t dim() const { return schmidt_.size(); }

    /// |psi> = sum_i sqrt(p_i) |ii> as a density matrix.
    BipartiteState to_state() const {
        const auto d = static_cast<Eigen::Index>(schmidt_.size());
        ComplexVector psi = ComplexVector::Zero(d * d);
        for (Eigen::Index i = 0; i < d; ++i) psi(i * d + i) = std::sqrt(schmidt_[static_cast<std::size_t>(i)]);
        return {BipartiteState::Unchecked{}, psi * psi.adjoint(), Layout::single(schmidt_.size(), schmidt_.size())};
    }

private:
    std::vector<double> schmidt_;
};

/// Purity threshold used to decide whether a BipartiteState is pure.
inline constexpr double kPurityTolerance = 1e-9;

inline bool is_pure(const BipartiteState& s) { return purity(s) >= 1.0 - kPurityTolerance; }

/// Schmidt decomposition of a pure state: probabilities plus the local
/// vectors of the dominant term.
struct SchmidtDecomposition {
    PureSchmidtState coefficients;
    ComplexVector top_a;
    ComplexVector top_b;
};

/// Throws ApplicabilityError for mixed input.
inline SchmidtDecomposition schmidt_decomposition(const BipartiteState& s) {
    if (!is_pure(s)) throw ApplicabilityError("state is mixed (purity " + detail::sci(purity(s), 12) + ")");
    const Spectrum sp = eigh(s.matrix());
    const ComplexVector psi = sp.eigenvectors.col(0);
    const auto da = static_cast<Eigen::Index>(s.dim_a());
    const auto db = static_cast<Eigen::Index>(s.dim_b());
    ComplexMatrix c(da, db);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index b = 0; b < db; ++b) c(a, b) = psi(a * db + b);
    Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector sv = svd.singularValues();
    std::vector<double> p(static_cast<std::size_t>(sv.size()));
    double sum = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) sum += (p[static_cast<std::size_t>(i)] = sv(i) * sv(i));
    for (double& x : p) x /= sum;
    return {PureSchmidtState(std::move(p)), svd.matrixU().col(0), svd.matrixV().col(0).conjugate()};
}

inline BipartiteState bell() { return PureSchmidtState({0.5, 0.5}).to_state(); }

/// cos(alpha)|00> + sin(alpha)|11>, alpha in (0, pi/2).
inline PureSchmidtState pure_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < std::numbers::pi / 2))
        throw DomainError("alpha " + detail::sci(alpha, 6) + " outside (0, pi/2)");
    const double c = std::cos(alpha), s = std::sin(alpha);
    return PureSchmidtState({c * c, s * s});
}

/// (1/sqrt2)|00> + (1/sqrt(2(d-1))) sum_{i=1}^{d-1} |ii>.
inline PureSchmidtState embezzler_psi(std::size_t d) {
    if (d < 2) throw DomainError("embezzler dimension must be >= 2, got " + std::to_string(d));
    std::vector<double> p(d, 1.0 / (2.0 * static_cast<double>(d - 1)));
    p[0] = 0.5;
    return PureSchmidtState(std::move(p));
}

/// The 3x3 maximally correlated state (1/6) sum_{i,j} (|ii><ii| - |ii><jj|),
/// summed literally: 2/6 on each |ii><ii|, -1/6 between |ii> and |jj>.
inline BipartiteState maximally_correlated_lami() {
    ComplexMatrix m = ComplexMatrix::Zero(9, 9);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) {
            m(4 * i, 4 * i) += 1.0 / 6.0;
            m(4 * i, 4 * j) -= 1.0 / 6.0;
        }
    return {std::move(m), 3, 3};
}

/// p * Bell + (1 - p) * I/4.
inline BipartiteState werner(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("Werner parameter " + detail::sci(p, 6) + " outside [0,1]");
    ComplexMatrix m = p * bell().matrix() + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
    return {std::move(m), 2, 2};
}

inline BipartiteState maximally_mixed(std::size_t dim_a, std::size_t dim_b) {
    const auto n = static_cast<Eigen::Index>(dim_a * dim_b);
    return {BipartiteState::Unchecked{}, ComplexMatrix::Identity(n, n) / static_cast<double>(n),
            Layout::single(dim_a, dim_b)};
}

/// |a><a| (x) |b><b| for normalized local vectors.
inline BipartiteState product_pure(const ComplexVector& a, const ComplexVector& b) {
    const ComplexVector v = kron(a.normalized(), b.normalized());
    return {BipartiteState::Unchecked{}, v * v.adjoint(),
            Layout::single(static_cast<std::size_t>(a.size()), static_cast<std::size_t>(b.size()))};
}

// ---- random sampling -------------------------------------------------------

template <class Rng>
ComplexVector random_gaussian_vector(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexVector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = g(rng);
        const double im = g(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

/// Haar-random unit vector.
template <class Rng>
ComplexVector random_unit_vector(std::size_t n, Rng& rng) {
    return random_gaussian_vector(n, rng).normalized();
}

template <class Rng>
BipartiteState random_pure_state(std::size_t dim_a, std::size_t dim_b, Rng& rng) {
    const ComplexVector v = random_unit_vector(dim_a * dim_b, rng);
    return {BipartiteState::Unchecked{}, v * v.adjoint(), Layout::single(dim_a, dim_b)};
}

/// Mixed state from the induced measure: partial trace of a Haar pure state
/// on an environment of dimension `rank`.
template <class Rng>
BipartiteState random_mixed_state(std::size_t dim_a, std::size_t dim_b, std::size_t rank, Rng& rng) {
    const auto n = static_cast<Eigen::Index>(dim_a * dim_b);
    ComplexMatrix g(n, static_cast<Eigen::Index>(rank));
    for (Eigen::Index c = 0; c < g.cols(); ++c) g.col(c) = random_gaussian_vector(dim_a * dim_b, rng);
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    m = (0.5 * (m + m.adjoint())).eval();
    return {BipartiteState::Unchecked{}, std::move(m), Layout::single(dim_a, dim_b)};
}

/// Haar-random unitary via QR of a Ginibre matrix with phase fix.
template <class Rng>
ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
    const auto dim = static_cast<Eigen::Index>(n);
    ComplexMatrix z(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) z.col(c) = random_gaussian_vector(n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
    }
    return q;
}

/// U rho U^dagger, keeping the layout.
inline BipartiteState conjugate(const BipartiteState& s, const ComplexMatrix& u) {
    ComplexMatrix m = u * s.matrix() * u.adjoint();
    m = (0.5 * (m + m.adjoint())).eval();
    return {BipartiteState::Unchecked{}, std::move(m), s.layout()};
}

} // namespace entbat
