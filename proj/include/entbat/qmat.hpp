#pragma once

// Dense complex-matrix kernel: Hermitian spectra, composite systems, partial
// trace / transpose, norms, entropies and divergences. All logarithms are
// base 2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entbat/errors.hpp"

namespace entbat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kEigenCutoff = 1e-12;
inline constexpr double kHermitianTolerance = 1e-9;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kPsdTolerance = 1e-9;
inline constexpr std::size_t kDefaultMaxDimension = 4096;

namespace detail {

inline std::string sci(double x, int digits = 1) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits, x);
    return buf;
}

inline std::size_t product(std::span<const std::size_t> v) {
    return std::accumulate(v.begin(), v.end(), std::size_t{1}, std::multiplies<>{});
}

inline double max_hermitian_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace detail

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
struct Spectrum {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors; // columns
};

inline Spectrum eigh(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::ComputeEigenvectors);
    Spectrum s;
    s.eigenvalues = solver.eigenvalues().reverse();
    s.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return s;
}

inline RealVector eigvalsh(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().reverse();
}

/// Factor structure of a composite bipartite system. Component `i` is the
/// pair (a[i], b[i]); the Hilbert space is ordered A1..An, B1..Bn so the
/// bipartite cut always separates all A factors from all B factors.
struct Layout {
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;

    static Layout single(std::size_t dim_a, std::size_t dim_b) { return {{dim_a}, {dim_b}}; }

    std::size_t components() const { return a.size(); }
    std::size_t dim_a() const { return detail::product(a); }
    std::size_t dim_b() const { return detail::product(b); }
    std::size_t dim() const { return dim_a() * dim_b(); }

    /// All qudit factors in memory order (A side first).
    std::vector<std::size_t> qudits() const {
        std::vector<std::size_t> q = a;
        q.insert(q.end(), b.begin(), b.end());
        return q;
    }

    bool operator==(const Layout&) const = default;
};

/// Density matrix of a bipartite system. Construction validates the
/// Hermitian, unit-trace and PSD invariants and renormalizes the trace.
class BipartiteState {
public:
    struct Unchecked {};

    BipartiteState(ComplexMatrix m, std::size_t dim_a, std::size_t dim_b)
        : BipartiteState(std::move(m), Layout::single(dim_a, dim_b)) {}

    BipartiteState(ComplexMatrix m, Layout layout) : matrix_(std::move(m)), layout_(std::move(layout)) {
        validate_and_normalize();
    }

    /// For results of exact operations on already valid states.
    BipartiteState(Unchecked, ComplexMatrix m, Layout layout)
        : matrix_(std::move(m)), layout_(std::move(layout)) {}

    const ComplexMatrix& matrix() const { return matrix_; }
    const Layout& layout() const { return layout_; }
    std::size_t dim_a() const { return layout_.dim_a(); }
    std::size_t dim_b() const { return layout_.dim_b(); }
    std::size_t dim() const { return layout_.dim(); }
    std::size_t components() const { return layout_.components(); }

private:
    void validate_and_normalize() {
        if (layout_.a.size() != layout_.b.size() || layout_.a.empty())
            throw ShapeError("layout must list the same number (>=1) of A and B factors");
        for (std::size_t i = 0; i < layout_.a.size(); ++i)
            if (layout_.a[i] == 0 || layout_.b[i] == 0)
                throw ShapeError("local dimensions must be positive");
        const auto n = static_cast<Eigen::Index>(layout_.dim());
        if (matrix_.rows() != n || matrix_.cols() != n)
            throw ShapeError("matrix is " + std::to_string(matrix_.rows()) + "x" +
                             std::to_string(matrix_.cols()) + " but dims imply " + std::to_string(n));
        if (!matrix_.allFinite())
            throw ValidationError("non-finite entry");
        const double herm = detail::max_hermitian_defect(matrix_);
        if (herm > kHermitianTolerance)
            throw ValidationError("hermiticity defect " + detail::sci(herm));
        const double tr = matrix_.trace().real();
        if (std::abs(tr - 1.0) > kTraceTolerance)
            throw ValidationError("trace " + detail::sci(tr, 12));
        matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
        const double min_eig = eigvalsh(matrix_).minCoeff();
        if (min_eig < -kPsdTolerance)
            throw ValidationError("min eigenvalue " + detail::sci(min_eig));
        matrix_ /= matrix_.trace().real();
    }

    ComplexMatrix matrix_;
    Layout layout_;
};

/// The trivial 1x1 state; neutral element of `tensor`.
inline BipartiteState scalar_state() {
    return {BipartiteState::Unchecked{}, ComplexMatrix::Identity(1, 1), Layout::single(1, 1)};
}

inline ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
}

namespace detail {

/// Maps every full index to its index in the permuted qudit ordering.
/// `order[j]` is the old position of the qudit that ends up at position j.
inline std::vector<std::size_t> permutation_map(std::span<const std::size_t> dims,
                                                std::span<const std::size_t> order) {
    const std::size_t n = dims.size();
    const std::size_t total = product(dims);
    std::vector<std::size_t> new_dims(n);
    for (std::size_t j = 0; j < n; ++j) new_dims[j] = dims[order[j]];

    std::vector<std::size_t> old_stride(n, 1);
    for (std::size_t k = n; k-- > 1;) old_stride[k - 1] = old_stride[k] * dims[k];

    // new index -> old index
    std::vector<std::size_t> map(total);
    std::vector<std::size_t> digits(n, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t old = 0;
        for (std::size_t j = 0; j < n; ++j) old += digits[j] * old_stride[order[j]];
        map[idx] = old;
        for (std::size_t j = n; j-- > 0;) {
            if (++digits[j] < new_dims[j]) break;
            digits[j] = 0;
        }
    }
    return map;
}

/// Partial trace over qudits with keep[i] == false.
inline ComplexMatrix reduce(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            const std::vector<bool>& keep) {
    const std::size_t n = dims.size();
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) order.push_back(i);
    std::size_t kept_dim = 1;
    for (auto i : order) kept_dim *= dims[i];
    for (std::size_t i = 0; i < n; ++i)
        if (!keep[i]) order.push_back(i);
    const std::size_t total = product(dims);
    const std::size_t traced_dim = total / kept_dim;

    const auto map = permutation_map(dims, order);
    ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
    for (std::size_t t = 0; t < traced_dim; ++t)
        for (std::size_t r = 0; r < kept_dim; ++r) {
            const auto row = static_cast<Eigen::Index>(map[r * traced_dim + t]);
            for (std::size_t c = 0; c < kept_dim; ++c)
                out(r, c) += m(row, static_cast<Eigen::Index>(map[c * traced_dim + t]));
        }
    return out;
}

inline ComplexMatrix permute(const ComplexMatrix& m, std::span<const std::size_t> dims,
                             std::span<const std::size_t> order) {
    const auto map = permutation_map(dims, order);
    const auto n = static_cast<Eigen::Index>(map.size());
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = m(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
    return out;
}

} // namespace detail

/// Composite state on (A A' | B B'): A-side factors of `x` then of `y`.
inline BipartiteState tensor(const BipartiteState& x, const BipartiteState& y,
                             std::size_t max_dim = kDefaultMaxDimension) {
    if (x.dim() > max_dim / y.dim() || x.dim() * y.dim() > max_dim)
        throw CapacityError("total dimension " + std::to_string(x.dim()) + "*" + std::to_string(y.dim()) +
                            " exceeds " + std::to_string(max_dim));
    Layout layout = x.layout();
    layout.a.insert(layout.a.end(), y.layout().a.begin(), y.layout().a.end());
    layout.b.insert(layout.b.end(), y.layout().b.begin(), y.layout().b.end());

    // kron gives ordering (A B A' B'); move it to (A A' B B').
    const ComplexMatrix raw = kron(x.matrix(), y.matrix());
    const std::vector<std::size_t> dims{x.dim_a(), x.dim_b(), y.dim_a(), y.dim_b()};
    const std::vector<std::size_t> order{0, 2, 1, 3};
    ComplexMatrix m = detail::permute(raw, dims, order);

    // Drop padding introduced by the scalar state so tensor(x, 1) == x.
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < layout.a.size(); ++i)
        if (layout.a[i] * layout.b[i] != 1) {
            a.push_back(layout.a[i]);
            b.push_back(layout.b[i]);
        }
    if (a.empty()) {
        a.push_back(1);
        b.push_back(1);
    }
    return {BipartiteState::Unchecked{}, std::move(m), Layout{std::move(a), std::move(b)}};
}

/// n-fold tensor power.
inline BipartiteState tensor_power(const BipartiteState& x, std::size_t n,
                                   std::size_t max_dim = kDefaultMaxDimension) {
    BipartiteState out = scalar_state();
    for (std::size_t i = 0; i < n; ++i) out = tensor(out, x, max_dim);
    return out;
}

enum class Side { A, B };

/// Local reduction onto one side of the cut. The result is returned as a
/// bipartite state whose other side is trivial.
inline BipartiteState partial_trace(const BipartiteState& s, Side keep) {
    const auto dims = s.layout().qudits();
    const std::size_t n = s.components();
    std::vector<bool> mask(2 * n, false);
    for (std::size_t i = 0; i < n; ++i) mask[(keep == Side::A ? 0 : n) + i] = true;
    ComplexMatrix m = detail::reduce(s.matrix(), dims, mask);
    Layout layout;
    if (keep == Side::A) {
        layout.a = s.layout().a;
        layout.b.assign(n, 1);
    } else {
        layout.a.assign(n, 1);
        layout.b = s.layout().b;
    }
    return {BipartiteState::Unchecked{}, std::move(m), std::move(layout)};
}

/// Keeps the listed bipartite components (in ascending order) and traces out
/// the rest.
inline BipartiteState partial_trace(const BipartiteState& s, std::span<const std::size_t> keep_components) {
    const std::size_t n = s.components();
    std::vector<bool> mask(2 * n, false);
    for (auto c : keep_components) {
        if (c >= n)
            throw ShapeError("component " + std::to_string(c) + " out of range (state has " + std::to_string(n) +
                             ")");
        if (mask[c]) throw ShapeError("component " + std::to_string(c) + " selected twice");
        mask[c] = mask[n + c] = true;
    }
    if (keep_components.empty()) return scalar_state();
    Layout layout;
    for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) {
            layout.a.push_back(s.layout().a[i]);
            layout.b.push_back(s.layout().b[i]);
        }
    const auto dims = s.layout().qudits();
    return {BipartiteState::Unchecked{}, detail::reduce(s.matrix(), dims, mask), std::move(layout)};
}

inline BipartiteState partial_trace(const BipartiteState& s, std::initializer_list<std::size_t> keep) {
    return partial_trace(s, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Reorders bipartite components on both sides simultaneously; component j
/// of the result is component order[j] of `s`. Purely local relabeling.
inline BipartiteState permute_components(const BipartiteState& s, std::span<const std::size_t> order) {
    const std::size_t n = s.components();
    if (order.size() != n) throw ShapeError("permutation length does not match component count");
    std::vector<bool> seen(n, false);
    for (auto o : order) {
        if (o >= n || seen[o]) throw ShapeError("not a permutation of the components");
        seen[o] = true;
    }
    std::vector<std::size_t> qorder(2 * n);
    Layout layout;
    for (std::size_t j = 0; j < n; ++j) {
        qorder[j] = order[j];
        qorder[n + j] = n + order[j];
        layout.a.push_back(s.layout().a[order[j]]);
        layout.b.push_back(s.layout().b[order[j]]);
    }
    const auto dims = s.layout().qudits();
    return {BipartiteState::Unchecked{}, detail::permute(s.matrix(), dims, qorder), std::move(layout)};
}

/// Transpose on the A side of the cut.
inline ComplexMatrix partial_transpose(const BipartiteState& s) {
    const auto da = static_cast<Eigen::Index>(s.dim_a());
    const auto db = static_cast<Eigen::Index>(s.dim_b());
    const ComplexMatrix& m = s.matrix();
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index a2 = 0; a2 < da; ++a2)
            out.block(a * db, a2 * db, db, db) = m.block(a2 * db, a * db, db, db);
    return out;
}

inline double trace_norm(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("trace norm needs a square matrix");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (detail::max_hermitian_defect(m) > kHermitianTolerance * scale)
        throw ShapeError("trace norm needs a Hermitian matrix");
    if (m.size() == 0) return 0.0;
    return eigvalsh(0.5 * (m + m.adjoint())).cwiseAbs().sum();
}

inline double trace_distance(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) throw ShapeError("trace distance of mismatched shapes");
    const ComplexMatrix diff = x - y;
    if (diff.isZero(0.0)) return 0.0;
    return 0.5 * trace_norm(diff);
}

inline double trace_distance(const BipartiteState& x, const BipartiteState& y) {
    return trace_distance(x.matrix(), y.matrix());
}

/// Shannon entropy (bits) of a probability vector; entries below the
/// eigenvalue cutoff contribute nothing.
inline double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double x : p)
        if (x > kEigenCutoff) h -= x * std::log2(x);
    return h;
}

inline double von_neumann_entropy(const ComplexMatrix& m) {
    const RealVector ev = eigvalsh(m);
    return std::max(0.0, shannon_entropy(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size()))));
}

inline double von_neumann_entropy(const BipartiteState& s) { return von_neumann_entropy(s.matrix()); }

/// S(rho || sigma) in bits; +infinity when supp(rho) is not inside supp(sigma).
inline double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw ShapeError("relative entropy of mismatched shapes");
    const Spectrum sp = eigh(sigma);
    const ComplexMatrix rot = sp.eigenvectors.adjoint() * rho * sp.eigenvectors;
    double cross = 0.0;
    for (Eigen::Index k = 0; k < sp.eigenvalues.size(); ++k) {
        const double w = rot(k, k).real();
        const double mu = sp.eigenvalues(k);
        if (mu <= kEigenCutoff) {
            if (w > kEigenCutoff) return std::numeric_limits<double>::infinity();
            continue;
        }
        cross -= w * std::log2(mu);
    }
    const double value = cross - von_neumann_entropy(rho);
    return value < 0.0 && value > -1e-10 ? 0.0 : value;
}

inline double relative_entropy(const BipartiteState& rho, const BipartiteState& sigma) {
    return relative_entropy(rho.matrix(), sigma.matrix());
}

/// Applies f to the eigenvalues of a Hermitian matrix.
template <class F>
ComplexMatrix hermitian_function(const ComplexMatrix& m, F&& f) {
    const Spectrum sp = eigh(m);
    RealVector g(sp.eigenvalues.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = f(sp.eigenvalues(i));
    return sp.eigenvectors * g.asDiagonal() * sp.eigenvectors.adjoint();
}

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    const ComplexMatrix root = hermitian_function(rho, [](double x) { return x > kEigenCutoff ? std::sqrt(x) : 0.0; });
    const ComplexMatrix inner = root * sigma * root;
    const RealVector ev = eigvalsh(0.5 * (inner + inner.adjoint()));
    double t = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > kEigenCutoff) t += std::sqrt(ev(i));
    return std::clamp(t * t, 0.0, 1.0);
}

inline double fidelity(const BipartiteState& rho, const BipartiteState& sigma) {
    return fidelity(rho.matrix(), sigma.matrix());
}

inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary entropy argument " + detail::sci(x, 6) + " outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

inline double purity(const BipartiteState& s) { return (s.matrix() * s.matrix()).trace().real(); }

} // namespace entbat
