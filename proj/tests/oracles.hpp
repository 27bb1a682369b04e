#pragma once

// Independent reference computations for the test suites. These avoid the
// library's spectral and reshaping helpers on purpose: index loops for the
// reductions and Eigen's general (non-Hermitian) eigensolver for spectra.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "entbat/entbat.hpp"

namespace oracle {

using entbat::Complex;
using entbat::ComplexMatrix;
using entbat::ComplexVector;

/// Real eigenvalues of a Hermitian matrix via the general eigensolver.
inline std::vector<double> eigenvalues(const ComplexMatrix& m) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
    return out;
}

inline double trace_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (double x : eigenvalues(m)) s += std::abs(x);
    return s;
}

inline double entropy(const ComplexMatrix& m) {
    double s = 0.0;
    for (double x : eigenvalues(m))
        if (x > 1e-12) s -= x * std::log2(x);
    return s;
}

inline double h(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

/// Tr_B of an operator on C^da (x) C^db.
inline ComplexMatrix trace_b(const ComplexMatrix& m, int da, int db) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (int a = 0; a < da; ++a)
        for (int a2 = 0; a2 < da; ++a2)
            for (int b = 0; b < db; ++b) out(a, a2) += m(a * db + b, a2 * db + b);
    return out;
}

inline ComplexMatrix trace_a(const ComplexMatrix& m, int da, int db) {
    ComplexMatrix out = ComplexMatrix::Zero(db, db);
    for (int b = 0; b < db; ++b)
        for (int b2 = 0; b2 < db; ++b2)
            for (int a = 0; a < da; ++a) out(b, b2) += m(a * db + b, a * db + b2);
    return out;
}

/// Transpose on the first factor, entry by entry.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, int da, int db) {
    ComplexMatrix out(m.rows(), m.cols());
    for (int a = 0; a < da; ++a)
        for (int b = 0; b < db; ++b)
            for (int a2 = 0; a2 < da; ++a2)
                for (int b2 = 0; b2 < db; ++b2) out(a * db + b, a2 * db + b2) = m(a2 * db + b, a * db + b2);
    return out;
}

/// cos(a)|00> + sin(a)|11> as a 4x4 density matrix, written out directly.
inline ComplexMatrix pure_alpha(double a) {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = std::cos(a);
    v(3) = std::sin(a);
    return v * v.adjoint();
}

inline double log_negativity_alpha(double a) { return std::log2(1.0 + std::sin(2.0 * a)); }
inline double entropy_alpha(double a) { return h(std::cos(a) * std::cos(a)); }

/// Werner state relative entropy of entanglement 1 - h(F) with F the
/// singlet fraction (1 + 3p)/4, valid for F >= 1/2.
inline double werner_er(double p) {
    const double f = (1.0 + 3.0 * p) / 4.0;
    return f <= 0.5 ? 0.0 : 1.0 - h(f);
}

inline ComplexMatrix random_density(int n, std::mt19937_64& rng, int rank = -1) {
    std::normal_distribution<double> g;
    const int r = rank > 0 ? rank : n;
    ComplexMatrix x(n, r);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < r; ++j) x(i, j) = Complex(g(rng), g(rng));
    ComplexMatrix m = x * x.adjoint();
    m /= m.trace().real();
    return 0.5 * (m + m.adjoint());
}

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace oracle
