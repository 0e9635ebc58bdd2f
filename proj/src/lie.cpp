#include "hamdist/lie.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace hamdist {

// ---------------------------------------------------------------------------
// Basis construction
// ---------------------------------------------------------------------------

AlgebraBasis AlgebraBasis::build(Index n) {
    if (n < 2) {
        throw DimensionError("AlgebraBasis: need n >= 2, got " + std::to_string(n));
    }

    AlgebraBasis basis;
    basis.n_ = n;
    basis.elements_.reserve(static_cast<std::size_t>(n * n - 1));

    // D_i = |i⟩⟨i| − |i+1⟩⟨i+1|, i = 0..n−2.
    for (Index i = 0; i + 1 < n; ++i) {
        Matrix d = Matrix::Zero(n, n);
        d(i, i) = 1.0;
        d(i + 1, i + 1) = -1.0;
        basis.elements_.emplace_back(std::move(d));
    }
    // X_{jk} = |j⟩⟨k| + |k⟩⟨j|, j < k, lexicographic.
    for (Index j = 0; j < n; ++j) {
        for (Index k = j + 1; k < n; ++k) {
            Matrix x = Matrix::Zero(n, n);
            x(j, k) = 1.0;
            x(k, j) = 1.0;
            basis.elements_.emplace_back(std::move(x));
        }
    }
    // Y_{jk} = i|j⟩⟨k| − i|k⟩⟨j|, j < k, lexicographic.
    for (Index j = 0; j < n; ++j) {
        for (Index k = j + 1; k < n; ++k) {
            Matrix y = Matrix::Zero(n, n);
            y(j, k) = Complex(0.0, 1.0);
            y(k, j) = Complex(0.0, -1.0);
            basis.elements_.emplace_back(std::move(y));
        }
    }

    // Hilbert–Schmidt Gram matrix. Only adjacent D's overlap (−1); every X
    // and Y has norm² = 2 and is orthogonal to everything else, so the Gram
    // is a tridiagonal block ⊕ 2·identity — assembled explicitly anyway to
    // stay structural-assumption-free.
    const Index m = basis.size();
    basis.gram_ = RealMatrix::Zero(m, m);
    for (Index a = 0; a < m; ++a) {
        for (Index b = a; b < m; ++b) {
            const double g =
                hs_inner(basis.elements_[static_cast<std::size_t>(a)].entries(),
                         basis.elements_[static_cast<std::size_t>(b)].entries())
                    .real();
            basis.gram_(a, b) = g;
            basis.gram_(b, a) = g;
        }
    }
    basis.gram_ldlt_.compute(basis.gram_);
    if (basis.gram_ldlt_.info() != Eigen::Success) {
        throw DimensionError("AlgebraBasis: Gram factorization failed");
    }
    return basis;
}

Index AlgebraBasis::d_index(Index i) const {
    if (i < 0 || i + 1 >= n_) {
        throw DimensionError("AlgebraBasis::d_index: index out of range");
    }
    return i;
}

Index AlgebraBasis::x_index(Index j, Index k) const {
    if (j < 0 || k <= j || k >= n_) {
        throw DimensionError("AlgebraBasis::x_index: need 0 <= j < k < n");
    }
    // Pairs before row j: sum_{r<j} (n−1−r); offset within row: k − j − 1.
    const Index before = j * (2 * n_ - j - 1) / 2;
    return (n_ - 1) + before + (k - j - 1);
}

Index AlgebraBasis::y_index(Index j, Index k) const {
    return x_index(j, k) + n_ * (n_ - 1) / 2;
}

// ---------------------------------------------------------------------------
// Coordinates
// ---------------------------------------------------------------------------

AlgebraCoords AlgebraBasis::to_coords_unchecked(const Matrix& h) const {
    if (h.rows() != n_ || h.cols() != n_) {
        throw DimensionError("AlgebraBasis::to_coords: dimension mismatch");
    }
    const Index m = size();
    RealVector rhs(m);
    for (Index a = 0; a < m; ++a) {
        rhs(a) = hs_inner(elements_[static_cast<std::size_t>(a)].entries(), h).real();
    }
    AlgebraCoords c;
    c.dim = n_;
    c.v = gram_ldlt_.solve(rhs);
    return c;
}

AlgebraCoords AlgebraBasis::to_coords(const HermitianOp& h) const {
    if (!h.is_traceless()) {
        throw NotTraceless("AlgebraBasis::to_coords: operator has |tr| = " +
                           std::to_string(std::abs(h.entries().trace())));
    }
    return to_coords_unchecked(h.entries());
}

HermitianOp AlgebraBasis::from_coords(const AlgebraCoords& c) const {
    if (c.dim != n_ || c.v.size() != size()) {
        throw DimensionError("AlgebraBasis::from_coords: dimension mismatch");
    }
    Matrix h = Matrix::Zero(n_, n_);
    for (Index a = 0; a < size(); ++a) {
        h += c.v(a) * elements_[static_cast<std::size_t>(a)].entries();
    }
    return HermitianOp(std::move(h));
}

// ---------------------------------------------------------------------------
// Algebra operations
// ---------------------------------------------------------------------------

Matrix commutator(const HermitianOp& a, const HermitianOp& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("commutator: dimension mismatch");
    }
    return a.entries() * b.entries() - b.entries() * a.entries();
}

HermitianOp ad_action(const HermitianOp& a, const HermitianOp& b) {
    return HermitianOp(Complex(0.0, 1.0) * commutator(a, b));
}

UnitaryOp expm_i(const HermitianOp& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries());
    if (es.info() != Eigen::Success) {
        throw DimensionError("expm_i: eigendecomposition failed");
    }
    const Index n = h.dim();
    Vector phases(n);
    for (Index k = 0; k < n; ++k) {
        phases(k) = std::exp(Complex(0.0, es.eigenvalues()(k) * t));
    }
    return UnitaryOp(es.eigenvectors() * phases.asDiagonal() *
                     es.eigenvectors().adjoint());
}

HermitianOp traceless_part(const HermitianOp& h) {
    const Index n = h.dim();
    return HermitianOp(h.entries() -
                       (h.entries().trace() / static_cast<double>(n)) *
                           Matrix::Identity(n, n));
}

} // namespace hamdist
