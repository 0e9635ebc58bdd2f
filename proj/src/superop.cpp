#include "hamdist/superop.hpp"

#include <Eigen/QR>

#include <cmath>
#include <string>
#include <utility>

#include "hamdist/rng.hpp"

namespace hamdist {

// ---------------------------------------------------------------------------
// SuperOp
// ---------------------------------------------------------------------------

SuperOp::SuperOp(Index n, RealMatrix m) : n_(n), mat_(std::move(m)) {
    const Index want = n * n - 1;
    if (n < 2 || mat_.rows() != want || mat_.cols() != want) {
        throw DimensionError("SuperOp: matrix must be (n²−1)×(n²−1)");
    }
}

SuperOp SuperOp::identity(Index n) {
    return SuperOp(n, RealMatrix::Identity(n * n - 1, n * n - 1));
}

SuperOp SuperOp::zero(Index n) {
    return SuperOp(n, RealMatrix::Zero(n * n - 1, n * n - 1));
}

AlgebraCoords SuperOp::apply_coords(const AlgebraCoords& c) const {
    if (c.dim != n_ || c.v.size() != size()) {
        throw DimensionError("SuperOp::apply_coords: dimension mismatch");
    }
    AlgebraCoords out;
    out.dim = n_;
    out.v = mat_ * c.v;
    return out;
}

SuperOp SuperOp::operator*(const SuperOp& rhs) const {
    if (rhs.n_ != n_) throw DimensionError("SuperOp: dimension mismatch");
    return SuperOp(n_, mat_ * rhs.mat_);
}

SuperOp SuperOp::operator+(const SuperOp& rhs) const {
    if (rhs.n_ != n_) throw DimensionError("SuperOp: dimension mismatch");
    return SuperOp(n_, mat_ + rhs.mat_);
}

SuperOp SuperOp::operator-(const SuperOp& rhs) const {
    if (rhs.n_ != n_) throw DimensionError("SuperOp: dimension mismatch");
    return SuperOp(n_, mat_ - rhs.mat_);
}

SuperOp SuperOp::scaled(double a) const {
    return SuperOp(n_, a * mat_);
}

// ---------------------------------------------------------------------------
// Constructors from matrix-level maps
// ---------------------------------------------------------------------------

SuperOp superop_from_map(const AlgebraBasis& basis,
                         const std::function<Matrix(const Matrix&)>& f) {
    const Index n = basis.dim();
    const Index m = basis.size();
    RealMatrix s(m, m);
    for (Index a = 0; a < m; ++a) {
        Matrix out = f(basis.element(a).entries());
        if (out.rows() != n || out.cols() != n) {
            throw DimensionError("superop_from_map: map changed dimensions");
        }
        // Drop any trace component; an 𝒜-preserving map is unaffected.
        out -= (out.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
        s.col(a) = basis.to_coords_unchecked(out).v;
    }
    return SuperOp(n, std::move(s));
}

SuperOp conjugation_superop(const UnitaryOp& u, const AlgebraBasis& basis) {
    if (u.dim() != basis.dim()) {
        throw DimensionError("conjugation_superop: dimension mismatch");
    }
    const Matrix& um = u.entries();
    return superop_from_map(
        basis, [&um](const Matrix& x) { return Matrix(um * x * um.adjoint()); });
}

SuperOp ad_superop(const HermitianOp& a, const AlgebraBasis& basis) {
    if (a.dim() != basis.dim()) {
        throw DimensionError("ad_superop: dimension mismatch");
    }
    const Matrix& am = a.entries();
    return superop_from_map(basis, [&am](const Matrix& x) {
        return Matrix(Complex(0.0, 1.0) * (am * x - x * am));
    });
}

HermitianOp apply(const SuperOp& s, const HermitianOp& h, const AlgebraBasis& basis) {
    return basis.from_coords(s.apply_coords(basis.to_coords(h)));
}

SuperOp polynomial_of(const std::vector<double>& coeffs, const SuperOp& s) {
    SuperOp acc = SuperOp::zero(s.dim());
    SuperOp power = SuperOp::identity(s.dim());
    for (double c : coeffs) {
        power = power * s;
        if (c != 0.0) acc = acc + power.scaled(c);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Conjugation decomposition
// ---------------------------------------------------------------------------

Matrix ConjugationDecomposition::apply_matrix(const Matrix& x) const {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const ConjugationTerm& t : terms) {
        out += t.c * (t.u.entries() * x * t.u.entries().adjoint());
    }
    return out;
}

SuperOp ConjugationDecomposition::reconstruct(const AlgebraBasis& basis) const {
    SuperOp acc = SuperOp::zero(basis.dim());
    for (const ConjugationTerm& t : terms) {
        acc = acc + conjugation_superop(t.u, basis).scaled(t.c);
    }
    return acc;
}

namespace {

/// One decomposition attempt with a fixed dictionary; returns the pruned
/// terms and the max-abs reconstruction deviation.
ConjugationDecomposition attempt_decomposition(const SuperOp& l,
                                               const AlgebraBasis& basis,
                                               std::uint64_t seed,
                                               int dict_size) {
    const Index n = basis.dim();
    const Index m = basis.size();
    const Index flat = m * m;

    Rng rng(seed);
    std::vector<UnitaryOp> dict;
    dict.reserve(static_cast<std::size_t>(dict_size));
    RealMatrix a(flat, dict_size);
    for (int j = 0; j < dict_size; ++j) {
        dict.push_back(rng.unitary(n));
        const RealMatrix mj = conjugation_superop(dict.back(), basis).matrix();
        a.col(j) = Eigen::Map<const RealVector>(mj.data(), flat);
    }

    const RealVector b = Eigen::Map<const RealVector>(l.matrix().data(), flat);
    // Minimum-norm least squares; the dictionary is generically full row rank
    // but never square.
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(a);
    const RealVector c = cod.solve(b);

    ConjugationDecomposition result;
    result.dim = n;
    result.seed = seed;
    result.dict_size = dict_size;
    for (int j = 0; j < dict_size; ++j) {
        if (std::abs(c(j)) >= numeric_config().prune_tol) {
            result.terms.push_back({c(j), dict[static_cast<std::size_t>(j)]});
        }
    }
    const RealMatrix recon = result.reconstruct(basis).matrix();
    result.residual = max_abs(RealMatrix(recon - l.matrix()));
    return result;
}

} // namespace

ConjugationDecomposition decompose_into_conjugations(const SuperOp& l,
                                                     const AlgebraBasis& basis,
                                                     std::uint64_t seed,
                                                     int dict_size) {
    if (l.dim() != basis.dim()) {
        throw DimensionError("decompose_into_conjugations: dimension mismatch");
    }
    const Index m = basis.size();
    if (dict_size < 0) dict_size = static_cast<int>(m * m) + 32;
    if (dict_size < 1) {
        throw DimensionError("decompose_into_conjugations: empty dictionary");
    }

    constexpr int kAttempts = 3;
    double best_residual = -1.0;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const std::uint64_t s =
            attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt));
        const int size = dict_size << attempt;
        ConjugationDecomposition d = attempt_decomposition(l, basis, s, size);
        if (d.residual <= numeric_config().residual_tol) return d;
        if (best_residual < 0.0 || d.residual < best_residual) best_residual = d.residual;
    }
    throw DecompositionResidual(
        "decompose_into_conjugations: residual " + std::to_string(best_residual) +
        " above tolerance after " + std::to_string(kAttempts) + " dictionary attempts");
}

} // namespace hamdist
