// lie.hpp — The traceless-Hermitian algebra: canonical basis, coordinates,
// commutators, adjoint action, and Hermitian matrix exponentials

#pragma once

#include <vector>

#include <Eigen/Cholesky>

#include "hamdist/types.hpp"

namespace hamdist {

/// Real coordinates of a traceless Hermitian operator in an AlgebraBasis.
struct AlgebraCoords {
    Index dim = 0;        // Hilbert-space dimension n
    RealVector v;         // length n²−1
};

/// The canonical basis of the n²−1 dimensional space of traceless Hermitian
/// operators: diagonal generators D_1…D_{n−1} (1 at position i, −1 at i+1),
/// then the symmetric pair matrices X_{jk}, then the antisymmetric Y_{jk},
/// pairs ordered lexicographically with j < k.
///
/// The basis is intentionally not orthogonal (adjacent D's overlap);
/// coordinates go through the Hilbert–Schmidt Gram matrix.
class AlgebraBasis {
public:
    static AlgebraBasis build(Index n);

    Index dim() const { return n_; }
    Index size() const { return static_cast<Index>(elements_.size()); }
    const std::vector<HermitianOp>& elements() const { return elements_; }
    const HermitianOp& element(Index i) const { return elements_[static_cast<std::size_t>(i)]; }
    const RealMatrix& gram() const { return gram_; }

    /// Index of D_i, i in [0, n−1).
    Index d_index(Index i) const;
    /// Index of X_{jk} (0-based, j < k).
    Index x_index(Index j, Index k) const;
    /// Index of Y_{jk} (0-based, j < k).
    Index y_index(Index j, Index k) const;

    AlgebraCoords to_coords(const HermitianOp& h) const;
    HermitianOp from_coords(const AlgebraCoords& c) const;

    /// to_coords without the traceless check; the trace component is simply
    /// not representable and is dropped by the Gram solve only if the caller
    /// removed it first. Used by SuperOp construction on projected outputs.
    AlgebraCoords to_coords_unchecked(const Matrix& h) const;

private:
    AlgebraBasis() = default;

    Index n_ = 0;
    std::vector<HermitianOp> elements_;
    RealMatrix gram_;
    Eigen::LDLT<RealMatrix> gram_ldlt_;
};

/// AB − BA. Anti-Hermitian for Hermitian inputs.
Matrix commutator(const HermitianOp& a, const HermitianOp& b);

/// Ad(A)(B) = i[A,B]; Hermitian and traceless.
HermitianOp ad_action(const HermitianOp& a, const HermitianOp& b);

/// e^{iHt} by Hermitian eigendecomposition.
UnitaryOp expm_i(const HermitianOp& h, double t);

/// H − (tr H / n)·1.
HermitianOp traceless_part(const HermitianOp& h);

} // namespace hamdist
