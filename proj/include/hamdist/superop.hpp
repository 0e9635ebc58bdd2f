// superop.hpp — Real-linear maps on the traceless-Hermitian algebra as
// (n²−1)×(n²−1) real matrices, and their decomposition into unitary
// conjugations

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hamdist/lie.hpp"
#include "hamdist/types.hpp"

namespace hamdist {

/// An element of Hom(𝒜,𝒜) in AlgebraBasis coordinates.
class SuperOp {
public:
    SuperOp(Index n, RealMatrix m);

    static SuperOp identity(Index n);
    static SuperOp zero(Index n);

    Index dim() const { return n_; }
    Index size() const { return mat_.rows(); }
    const RealMatrix& matrix() const { return mat_; }

    AlgebraCoords apply_coords(const AlgebraCoords& c) const;

    SuperOp operator*(const SuperOp& rhs) const;   // composition
    SuperOp operator+(const SuperOp& rhs) const;
    SuperOp operator-(const SuperOp& rhs) const;
    SuperOp scaled(double a) const;

private:
    Index n_;
    RealMatrix mat_;
};

/// The SuperOp of X ↦ UXU†.
SuperOp conjugation_superop(const UnitaryOp& u, const AlgebraBasis& basis);

/// The SuperOp of X ↦ i[A,X].
SuperOp ad_superop(const HermitianOp& a, const AlgebraBasis& basis);

/// from_coords(S · to_coords(H)).
HermitianOp apply(const SuperOp& s, const HermitianOp& h, const AlgebraBasis& basis);

/// Σ_k coeffs[k−1]·S^k; the coefficient list starts at degree 1, so the
/// polynomial always fixes 0.
SuperOp polynomial_of(const std::vector<double>& coeffs, const SuperOp& s);

/// Build a SuperOp column-by-column from an arbitrary matrix map. The map's
/// output is projected back to the traceless part before taking coordinates,
/// which is the identity whenever the map preserves 𝒜.
SuperOp superop_from_map(const AlgebraBasis& basis,
                         const std::function<Matrix(const Matrix&)>& f);

struct ConjugationTerm {
    double c;
    UnitaryOp u;
};

/// A realization of a SuperOp as Σ c_j U_j (·) U_j†.
struct ConjugationDecomposition {
    Index dim = 0;
    std::vector<ConjugationTerm> terms;
    double residual = 0.0;        // max-abs deviation of the reconstruction
    std::uint64_t seed = 0;       // dictionary seed actually used
    int dict_size = 0;            // dictionary size actually used

    /// Σ c_j U_j X U_j† applied to an arbitrary matrix.
    Matrix apply_matrix(const Matrix& x) const;

    /// The reconstructed SuperOp.
    SuperOp reconstruct(const AlgebraBasis& basis) const;
};

/// Decompose L into a real combination of unitary conjugations drawn from a
/// seeded random dictionary (minimum-norm least squares, pruned at the
/// configured tolerance). Retries with a derived seed and doubled margin
/// before giving up. dict_size < 0 selects the default (n²−1)² + 32.
ConjugationDecomposition decompose_into_conjugations(const SuperOp& l,
                                                     const AlgebraBasis& basis,
                                                     std::uint64_t seed,
                                                     int dict_size = -1);

} // namespace hamdist
