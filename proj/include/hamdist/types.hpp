// types.hpp — Dense complex matrix aliases and the validated operator types

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>

#include "hamdist/config.hpp"
#include "hamdist/errors.hpp"

namespace hamdist {

using Complex    = std::complex<double>;
using Matrix     = Eigen::MatrixXcd;
using Vector     = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index      = Eigen::Index;

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const RealMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Hilbert–Schmidt inner product ⟨A,B⟩ = tr(A†B).
inline Complex hs_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("hs_inner: dimension mismatch");
    }
    return (a.adjoint() * b).trace();
}

inline double hs_norm(const Matrix& a) {
    return a.norm();  // Frobenius == Hilbert–Schmidt
}

/// Largest singular value; the error measure for gadget convergence checks.
double operator_norm(const Matrix& m);

/// n×n Hermitian matrix, validated entrywise against the global tolerance.
class HermitianOp {
public:
    explicit HermitianOp(Matrix entries);

    /// Construct and additionally require |tr| within tolerance.
    static HermitianOp traceless(Matrix entries);

    Index dim() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }

    double trace_real() const { return entries_.trace().real(); }
    bool is_traceless(double tol) const;
    bool is_traceless() const { return is_traceless(numeric_config().traceless_tol); }

private:
    Matrix entries_;
};

/// n×n unitary matrix; U†U must match the identity entrywise.
class UnitaryOp {
public:
    explicit UnitaryOp(Matrix entries);

    Index dim() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    UnitaryOp adjoint() const;

private:
    Matrix entries_;
};

/// Distance between unitaries modulo a global phase: min over φ of the
/// operator norm of U − e^{iφ}V.
double phase_aligned_distance(const Matrix& u, const Matrix& v);

} // namespace hamdist
