#include "hamdist/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>

namespace hamdist {

NumericConfig& numeric_config() {
    static NumericConfig cfg;
    return cfg;
}


namespace {

std::string fmt_deviation(double dev) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", dev);
    return buf;
}

} // namespace

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

HermitianOp::HermitianOp(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw DimensionError("HermitianOp: matrix must be square and non-empty");
    }
    const double dev = max_abs(Matrix(entries_ - entries_.adjoint()));
    if (dev > numeric_config().hermitian_tol) {
        throw NotHermitian("HermitianOp: deviation from H† is " + fmt_deviation(dev));
    }
}

HermitianOp HermitianOp::traceless(Matrix entries) {
    HermitianOp h(std::move(entries));
    if (!h.is_traceless()) {
        throw NotTraceless("HermitianOp::traceless: |tr| = " +
                           fmt_deviation(std::abs(h.entries_.trace())));
    }
    return h;
}

bool HermitianOp::is_traceless(double tol) const {
    return std::abs(entries_.trace()) <= tol;
}

UnitaryOp::UnitaryOp(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw DimensionError("UnitaryOp: matrix must be square and non-empty");
    }
    const Matrix gram = entries_.adjoint() * entries_;
    const double dev = max_abs(Matrix(gram - Matrix::Identity(entries_.rows(), entries_.cols())));
    if (dev > numeric_config().unitary_tol) {
        throw NotUnitary("UnitaryOp: |U†U - 1| = " + fmt_deviation(dev));
    }
}

UnitaryOp UnitaryOp::adjoint() const {
    return UnitaryOp(entries_.adjoint());
}

double phase_aligned_distance(const Matrix& u, const Matrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) {
        throw DimensionError("phase_aligned_distance: dimension mismatch");
    }
    const Complex overlap = (v.adjoint() * u).trace();
    Complex phase(1.0, 0.0);
    if (std::abs(overlap) > 0.0) phase = overlap / std::abs(overlap);
    return operator_norm(Matrix(u - phase * v));
}

} // namespace hamdist
