#include "hamdist/rng.hpp"

#include <cmath>

namespace hamdist {

double Rng::uniform() {
    // Top 53 bits → [0,1). Avoids std::uniform_real_distribution, whose
    // output sequence is implementation-defined.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box–Muller; reject u1 == 0 so the log is finite.
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Complex Rng::complex_gaussian() {
    const double scale = std::sqrt(0.5);
    const double re = gaussian();
    const double im = gaussian();
    return Complex(scale * re, scale * im);
}

Matrix Rng::ginibre(Index n) {
    Matrix m(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            m(i, j) = complex_gaussian();
        }
    }
    return m;
}

HermitianOp Rng::hermitian(Index n) {
    const Matrix g = ginibre(n);
    return HermitianOp(0.5 * (g + g.adjoint()));
}

HermitianOp Rng::traceless_unit(Index n) {
    Matrix h = hermitian(n).entries();
    h -= (h.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
    const double norm = h.norm();
    // A zero draw has probability zero; guard anyway by falling back to a
    // deterministic diagonal generator.
    if (norm < 1e-300) {
        h = Matrix::Zero(n, n);
        h(0, 0) = 1.0;
        h(1, 1) = -1.0;
        return HermitianOp(h / h.norm());
    }
    return HermitianOp(h / norm);
}

UnitaryOp Rng::unitary(Index n) {
    const Matrix g = ginibre(n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity of QR so the result is Haar-distributed and
    // reproducible: scale each column by the phase of the matching R diagonal.
    for (Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0.0) q.col(j) *= d / a;
    }
    return UnitaryOp(q);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over seed ⊕ golden-ratio-stepped stream index.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace hamdist
