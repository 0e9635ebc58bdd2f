#include <doctest.h>

#include <string>
#include <vector>

#include "hamdist/kernels.hpp"
#include "hamdist/rng.hpp"
#include "test_helpers.hpp"

using namespace hamdist;

namespace {

Matrix random_matrix(Rng& rng, Index n) {
    Matrix m(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) m(i, j) = rng.complex_gaussian();
    }
    return m;
}

void check_dispatch(const kernels::Dispatch& d) {
    Rng rng(701);
    for (Index n = 1; n <= 8; ++n) {
        const Matrix a = random_matrix(rng, n);
        const Matrix b = random_matrix(rng, n);
        Matrix c(n, n);
        d.matmul(a.data(), b.data(), c.data(), static_cast<int>(n));
        CHECK(max_abs(Matrix(c - a * b)) < 1e-13);

        Vector x(n);
        for (Index i = 0; i < n; ++i) x(i) = rng.complex_gaussian();
        Vector y(n);
        d.matvec(a.data(), x.data(), y.data(), static_cast<int>(n));
        CHECK((y - a * x).norm() < 1e-13);
    }
}

} // namespace

TEST_CASE("kernels: scalar kernels match dense algebra") {
    check_dispatch(kernels::scalar_dispatch());
}

TEST_CASE("kernels: simd kernels agree with the reference when available") {
    const kernels::Dispatch* simd = kernels::avx2_dispatch();
    if (simd == nullptr) return;  // build or host without AVX2
    check_dispatch(*simd);

    // Bit-level agreement is not required; numerical agreement is.
    Rng rng(702);
    for (Index n : {2, 3, 4, 5, 7}) {
        const Matrix a = random_matrix(rng, n);
        const Matrix b = random_matrix(rng, n);
        Matrix cs(n, n), cv(n, n);
        kernels::scalar_dispatch().matmul(a.data(), b.data(), cs.data(),
                                          static_cast<int>(n));
        simd->matmul(a.data(), b.data(), cv.data(), static_cast<int>(n));
        CHECK(max_abs(Matrix(cs - cv)) < 1e-13);
    }
}

TEST_CASE("kernels: the active dispatch is one of the known variants") {
    const std::string name = kernels::active().name;
    const bool known = name == "scalar" || name == "avx2";
    CHECK(known);

    Rng rng(703);
    const Matrix a = random_matrix(rng, 4);
    const Matrix b = random_matrix(rng, 4);
    CHECK(max_abs(Matrix(kernels::multiply(a, b) - a * b)) < 1e-13);

    Vector x(4);
    for (Index i = 0; i < 4; ++i) x(i) = rng.complex_gaussian();
    CHECK((kernels::multiply(a, x) - a * x).norm() < 1e-13);
}
