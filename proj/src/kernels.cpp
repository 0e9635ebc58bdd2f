#include "hamdist/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace hamdist::kernels {

// ---------------------------------------------------------------------------
// Scalar reference kernels
// ---------------------------------------------------------------------------

namespace {

void matmul_scalar(const Complex* a, const Complex* b, Complex* c, int n) {
    for (int j = 0; j < n; ++j) {
        Complex* cj = c + static_cast<std::ptrdiff_t>(j) * n;
        for (int i = 0; i < n; ++i) cj[i] = Complex(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            const Complex bkj = b[k + static_cast<std::ptrdiff_t>(j) * n];
            const Complex* ak = a + static_cast<std::ptrdiff_t>(k) * n;
            for (int i = 0; i < n; ++i) cj[i] += ak[i] * bkj;
        }
    }
}

void matvec_scalar(const Complex* a, const Complex* x, Complex* y, int n) {
    for (int i = 0; i < n; ++i) y[i] = Complex(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
        const Complex xk = x[k];
        const Complex* ak = a + static_cast<std::ptrdiff_t>(k) * n;
        for (int i = 0; i < n; ++i) y[i] += ak[i] * xk;
    }
}

} // namespace

const Dispatch& scalar_dispatch() {
    static const Dispatch d{"scalar", &matmul_scalar, &matvec_scalar};
    return d;
}

// ---------------------------------------------------------------------------
// Dispatch resolution
// ---------------------------------------------------------------------------

#if defined(HAMDIST_HAVE_AVX2)
namespace detail {
const Dispatch& avx2_impl();  // kernels_avx2.cpp, compiled with -mavx2 -mfma
}
#endif

const Dispatch* avx2_dispatch() {
#if defined(HAMDIST_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return &detail::avx2_impl();
    }
#endif
    return nullptr;
}

const Dispatch& active() {
    static const Dispatch& chosen = []() -> const Dispatch& {
        const Dispatch* best = avx2_dispatch();
        if (const char* env = std::getenv("HAMDIST_KERNEL")) {
            const std::string_view want(env);
            if (want == "scalar") return scalar_dispatch();
            if (want == "avx2" && best != nullptr) return *best;
            // Unknown or unavailable request: fall through to the automatic
            // choice rather than failing deep inside a simulation.
        }
        return best != nullptr ? *best : scalar_dispatch();
    }();
    return chosen;
}

// ---------------------------------------------------------------------------
// Convenience wrappers
// ---------------------------------------------------------------------------

Matrix multiply(const Matrix& a, const Matrix& b) {
    const int n = static_cast<int>(a.rows());
    Matrix c(a.rows(), a.rows());
    active().matmul(a.data(), b.data(), c.data(), n);
    return c;
}

Vector multiply(const Matrix& a, const Vector& x) {
    const int n = static_cast<int>(a.rows());
    Vector y(a.rows());
    active().matvec(a.data(), x.data(), y.data(), n);
    return y;
}

} // namespace hamdist::kernels
