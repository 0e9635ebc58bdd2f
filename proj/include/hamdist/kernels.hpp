// kernels.hpp — Small dense complex matrix kernels with runtime SIMD dispatch
//
// Sequence evaluation multiplies millions of n×n unitaries for n ≤ 5; these
// kernels are the hot path. A scalar reference implementation always exists;
// an AVX2/FMA variant is selected at runtime on capable x86-64 hosts. The
// HAMDIST_KERNEL environment variable ("scalar" or "avx2") overrides the
// automatic choice.

#pragma once

#include "hamdist/types.hpp"

namespace hamdist::kernels {

/// c = a·b for column-major n×n complex matrices; c must not alias a or b.
using MatmulFn = void (*)(const Complex* a, const Complex* b, Complex* c, int n);
/// y = a·x for a column-major n×n complex matrix; y must not alias x.
using MatvecFn = void (*)(const Complex* a, const Complex* x, Complex* y, int n);

struct Dispatch {
    const char* name;
    MatmulFn matmul;
    MatvecFn matvec;
};

/// The always-available reference kernels.
const Dispatch& scalar_dispatch();

/// The AVX2/FMA kernels, or nullptr when the build or the CPU lacks them.
const Dispatch* avx2_dispatch();

/// The kernels in use: environment override if set, else the fastest
/// supported variant. Resolved once per process.
const Dispatch& active();

/// Convenience wrappers over active().
Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, const Vector& x);

} // namespace hamdist::kernels
