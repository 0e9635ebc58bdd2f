// rng.hpp — Seeded random matrices with a pinned generator algorithm
//
// Plans record the generator name, so the stream must not depend on the
// standard library's unspecified distribution internals: uniforms come from
// the top 53 bits of mt19937_64 and gaussians from Box–Muller on top of them.

#pragma once

#include <cstdint>
#include <random>

#include "hamdist/types.hpp"

namespace hamdist {

class Rng {
public:
    static constexpr const char* kName = "mt19937_64/boxmuller";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform();

    /// Standard normal.
    double gaussian();

    /// Re(g) and Im(g) i.i.d. N(0, 1/2), so E|g|² = 1.
    Complex complex_gaussian();

    /// n×n matrix of i.i.d. standard complex gaussians.
    Matrix ginibre(Index n);

    /// GUE-style Hermitian matrix (M + M†)/2.
    HermitianOp hermitian(Index n);

    /// Traceless Hermitian, Hilbert–Schmidt normalized.
    HermitianOp traceless_unit(Index n);

    /// Haar-distributed unitary: QR of a ginibre matrix with the R diagonal
    /// phase-fixed.
    UnitaryOp unitary(Index n);

    std::uint64_t next_raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Stable derivation of sub-seeds from a master seed (splitmix64 step).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace hamdist
