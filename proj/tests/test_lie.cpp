#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hamdist/lie.hpp"
#include "hamdist/rng.hpp"
#include "test_helpers.hpp"

using namespace hamdist;
using namespace hamdist::testing;

TEST_CASE("lie: basis spans n^2-1 traceless hermitian elements") {
    for (Index n = 2; n <= 5; ++n) {
        const AlgebraBasis basis = AlgebraBasis::build(n);
        CHECK(basis.size() == n * n - 1);
        for (const HermitianOp& e : basis.elements()) {
            CHECK(e.is_traceless());
        }
    }
}

TEST_CASE("lie: index layout follows the D, X, Y ordering") {
    const Index n = 4;
    const AlgebraBasis basis = AlgebraBasis::build(n);

    for (Index i = 0; i < n - 1; ++i) {
        CHECK(basis.d_index(i) == i);
        const Matrix& d = basis.element(basis.d_index(i)).entries();
        CHECK(d(i, i) == Complex(1.0, 0.0));
        CHECK(d(i + 1, i + 1) == Complex(-1.0, 0.0));
    }

    CHECK(basis.x_index(0, 1) == n - 1);
    CHECK(basis.x_index(0, 3) == 5);
    CHECK(basis.x_index(1, 2) == 6);
    CHECK(basis.x_index(2, 3) == 8);
    CHECK(basis.y_index(0, 1) == basis.x_index(0, 1) + n * (n - 1) / 2);

    const Matrix& x = basis.element(basis.x_index(1, 3)).entries();
    CHECK(x(1, 3) == Complex(1.0, 0.0));
    CHECK(x(3, 1) == Complex(1.0, 0.0));
    const Matrix& y = basis.element(basis.y_index(1, 3)).entries();
    CHECK(y(1, 3) == Complex(0.0, 1.0));
    CHECK(y(3, 1) == Complex(0.0, -1.0));
}

TEST_CASE("lie: coordinates invert the basis expansion") {
    for (Index n : {2, 3, 4}) {
        const AlgebraBasis basis = AlgebraBasis::build(n);
        Rng rng(derive_seed(101, static_cast<std::uint64_t>(n)));

        // from_coords(to_coords(H)) = H for random traceless H.
        for (int trial = 0; trial < 5; ++trial) {
            const HermitianOp h = rng.traceless_unit(n);
            const HermitianOp back = basis.from_coords(basis.to_coords(h));
            CHECK(max_abs(Matrix(back.entries() - h.entries())) < 1e-12);
        }

        // to_coords(from_coords(v)) = v for random coordinates.
        AlgebraCoords coords{n, RealVector(n * n - 1)};
        for (Index i = 0; i < coords.v.size(); ++i) coords.v(i) = rng.gaussian();
        const AlgebraCoords back = basis.to_coords(basis.from_coords(coords));
        CHECK((back.v - coords.v).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("lie: to_coords rejects a trace component") {
    const AlgebraBasis basis = AlgebraBasis::build(2);
    CHECK_THROWS_AS(basis.to_coords(HermitianOp(Matrix::Identity(2, 2))),
                    NotTraceless);
}

TEST_CASE("lie: commutator is antisymmetric and satisfies jacobi") {
    Rng rng(202);
    const Index n = 3;
    const HermitianOp a = rng.hermitian(n);
    const HermitianOp b = rng.hermitian(n);
    const HermitianOp c = rng.hermitian(n);

    CHECK(max_abs(Matrix(commutator(a, b) + commutator(b, a))) < 1e-12);

    const Matrix jacobi =
        commutator(a, HermitianOp(Complex(0, 1) * commutator(b, c))) +
        commutator(b, HermitianOp(Complex(0, 1) * commutator(c, a))) +
        commutator(c, HermitianOp(Complex(0, 1) * commutator(a, b)));
    CHECK(max_abs(jacobi) < 1e-10);
}

TEST_CASE("lie: ad_action produces traceless hermitian output") {
    Rng rng(203);
    const HermitianOp a = rng.hermitian(3);
    const HermitianOp b = rng.hermitian(3);
    const HermitianOp out = ad_action(a, b);
    CHECK(out.is_traceless());
    // ad(sigma_z, sigma_x) = -2*sigma_y = 2*Y01 in this basis convention.
    const HermitianOp zx =
        ad_action(HermitianOp(pauli_z()), HermitianOp(pauli_x()));
    CHECK(max_abs(Matrix(zx.entries() + 2.0 * pauli_y())) < 1e-14);
}

TEST_CASE("lie: expm_i matches the diagonal exponential and is unitary") {
    const HermitianOp z(pauli_z());
    const double t = 0.7;
    const UnitaryOp u = expm_i(z, t);
    CHECK(std::abs(u.entries()(0, 0) - std::exp(Complex(0, t))) < 1e-14);
    CHECK(std::abs(u.entries()(1, 1) - std::exp(Complex(0, -t))) < 1e-14);
    CHECK(std::abs(u.entries()(0, 1)) < 1e-14);

    Rng rng(204);
    const HermitianOp h = rng.hermitian(4);
    const UnitaryOp v = expm_i(h, 1.3);
    CHECK(max_abs(Matrix(v.entries() * v.entries().adjoint() -
                         Matrix::Identity(4, 4))) < 1e-12);
    CHECK(max_abs(Matrix(expm_i(h, 0.0).entries() - Matrix::Identity(4, 4))) <
          1e-14);
}

TEST_CASE("lie: expm_i composes along the time axis") {
    Rng rng(205);
    const HermitianOp h = rng.hermitian(3);
    const Matrix once = expm_i(h, 0.9).entries();
    const Matrix split = expm_i(h, 0.5).entries() * expm_i(h, 0.4).entries();
    CHECK(max_abs(Matrix(once - split)) < 1e-12);
}

TEST_CASE("lie: traceless_part removes exactly the trace") {
    Rng rng(206);
    const HermitianOp h = rng.hermitian(3);
    const HermitianOp t = traceless_part(h);
    CHECK(t.is_traceless());
    CHECK(max_abs(Matrix(h.entries() - t.entries() -
                         (h.entries().trace() / 3.0) * Matrix::Identity(3, 3))) <
          1e-14);
}

TEST_CASE("lie: phase_aligned_distance ignores a global phase") {
    Rng rng(207);
    const UnitaryOp u = rng.unitary(3);
    const Complex phase = std::exp(Complex(0.0, 1.234));
    CHECK(phase_aligned_distance(u.entries(), Matrix(phase * u.entries())) < 1e-12);

    const UnitaryOp v = rng.unitary(3);
    const double d = phase_aligned_distance(u.entries(), v.entries());
    CHECK(d > 1e-3);  // generic unitaries stay far apart
}

TEST_CASE("lie: validated operator constructors reject bad input") {
    Matrix nonherm(2, 2);
    nonherm << 1.0, 2.0, 3.0, 4.0;
    CHECK_THROWS_AS(HermitianOp{nonherm}, NotHermitian);
    CHECK_THROWS_AS(HermitianOp{Matrix(Matrix::Zero(2, 3))}, DimensionError);
    CHECK_THROWS_AS(HermitianOp::traceless(Matrix::Identity(2, 2)), NotTraceless);
    CHECK_THROWS_AS(UnitaryOp(Matrix(2.0 * Matrix::Identity(2, 2))), NotUnitary);
    CHECK_THROWS_AS(AlgebraBasis::build(1), DimensionError);
}
