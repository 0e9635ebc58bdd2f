#include "hamdist/protocol.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "hamdist/errors.hpp"

namespace hamdist {

std::string to_string(Mode mode) {
    return mode == Mode::ideal ? "ideal" : "trotter";
}

Mode mode_from_string(const std::string& s) {
    if (s == "ideal") return Mode::ideal;
    if (s == "trotter") return Mode::trotter;
    throw ParseError("unknown mode '" + s + "' (expected ideal or trotter)");
}

// ---------------------------------------------------------------------------
// States and measurement
// ---------------------------------------------------------------------------

Vector uniform_state(Index n) {
    if (n < 1) {
        throw DimensionError("uniform_state: need n >= 1");
    }
    return Vector::Constant(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
}

std::vector<Vector> fourier_basis(Index n) {
    const HermitianOp dp = d_prime(n);
    const Vector psi0 = uniform_state(n);
    std::vector<Vector> basis;
    basis.reserve(static_cast<std::size_t>(n));
    for (Index m = 0; m < n; ++m) {
        Vector v(n);
        for (Index k = 0; k < n; ++k) {
            const double angle = static_cast<double>(m) * dp.entries()(k, k).real() *
                                 2.0 * std::numbers::pi / static_cast<double>(n);
            v(k) = std::exp(Complex(0.0, angle)) * psi0(k);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// The plan as a gadget tree
// ---------------------------------------------------------------------------

GadgetSpec plan_gadget(const PrecomputePlan& plan) {
    GadgetSpec lhat =
        GadgetSpec::linear_map(plan.l_decomp, GadgetSpec::signed_wait(1.0), 1.0);
    GadgetSpec poly = GadgetSpec::polynomial_ad(dense_from_odd(plan.poly_odd),
                                                std::move(lhat), plan.a, 1.0);
    return GadgetSpec::linear_map(plan.ltilde_decomp, std::move(poly), 1.0);
}

// ---------------------------------------------------------------------------
// Discrimination runs
// ---------------------------------------------------------------------------

namespace {

/// Gram, confusion, and worst-case success for given final states.
void finish_result(SimulationResult& result, const std::vector<Vector>& basis) {
    const Index n = result.n;
    const auto size = static_cast<std::size_t>(n);

    result.gram = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            result.gram(i, j) =
                result.final_states[static_cast<std::size_t>(i)].dot(
                    result.final_states[static_cast<std::size_t>(j)]);
        }
    }

    result.confusion = RealMatrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const Complex amp = basis[static_cast<std::size_t>(i)].dot(
                result.final_states[static_cast<std::size_t>(j)]);
            result.confusion(i, j) = std::norm(amp);
        }
    }

    result.success = 1.0;
    for (std::size_t j = 0; j < size; ++j) {
        const long m = result.targets[j];
        const Index outcome = static_cast<Index>(((m % n) + n) % n);
        result.success =
            std::min(result.success, result.confusion(outcome, static_cast<Index>(j)));
    }
}

} // namespace

SimulationResult run_discrimination(const PrecomputePlan& plan, Mode mode,
                                    const Budgets& budgets) {
    const Index n = plan.n;
    SimulationResult result;
    result.mode = mode;
    result.n = n;
    result.budgets = budgets;
    result.targets = plan.targets;

    const Vector psi0 = uniform_state(n);
    const std::vector<Vector> basis = fourier_basis(n);
    const GadgetSpec spec = plan_gadget(plan);

    if (mode == Mode::ideal) {
        for (Index j = 0; j < n; ++j) {
            const UnitaryOp u = evaluate_ideal(spec, plan.instance.hamiltonian(j));
            result.final_states.push_back(u.entries() * psi0);
            result.costs.push_back(Cost{});
        }
    } else {
        const ReversalGroup group = ReversalGroup::build(n);
        for (Index j = 0; j < n; ++j) {
            const GateSequence seq =
                materialize(spec, plan.instance.hamiltonian(j), budgets, group);
            result.final_states.push_back(
                evaluate_state(seq, plan.instance.hamiltonian(j), psi0));
            result.costs.push_back(seq.cost());
        }
    }

    finish_result(result, basis);
    return result;
}

// ---------------------------------------------------------------------------
// Diagonal worked example
// ---------------------------------------------------------------------------

DiscriminationInstance diagonal_example(Index n) {
    if (n < 2) {
        throw DimensionError("diagonal_example: need n >= 2");
    }
    std::vector<HermitianOp> hams;
    hams.reserve(static_cast<std::size_t>(n));
    for (Index j = 1; j <= n; ++j) {
        Matrix h = Matrix::Zero(n, n);
        for (Index k = 0; k < n; ++k) {
            h(k, k) = static_cast<double>(j) * static_cast<double>(k + 1);
        }
        hams.emplace_back(std::move(h));
    }
    return DiscriminationInstance(n, std::move(hams));
}

SimulationResult run_diagonal_example(Index n) {
    const DiscriminationInstance inst = diagonal_example(n);
    const double t = 2.0 * std::numbers::pi / static_cast<double>(n);

    SimulationResult result;
    result.mode = Mode::ideal;
    result.n = n;
    for (Index j = 1; j <= n; ++j) result.targets.push_back(j);

    const Vector psi0 = uniform_state(n);
    const std::vector<Vector> basis = fourier_basis(n);
    for (Index j = 0; j < n; ++j) {
        GateSequence seq(n);
        seq.append_wait(t);
        result.final_states.push_back(
            evaluate_state(seq, inst.hamiltonian(j), psi0));
        result.costs.push_back(seq.cost());
    }

    finish_result(result, basis);
    return result;
}

} // namespace hamdist
