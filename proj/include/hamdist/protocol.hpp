// protocol.hpp — End-to-end discrimination runs: execute the plan under each
// hypothesis, measure in the Fourier basis, and report Gram/confusion
// matrices and the worst-case success probability

#pragma once

#include <string>
#include <vector>

#include "hamdist/gadgets.hpp"
#include "hamdist/precompute.hpp"
#include "hamdist/types.hpp"

namespace hamdist {

enum class Mode { ideal, trotter };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);  // throws ParseError

struct SimulationResult {
    Mode mode = Mode::ideal;
    Index n = 0;
    Budgets budgets;                   // meaningful in trotter mode
    std::vector<Vector> final_states;  // one per hypothesis
    Matrix gram;                       // ⟨ψ_i, ψ_j⟩
    RealMatrix confusion;              // P(outcome i | hypothesis j)
    std::vector<long> targets;         // m_j from the plan
    double success = 0.0;              // min_j P(outcome m_j mod n | H_j)
    std::vector<Cost> costs;           // per-hypothesis sequence cost
};

/// The uniform superposition (1, …, 1)ᵀ/√n.
Vector uniform_state(Index n);

/// The n orthonormal measurement states e^{i·m·D′·2π/n}·ψ₀, m = 0..n−1 —
/// discrete Fourier transforms of the canonical basis vectors up to the
/// global-phase convention of D′.
std::vector<Vector> fourier_basis(Index n);

/// The plan's full recursive gadget: Ã ∘ p(Ad(ℒ(·)))(A) as a spec tree whose
/// only unknown is the hypothesis filling the waits.
GadgetSpec plan_gadget(const PrecomputePlan& plan);

/// Run the discrimination protocol under every hypothesis of the plan's
/// instance. Ideal mode evaluates the gadget limits exactly; trotter mode
/// materializes sequences under the given budgets (raising BudgetTooSmall
/// beyond the segment cap).
SimulationResult run_discrimination(const PrecomputePlan& plan, Mode mode,
                                    const Budgets& budgets);

/// The diagonal worked example: H_j = j·diag(1, …, n), j = 1..n.
DiscriminationInstance diagonal_example(Index n);

/// The example's one-wait protocol: evolve ψ₀ for t = 2π/n under each H_j
/// and measure; success is exactly 1 up to rounding.
SimulationResult run_diagonal_example(Index n);

} // namespace hamdist
