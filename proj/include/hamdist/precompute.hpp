// precompute.hpp — Classical planning: choose G, build the rank-one maps ℒ
// and Ã, assign integer targets, interpolate the odd polynomial, and
// decompose both maps into unitary conjugations

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hamdist/rng.hpp"
#include "hamdist/superop.hpp"
#include "hamdist/types.hpp"

namespace hamdist {

/// The n candidate Hamiltonians on an n-dimensional space, stored as given
/// together with their traceless parts (the physically distinguishable data).
class DiscriminationInstance {
public:
    DiscriminationInstance(Index n, std::vector<HermitianOp> hamiltonians);

    Index dim() const { return n_; }
    const std::vector<HermitianOp>& hamiltonians() const { return hamiltonians_; }
    const std::vector<HermitianOp>& traceless_parts() const { return traceless_; }
    const HermitianOp& hamiltonian(Index j) const {
        return hamiltonians_[static_cast<std::size_t>(j)];
    }
    const HermitianOp& traceless_part_of(Index j) const {
        return traceless_[static_cast<std::size_t>(j)];
    }

private:
    Index n_;
    std::vector<HermitianOp> hamiltonians_;
    std::vector<HermitianOp> traceless_;
};

/// Indices (i, j), i < j, whose traceless parts satisfy H̃_i = −H̃_j exactly;
/// any linear functional then forces λ_i = −λ_j and oddness of p forces
/// m_i = −m_j.
struct SignPair {
    Index i = 0;
    Index j = 0;
};

/// Result of the functional search: the witness F, the values λ_j = tr(F·H̃_j),
/// and the detected sign pairs.
struct LambdaResult {
    HermitianOp f;
    std::vector<double> lambdas;
    std::vector<SignPair> sign_pairs;
};

/// Everything the quantum procedure needs, produced deterministically from
/// (instance, seed) and verified end-to-end before being returned.
struct PrecomputePlan {
    Index n;
    DiscriminationInstance instance;

    HermitianOp g;              // two-eigenvalue operator, gap Δ = n
    HermitianOp f;              // functional witness: ℒ(B) = tr(F·B)·G
    std::vector<double> lambdas;
    std::vector<SignPair> sign_pairs;
    std::vector<long> targets;  // m_j, pairwise distinct mod n
    std::vector<double> poly_odd;  // (a_1, a_3, a_5, …) of the odd polynomial

    HermitianOp a;              // probe operator X_{12}
    HermitianOp c;              // Ad(G)(A) = Δ·Y_{12}
    HermitianOp d_prime;        // diag(1..n) − ((n+1)/2)·1

    ConjugationDecomposition l_decomp;       // realizes ℒ
    ConjugationDecomposition ltilde_decomp;  // realizes Ã

    std::uint64_t seed = 0;
    std::string rng_name = Rng::kName;
};

// ---------------------------------------------------------------------------
// Pipeline steps
// ---------------------------------------------------------------------------

/// diag(n−1, −1, …, −1): traceless with the two eigenvalues n−1 and −1,
/// spectral gap Δ = n.
HermitianOp choose_g(Index n);

/// λ_j = tr(F · H̃_j) for a given functional witness.
std::vector<double> lambdas_from_functional(const HermitianOp& f,
                                            const DiscriminationInstance& inst);

/// Exact-negation pairs among the traceless parts.
std::vector<SignPair> find_sign_pairs(const DiscriminationInstance& inst);

/// Draw seeded random traceless functionals until the values λ_j are all
/// nonzero and pairwise distinct in absolute value, except for recorded sign
/// pairs where λ_i = −λ_j is forced. The accepted F is rescaled so
/// max_j |λ_j| = 1 (any nonzero scale works; this one conditions the
/// interpolation). Exhausting the resample budget raises FunctionalCollision.
LambdaResult find_lambdas(const DiscriminationInstance& inst, std::uint64_t seed);

/// Integer exponents m_j, pairwise distinct modulo n, with m_i = −m_j on sign
/// pairs; unpaired hypotheses receive 1, 2, 3, … skipping used residues.
/// Raises InfeasibleTargets when the sign-pair residue constraints cannot be
/// met (e.g. n = 2 with H_2 = −H_1).
std::vector<long> assign_targets(const std::vector<double>& lambdas,
                                 const std::vector<SignPair>& sign_pairs,
                                 Index n);

/// Coefficients (a_1, a_3, …) of the odd polynomial p with
/// p(i·λ_jΔ) = i·m_jΔ for all j, obtained by solving the real system
/// q(λ_jΔ) = m_jΔ over odd powers (one condition per sign pair) and flipping
/// alternate signs: p(ix) = i·(a_1x − a_3x³ + a_5x⁵ − …) means
/// a_{2r+1} = (−1)^r q_{2r+1}.
std::vector<double> interpolate_odd_polynomial(const std::vector<double>& lambdas,
                                               const std::vector<long>& targets,
                                               double delta);

/// Dense coefficient list from degree 1 — (a_1, 0, a_3, 0, …) — the layout
/// polynomial_of and the gadget layer use.
std::vector<double> dense_from_odd(const std::vector<double>& odd);

/// A := X_{12} and C := Ad(G)(A); C = Δ·Y_{12} ≠ 0 since X_{12} straddles
/// G's eigenspaces.
std::pair<HermitianOp, HermitianOp> build_a_c(const HermitianOp& g,
                                              const AlgebraBasis& basis);

/// diag(1, …, n) − ((n+1)/2)·1.
HermitianOp d_prime(Index n);

/// Rank-one ℒ: B ↦ tr(F·B)·G, so ℒ(H̃_j) = λ_j·G.
SuperOp build_l(const HermitianOp& f, const HermitianOp& g,
                const AlgebraBasis& basis);

/// Rank-one Ã: B ↦ (⟨C,B⟩ / ⟨C,C⟩)·D′·(2π/n), so Ã(m·C) = m·D′·2π/n.
SuperOp build_ltilde(const HermitianOp& c, Index n, const AlgebraBasis& basis);

/// Full pipeline: runs every step above, decomposes ℒ and Ã into
/// conjugations, and verifies Ã(p(Ad(ℒ(H_j)))(A)) = m_j·D′·2π/n for every j
/// using the decomposed maps (the ones the gadget layer will execute) before
/// returning.
PrecomputePlan make_plan(const DiscriminationInstance& inst, std::uint64_t seed);

/// Max-abs deviation of the verification identity over all hypotheses,
/// computed from the decomposed maps.
double plan_verification_error(const PrecomputePlan& plan);

/// Throws PlanVerificationFailed when plan_verification_error exceeds the
/// configured tolerance.
void verify_plan(const PrecomputePlan& plan);

} // namespace hamdist
