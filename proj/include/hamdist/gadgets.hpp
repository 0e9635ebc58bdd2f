// gadgets.hpp — Unitary-and-wait sequences simulating derived evolutions of
// the unknown Hamiltonian: time reversal by group averaging, group-commutator
// blocks, conjugation linear maps, and the polynomial-of-Ad recursion

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "hamdist/superop.hpp"
#include "hamdist/types.hpp"

namespace hamdist {

// ---------------------------------------------------------------------------
// GateSequence
// ---------------------------------------------------------------------------

struct Cost {
    long applies = 0;
    long waits = 0;
    double total_wait_time = 0.0;
};

/// A flat program: ApplyKnown(U) and Wait(t > 0) segments, executed first to
/// last. Distinct gates are pooled (long sequences repeat a handful of
/// unitaries), so a segment stores an index into the gate table.
class GateSequence {
public:
    enum class Op { apply, wait };

    struct Segment {
        Op op;
        Index gate = -1;        // into gates(), for apply
        double duration = 0.0;  // for wait
    };

    explicit GateSequence(Index n) : n_(n) {}

    Index dim() const { return n_; }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<Matrix>& gates() const { return gates_; }
    const Matrix& gate(Index i) const { return gates_[static_cast<std::size_t>(i)]; }

    void append_apply(const Matrix& u);
    void append_wait(double t);  // throws NonpositiveTime unless t > 0
    void append(const GateSequence& tail);

    Cost cost() const;

private:
    Index n_;
    std::vector<Segment> segments_;
    std::vector<Matrix> gates_;
    // Byte-hash of matrix contents → gate index, for pooling.
    std::vector<std::pair<std::size_t, Index>> pool_;

    Index intern(const Matrix& u);
};

// ---------------------------------------------------------------------------
// ReversalGroup
// ---------------------------------------------------------------------------

/// The n² Weyl–Heisenberg operators X^aZ^b (X the cyclic shift, Z the phase
/// operator), identity first, then lexicographic in (a, b). Irreducible, so
/// conjugation-averaging maps every operator to a multiple of the identity.
class ReversalGroup {
public:
    static ReversalGroup build(Index n);

    Index dim() const { return n_; }
    const std::vector<UnitaryOp>& elements() const { return elements_; }

    /// (1/n²)·Σ_U U H U†.
    Matrix average(const Matrix& h) const;

private:
    ReversalGroup() = default;
    Index n_ = 0;
    std::vector<UnitaryOp> elements_;
};

// ---------------------------------------------------------------------------
// Budgets
// ---------------------------------------------------------------------------

/// Product-formula knobs, applied uniformly at every expanded nesting level.
struct Budgets {
    int m = 16;                      // reversal / commutator repetitions
    int k = 16;                      // linear-map / monomial-split repetitions
    int depth = 1;                   // levels materialized before the ideal fallback
    long segment_cap = 10'000'000;   // refuse to materialize beyond this
};

// ---------------------------------------------------------------------------
// GadgetSpec
// ---------------------------------------------------------------------------

/// Recursive description of a derived evolution. Each node generates a
/// Hermitian operator gen(node, H) and stands for the unitary
/// e^{i·gen(node, H)}:
///
///   SignedWait(s)                 gen = s·H
///   KnownOp(A, s)                 gen = s·A
///   Commutator(l, r, s)           gen = s·i[gen(l), gen(r)]
///   LinearMap(decomp, inner, s)   gen = s·Σ c_j U_j gen(inner) U_j†
///   PolynomialAd(p, g, A, s)      gen = s·Σ_r a_r Ad(gen(g))^r(A)
///
/// Materialization expands nodes into product-formula sequences down to the
/// budget depth; deeper nodes collapse to a single exact gate.
class GadgetSpec {
public:
    enum class Kind { signed_wait, known_op, commutator, linear_map, polynomial_ad };

    static GadgetSpec signed_wait(double s);
    static GadgetSpec known_op(HermitianOp a, double s);
    static GadgetSpec commutator(GadgetSpec left, GadgetSpec right, double s);
    static GadgetSpec linear_map(ConjugationDecomposition decomp, GadgetSpec inner,
                                 double s);
    static GadgetSpec polynomial_ad(std::vector<double> poly, GadgetSpec generator,
                                    HermitianOp a, double s);

    Kind kind() const { return kind_; }
    double scale() const { return s_; }
    const GadgetSpec& left() const { return *left_; }
    const GadgetSpec& right() const { return *right_; }
    const GadgetSpec& inner() const { return *left_; }
    const GadgetSpec& generator() const { return *left_; }
    const HermitianOp& known() const { return *known_; }
    const ConjugationDecomposition& decomp() const { return *decomp_; }
    const std::vector<double>& poly() const { return poly_; }

private:
    GadgetSpec(Kind kind, double s) : kind_(kind), s_(s) {}

    Kind kind_;
    double s_;
    std::shared_ptr<const GadgetSpec> left_;   // child / inner / generator
    std::shared_ptr<const GadgetSpec> right_;  // commutator right operand
    std::optional<HermitianOp> known_;         // known_op payload, polynomial A
    std::shared_ptr<const ConjugationDecomposition> decomp_;
    std::vector<double> poly_;                 // dense from degree 1
};

// ---------------------------------------------------------------------------
// Sequence builders
// ---------------------------------------------------------------------------

/// σ ↦ sequence realizing e^{i·F(H)·σ} for the gadget's unknown operand.
using SequenceGenerator = std::function<GateSequence(double)>;

/// m repetitions of { for each non-identity U: ApplyKnown(U), Wait(t/m),
/// ApplyKnown(U†) }; approaches e^{−iHt} for traceless H as m → ∞.
GateSequence reversal_sequence(double t, int m, const ReversalGroup& group);

/// Wait(s) for s > 0, empty for s = 0, reversal gadget for s < 0.
GateSequence signed_wait_sequence(double s, int m, const ReversalGroup& group);

/// m² four-factor group-commutator blocks with step √|s|/m; approaches
/// e^{i·ad(F(H), A)·s}. Negative s swaps the operand roles.
GateSequence commutator_sequence(const SequenceGenerator& inner, const HermitianOp& a,
                                 double s, int m);

/// Both operands unknown (needed for nested adjoint powers).
GateSequence commutator_sequence(const SequenceGenerator& left,
                                 const SequenceGenerator& right, double s, int m);

/// k repetitions of the conjugated product Π_j U_j·inner(c_j·s/k)·U_j†;
/// approaches e^{i·ℒ(F(H))·s}.
GateSequence linear_map_sequence(const ConjugationDecomposition& decomp,
                                 const SequenceGenerator& inner, double s, int k);

/// First-order product formula over the polynomial's monomials, each
/// realized by nested commutator blocks; approaches e^{i·p(Ad(G′))(A)·s}.
/// poly is dense from degree 1 and therefore cannot carry a constant term;
/// callers holding a conventional coefficient list should convert it with
/// poly_from_constant_first.
GateSequence polynomial_ad_sequence(const std::vector<double>& poly,
                                    const SequenceGenerator& generator,
                                    const HermitianOp& a, double s, int k, int m);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Left-to-right product of segment unitaries under Hamiltonian H
/// (Wait(t) contributes e^{iHt}).
UnitaryOp evaluate(const GateSequence& seq, const HermitianOp& h);

/// The same product applied to a normalized state.
Vector evaluate_state(const GateSequence& seq, const HermitianOp& h, const Vector& psi);

/// The node's generated Hermitian operator gen(spec, H).
HermitianOp generated_operator(const GadgetSpec& spec, const HermitianOp& h);

/// The exact m,k → ∞ limit: e^{i·gen(spec, H)}.
UnitaryOp evaluate_ideal(const GadgetSpec& spec, const HermitianOp& h);

// ---------------------------------------------------------------------------
// Materialization
// ---------------------------------------------------------------------------

/// Expand a spec into a concrete sequence. Nodes deeper than budgets.depth
/// collapse to ApplyKnown(evaluate_ideal(node, h)) — h is the simulated
/// hypothesis; a fully expanded sequence never consults it. Raises
/// BudgetTooSmall when the estimated segment count exceeds
/// budgets.segment_cap.
GateSequence materialize(const GadgetSpec& spec, const HermitianOp& h,
                         const Budgets& budgets, const ReversalGroup& group);

/// Exact segment counts of materialize(...) without building the sequence.
Cost estimate_cost(const GadgetSpec& spec, const Budgets& budgets,
                   const ReversalGroup& group);

/// Convert a conventional coefficient list (constant term first) into the
/// dense-from-degree-1 layout the gadget layer uses. The constant term must
/// vanish — a polynomial with p(0) ≠ 0 has no gadget realization — otherwise
/// NonzeroConstantTerm is raised.
std::vector<double> poly_from_constant_first(const std::vector<double>& coeffs);

} // namespace hamdist
