#include "hamdist/gadgets.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>
#include <utility>

#include "hamdist/kernels.hpp"

namespace hamdist {

// ---------------------------------------------------------------------------
// GateSequence
// ---------------------------------------------------------------------------

namespace {

std::size_t matrix_bytes_hash(const Matrix& m) {
    // FNV-1a over the raw entry bytes; pooling is bit-exact by design.
    const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
    const std::size_t len = static_cast<std::size_t>(m.size()) * sizeof(Complex);
    std::size_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

bool matrix_bytes_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(),
                       static_cast<std::size_t>(a.size()) * sizeof(Complex)) == 0;
}

} // namespace

Index GateSequence::intern(const Matrix& u) {
    const std::size_t h = matrix_bytes_hash(u);
    for (const auto& [hash, idx] : pool_) {
        if (hash == h && matrix_bytes_equal(gates_[static_cast<std::size_t>(idx)], u)) {
            return idx;
        }
    }
    const Index idx = static_cast<Index>(gates_.size());
    gates_.push_back(u);
    pool_.emplace_back(h, idx);
    return idx;
}

void GateSequence::append_apply(const Matrix& u) {
    if (u.rows() != n_ || u.cols() != n_) {
        throw DimensionError("GateSequence: gate dimension mismatch");
    }
    segments_.push_back({Op::apply, intern(u), 0.0});
}

void GateSequence::append_wait(double t) {
    if (!(t > 0.0)) {
        throw NonpositiveTime("GateSequence: wait duration must be positive, got " +
                              std::to_string(t));
    }
    segments_.push_back({Op::wait, -1, t});
}

void GateSequence::append(const GateSequence& tail) {
    if (tail.n_ != n_) {
        throw DimensionError("GateSequence: appending sequence of different dimension");
    }
    for (const Segment& seg : tail.segments_) {
        if (seg.op == Op::apply) {
            append_apply(tail.gates_[static_cast<std::size_t>(seg.gate)]);
        } else {
            append_wait(seg.duration);
        }
    }
}

Cost GateSequence::cost() const {
    Cost c;
    for (const Segment& seg : segments_) {
        if (seg.op == Op::apply) {
            ++c.applies;
        } else {
            ++c.waits;
            c.total_wait_time += seg.duration;
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// ReversalGroup
// ---------------------------------------------------------------------------

ReversalGroup ReversalGroup::build(Index n) {
    if (n < 2) {
        throw DimensionError("ReversalGroup: need n >= 2");
    }
    Matrix x = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        x((j + 1) % n, j) = 1.0;
    }
    Matrix z = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        z(j, j) = std::exp(Complex(0.0, 2.0 * std::numbers::pi *
                                            static_cast<double>(j) /
                                            static_cast<double>(n)));
    }

    ReversalGroup group;
    group.n_ = n;
    group.elements_.reserve(static_cast<std::size_t>(n * n));
    Matrix xa = Matrix::Identity(n, n);
    for (Index a = 0; a < n; ++a) {
        Matrix w = xa;
        for (Index b = 0; b < n; ++b) {
            group.elements_.emplace_back(w);
            w = w * z;
        }
        xa = xa * x;
    }
    return group;
}

Matrix ReversalGroup::average(const Matrix& h) const {
    if (h.rows() != n_ || h.cols() != n_) {
        throw DimensionError("ReversalGroup::average: dimension mismatch");
    }
    Matrix acc = Matrix::Zero(n_, n_);
    for (const UnitaryOp& u : elements_) {
        acc += u.entries() * h * u.entries().adjoint();
    }
    return acc / static_cast<double>(n_ * n_);
}

// ---------------------------------------------------------------------------
// GadgetSpec
// ---------------------------------------------------------------------------

GadgetSpec GadgetSpec::signed_wait(double s) {
    return GadgetSpec(Kind::signed_wait, s);
}

GadgetSpec GadgetSpec::known_op(HermitianOp a, double s) {
    GadgetSpec spec(Kind::known_op, s);
    spec.known_ = std::move(a);
    return spec;
}

GadgetSpec GadgetSpec::commutator(GadgetSpec left, GadgetSpec right, double s) {
    GadgetSpec spec(Kind::commutator, s);
    spec.left_ = std::make_shared<const GadgetSpec>(std::move(left));
    spec.right_ = std::make_shared<const GadgetSpec>(std::move(right));
    return spec;
}

GadgetSpec GadgetSpec::linear_map(ConjugationDecomposition decomp, GadgetSpec inner,
                                  double s) {
    GadgetSpec spec(Kind::linear_map, s);
    spec.decomp_ = std::make_shared<const ConjugationDecomposition>(std::move(decomp));
    spec.left_ = std::make_shared<const GadgetSpec>(std::move(inner));
    return spec;
}

GadgetSpec GadgetSpec::polynomial_ad(std::vector<double> poly, GadgetSpec generator,
                                     HermitianOp a, double s) {
    GadgetSpec spec(Kind::polynomial_ad, s);
    spec.poly_ = std::move(poly);
    spec.left_ = std::make_shared<const GadgetSpec>(std::move(generator));
    spec.known_ = std::move(a);
    return spec;
}

std::vector<double> poly_from_constant_first(const std::vector<double>& coeffs) {
    if (!coeffs.empty() && coeffs.front() != 0.0) {
        throw NonzeroConstantTerm(
            "polynomial constant term " + std::to_string(coeffs.front()) +
            " has no gadget realization (p(0) must be 0)");
    }
    if (coeffs.empty()) return {};
    return std::vector<double>(coeffs.begin() + 1, coeffs.end());
}

// ---------------------------------------------------------------------------
// Generated operators and ideal evaluation
// ---------------------------------------------------------------------------

namespace {

/// Composite generators (weighted conjugation sums, nested ad powers with
/// large interpolation coefficients) are Hermitian in exact arithmetic but
/// their skew part grows with the coefficient norms in floating point, so
/// form the Hermitian part explicitly instead of validating rounding noise.
Matrix hermitian_part(const Matrix& m) {
    return 0.5 * (m + m.adjoint().eval());
}

} // namespace

HermitianOp generated_operator(const GadgetSpec& spec, const HermitianOp& h) {
    switch (spec.kind()) {
    case GadgetSpec::Kind::signed_wait:
        return HermitianOp(spec.scale() * h.entries());
    case GadgetSpec::Kind::known_op:
        if (spec.known().dim() != h.dim()) {
            throw DimensionError("generated_operator: known operator dimension mismatch");
        }
        return HermitianOp(spec.scale() * spec.known().entries());
    case GadgetSpec::Kind::commutator: {
        const HermitianOp l = generated_operator(spec.left(), h);
        const HermitianOp r = generated_operator(spec.right(), h);
        return HermitianOp(
            hermitian_part(Complex(0.0, spec.scale()) * commutator(l, r)));
    }
    case GadgetSpec::Kind::linear_map: {
        const HermitianOp inner = generated_operator(spec.inner(), h);
        if (spec.decomp().dim != h.dim()) {
            throw DimensionError("generated_operator: decomposition dimension mismatch");
        }
        return HermitianOp(hermitian_part(
            spec.scale() * spec.decomp().apply_matrix(inner.entries())));
    }
    case GadgetSpec::Kind::polynomial_ad: {
        const HermitianOp g = generated_operator(spec.generator(), h);
        if (spec.known().dim() != h.dim()) {
            throw DimensionError("generated_operator: probe operator dimension mismatch");
        }
        Matrix cur = spec.known().entries();
        Matrix acc = Matrix::Zero(h.dim(), h.dim());
        for (std::size_t r = 0; r < spec.poly().size(); ++r) {
            cur = hermitian_part(
                Matrix(Complex(0.0, 1.0) * (g.entries() * cur - cur * g.entries())));
            const double a = spec.poly()[r];
            if (a != 0.0) acc += a * cur;
        }
        return HermitianOp(spec.scale() * acc);
    }
    }
    throw DimensionError("generated_operator: unreachable");
}

UnitaryOp evaluate_ideal(const GadgetSpec& spec, const HermitianOp& h) {
    return expm_i(generated_operator(spec, h), 1.0);
}

// ---------------------------------------------------------------------------
// Emission machinery
//
// Every sequence builder is written once against a Sink; the emitting sink
// appends to a GateSequence while the counting sink does the same walk
// arithmetically (one repetition counted, then multiplied), which is what
// makes estimate_cost exact by construction.
// ---------------------------------------------------------------------------

namespace {

constexpr long kCountCeiling = std::numeric_limits<long>::max() / 4;

long sat_add(long a, long b) {
    return a > kCountCeiling - b ? kCountCeiling : a + b;
}

long sat_mul(long a, long b) {
    if (a == 0 || b == 0) return 0;
    return a > kCountCeiling / b ? kCountCeiling : a * b;
}

struct EmitSink {
    GateSequence* seq;

    void apply(const Matrix& u) { seq->append_apply(u); }
    template <class F>
    void apply_lazy(F&& gate) { seq->append_apply(gate()); }
    void wait(double t) { seq->append_wait(t); }
    void splice(const GateSequence& sub) { seq->append(sub); }
    template <class Body>
    void repeat(long reps, Body&& body) {
        for (long i = 0; i < reps; ++i) body(*this);
    }
};

struct CountSink {
    Cost cost;

    void apply(const Matrix&) { cost.applies = sat_add(cost.applies, 1); }
    template <class F>
    void apply_lazy(F&&) { cost.applies = sat_add(cost.applies, 1); }
    void wait(double t) {
        cost.waits = sat_add(cost.waits, 1);
        cost.total_wait_time += t;
    }
    void splice(const GateSequence& sub) {
        const Cost c = sub.cost();
        cost.applies = sat_add(cost.applies, c.applies);
        cost.waits = sat_add(cost.waits, c.waits);
        cost.total_wait_time += c.total_wait_time;
    }
    template <class Body>
    void repeat(long reps, Body&& body) {
        CountSink sub;
        body(sub);
        cost.applies = sat_add(cost.applies, sat_mul(reps, sub.cost.applies));
        cost.waits = sat_add(cost.waits, sat_mul(reps, sub.cost.waits));
        cost.total_wait_time += static_cast<double>(reps) * sub.cost.total_wait_time;
    }
};

/// Emits e^{i·F(H)·σ} for the gadget's unknown operand into the sink.
template <class Sink>
using GenFn = std::function<void(Sink&, double)>;

struct EigSys {
    RealVector evals;
    Matrix evecs;
};

EigSys make_eig(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
    if (es.info() != Eigen::Success) {
        throw DimensionError("materialize: eigendecomposition failed");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix gate_from_eig(const EigSys& sys, double t) {
    const Index n = sys.evals.size();
    Vector phases(n);
    for (Index i = 0; i < n; ++i) {
        phases(i) = std::exp(Complex(0.0, sys.evals(i) * t));
    }
    return sys.evecs * phases.asDiagonal() * sys.evecs.adjoint();
}

template <class Sink>
void emit_reversal(Sink& sink, double t, int m, const ReversalGroup& group) {
    if (!(t > 0.0)) {
        throw NonpositiveTime("reversal_sequence: need t > 0, got " + std::to_string(t));
    }
    if (m < 1) {
        throw DimensionError("reversal_sequence: need m >= 1");
    }
    const double slice = t / static_cast<double>(m);
    const auto& elements = group.elements();
    std::vector<Matrix> adj;
    adj.reserve(elements.size());
    for (const UnitaryOp& u : elements) adj.push_back(u.entries().adjoint());

    sink.repeat(m, [&](auto& s) {
        for (std::size_t i = 1; i < elements.size(); ++i) {
            s.apply(elements[i].entries());
            s.wait(slice);
            s.apply(adj[i]);
        }
    });
}

template <class Sink>
void emit_signed_wait(Sink& sink, double s, int m, const ReversalGroup& group) {
    if (s > 0.0) {
        sink.wait(s);
    } else if (s < 0.0) {
        emit_reversal(sink, -s, m, group);
    }
}

template <class Sink>
void emit_commutator(Sink& sink, const GenFn<Sink>& left, const GenFn<Sink>& right,
                     double s, int m) {
    if (m < 1) {
        throw DimensionError("commutator_sequence: need m >= 1");
    }
    if (s == 0.0) return;
    // ad antisymmetry: a negative scale is the same gadget with the operands
    // swapped, keeping every exponent magnitude positive.
    const GenFn<Sink>& p = s < 0.0 ? right : left;
    const GenFn<Sink>& q = s < 0.0 ? left : right;
    const double step = std::sqrt(std::abs(s)) / static_cast<double>(m);
    const long blocks = sat_mul(m, m);
    // One block is the group commutator e^{iPσ}e^{iQσ}e^{−iPσ}e^{−iQσ},
    // emitted rightmost factor first.
    sink.repeat(blocks, [&](auto& snk) {
        q(snk, -step);
        p(snk, -step);
        q(snk, step);
        p(snk, step);
    });
}

template <class Sink>
void emit_linear_map(Sink& sink, const ConjugationDecomposition& decomp,
                     const GenFn<Sink>& inner, double s, int k) {
    if (k < 1) {
        throw DimensionError("linear_map_sequence: need k >= 1");
    }
    if (s == 0.0 || decomp.terms.empty()) return;

    const Index n = decomp.dim;
    const Matrix identity = Matrix::Identity(n, n);
    struct Factor {
        const Matrix* u;
        Matrix udag;
        double sigma;
        bool trivial_u;
    };
    std::vector<Factor> factors;
    factors.reserve(decomp.terms.size());
    for (const ConjugationTerm& term : decomp.terms) {
        Factor f;
        f.u = &term.u.entries();
        f.udag = term.u.entries().adjoint();
        f.sigma = term.c * s / static_cast<double>(k);
        f.trivial_u = matrix_bytes_equal(*f.u, identity);
        factors.push_back(std::move(f));
    }

    // The display's product is U_1 e^{·c_1} U_1† … U_m e^{·c_m} U_m†, so the
    // last factor acts first.
    sink.repeat(k, [&](auto& snk) {
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
            if (it->sigma == 0.0) continue;
            if (!it->trivial_u) snk.apply(it->udag);
            inner(snk, it->sigma);
            if (!it->trivial_u) snk.apply(*it->u);
        }
    });
}

/// e^{i·Ad(G′)^r(A)·w} as r nested group-commutator levels; the A-side factor
/// uses the probe's eigensystem directly.
template <class Sink>
void emit_monomial(Sink& sink, int r, double w, const GenFn<Sink>& gen,
                   const EigSys& a_eig, int m) {
    if (w == 0.0) return;
    if (r <= 1) {
        const GenFn<Sink> known = [&a_eig](Sink& snk, double sigma) {
            if (sigma == 0.0) return;
            snk.apply_lazy([&a_eig, sigma] { return gate_from_eig(a_eig, sigma); });
        };
        emit_commutator<Sink>(sink, gen, known, w, m);
        return;
    }
    const GenFn<Sink> lower = [r, &gen, &a_eig, m](Sink& snk, double sigma) {
        emit_monomial<Sink>(snk, r - 1, sigma, gen, a_eig, m);
    };
    emit_commutator<Sink>(sink, gen, lower, w, m);
}

template <class Sink>
void emit_polynomial_ad(Sink& sink, const std::vector<double>& poly,
                        const GenFn<Sink>& gen, const EigSys& a_eig, double s,
                        int k, int m) {
    if (k < 1) {
        throw DimensionError("polynomial_ad_sequence: need k >= 1");
    }
    if (s == 0.0) return;
    struct Monomial {
        int degree;
        double weight;
    };
    std::vector<Monomial> monomials;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] != 0.0) {
            monomials.push_back({static_cast<int>(i) + 1,
                                 poly[i] * s / static_cast<double>(k)});
        }
    }
    if (monomials.empty()) return;

    // (e^{iB_1 s/k} … e^{iB_q s/k})^k — the highest-degree monomial acts first.
    sink.repeat(k, [&](auto& snk) {
        for (auto it = monomials.rbegin(); it != monomials.rend(); ++it) {
            emit_monomial<Sink>(snk, it->degree, it->weight, gen, a_eig, m);
        }
    });
}

// --- spec tree walking -------------------------------------------------------

struct SpecContext {
    const HermitianOp* h = nullptr;  // null while counting
    const Budgets* budgets = nullptr;
    const ReversalGroup* group = nullptr;
    // Eigensystems cached per node: collapsed generated operators and
    // polynomial probe operators.
    std::map<const void*, EigSys> eig;
};

const EigSys& cached_eig(SpecContext& ctx, const void* key, const Matrix& hermitian) {
    auto it = ctx.eig.find(key);
    if (it == ctx.eig.end()) {
        it = ctx.eig.emplace(key, make_eig(hermitian)).first;
    }
    return it->second;
}

/// Emit e^{i·gen(node, H)·σ}. Levels below the depth budget collapse into a
/// single exact gate computed from the simulated hypothesis.
template <class Sink>
void emit_spec(Sink& sink, const GadgetSpec& node, double sigma, int depth,
               SpecContext& ctx) {
    if (sigma == 0.0 || node.scale() == 0.0) return;

    switch (node.kind()) {
    case GadgetSpec::Kind::signed_wait: {
        const double eff = node.scale() * sigma;
        if (eff > 0.0) {
            sink.wait(eff);
        } else if (depth >= 1) {
            emit_reversal(sink, -eff, ctx.budgets->m, *ctx.group);
        } else {
            // Below the budget depth even backward time is a single exact gate.
            sink.apply_lazy([&ctx, eff] {
                const EigSys& sys = cached_eig(ctx, ctx.h, ctx.h->entries());
                return gate_from_eig(sys, eff);
            });
        }
        return;
    }
    case GadgetSpec::Kind::known_op: {
        const double eff = node.scale() * sigma;
        sink.apply_lazy([&ctx, &node, eff] {
            const EigSys& sys = cached_eig(ctx, &node, node.known().entries());
            return gate_from_eig(sys, eff);
        });
        return;
    }
    default:
        break;
    }

    if (depth < 1) {
        // Ideal fallback: the whole subtree as one gate.
        sink.apply_lazy([&ctx, &node, sigma] {
            const EigSys& sys = cached_eig(
                ctx, &node, generated_operator(node, *ctx.h).entries());
            return gate_from_eig(sys, sigma);
        });
        return;
    }

    switch (node.kind()) {
    case GadgetSpec::Kind::commutator: {
        const GenFn<Sink> left = [&node, depth, &ctx](Sink& snk, double sg) {
            emit_spec(snk, node.left(), sg, depth - 1, ctx);
        };
        const GenFn<Sink> right = [&node, depth, &ctx](Sink& snk, double sg) {
            emit_spec(snk, node.right(), sg, depth - 1, ctx);
        };
        emit_commutator<Sink>(sink, left, right, node.scale() * sigma,
                              ctx.budgets->m);
        return;
    }
    case GadgetSpec::Kind::linear_map: {
        const GenFn<Sink> inner = [&node, depth, &ctx](Sink& snk, double sg) {
            emit_spec(snk, node.inner(), sg, depth - 1, ctx);
        };
        emit_linear_map<Sink>(sink, node.decomp(), inner, node.scale() * sigma,
                              ctx.budgets->k);
        return;
    }
    case GadgetSpec::Kind::polynomial_ad: {
        const GenFn<Sink> gen = [&node, depth, &ctx](Sink& snk, double sg) {
            emit_spec(snk, node.generator(), sg, depth - 1, ctx);
        };
        const EigSys& a_eig = cached_eig(ctx, &node, node.known().entries());
        emit_polynomial_ad<Sink>(sink, node.poly(), gen, a_eig,
                                 node.scale() * sigma, ctx.budgets->k,
                                 ctx.budgets->m);
        return;
    }
    default:
        throw DimensionError("emit_spec: unreachable");
    }
}

void check_budgets(const Budgets& budgets) {
    if (budgets.m < 1 || budgets.k < 1 || budgets.depth < 0 ||
        budgets.segment_cap < 1) {
        throw DimensionError("budgets: need m, k, cap >= 1 and depth >= 0");
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Public sequence builders
// ---------------------------------------------------------------------------

GateSequence reversal_sequence(double t, int m, const ReversalGroup& group) {
    GateSequence seq(group.dim());
    EmitSink sink{&seq};
    emit_reversal(sink, t, m, group);
    return seq;
}

GateSequence signed_wait_sequence(double s, int m, const ReversalGroup& group) {
    GateSequence seq(group.dim());
    EmitSink sink{&seq};
    emit_signed_wait(sink, s, m, group);
    return seq;
}

namespace {

GenFn<EmitSink> wrap_generator(const SequenceGenerator& gen) {
    return [&gen](EmitSink& sink, double sigma) { sink.splice(gen(sigma)); };
}

} // namespace

GateSequence commutator_sequence(const SequenceGenerator& inner, const HermitianOp& a,
                                 double s, int m) {
    GateSequence seq(a.dim());
    EmitSink sink{&seq};
    const EigSys a_eig = make_eig(a.entries());
    const GenFn<EmitSink> left = wrap_generator(inner);
    const GenFn<EmitSink> right = [&a_eig](EmitSink& snk, double sigma) {
        if (sigma == 0.0) return;
        snk.apply_lazy([&a_eig, sigma] { return gate_from_eig(a_eig, sigma); });
    };
    emit_commutator<EmitSink>(sink, left, right, s, m);
    return seq;
}

GateSequence commutator_sequence(const SequenceGenerator& left,
                                 const SequenceGenerator& right, double s, int m) {
    GateSequence probe = left(0.0);
    GateSequence seq(probe.dim());
    EmitSink sink{&seq};
    const GenFn<EmitSink> l = wrap_generator(left);
    const GenFn<EmitSink> r = wrap_generator(right);
    emit_commutator<EmitSink>(sink, l, r, s, m);
    return seq;
}

GateSequence linear_map_sequence(const ConjugationDecomposition& decomp,
                                 const SequenceGenerator& inner, double s, int k) {
    GateSequence seq(decomp.dim);
    EmitSink sink{&seq};
    const GenFn<EmitSink> wrapped = wrap_generator(inner);
    emit_linear_map<EmitSink>(sink, decomp, wrapped, s, k);
    return seq;
}

GateSequence polynomial_ad_sequence(const std::vector<double>& poly,
                                    const SequenceGenerator& generator,
                                    const HermitianOp& a, double s, int k, int m) {
    GateSequence seq(a.dim());
    EmitSink sink{&seq};
    const EigSys a_eig = make_eig(a.entries());
    const GenFn<EmitSink> gen = wrap_generator(generator);
    emit_polynomial_ad<EmitSink>(sink, poly, gen, a_eig, s, k, m);
    return seq;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

/// Wait gates share the hypothesis eigensystem; distinct durations are cached
/// by bit pattern (a long sequence uses a handful of them).
class WaitGates {
public:
    explicit WaitGates(const HermitianOp& h) : sys_(make_eig(h.entries())) {}

    const Matrix& gate(double t) {
        const std::uint64_t key = std::bit_cast<std::uint64_t>(t);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, gate_from_eig(sys_, t)).first;
        }
        return it->second;
    }

private:
    EigSys sys_;
    std::unordered_map<std::uint64_t, Matrix> cache_;
};

} // namespace

namespace {

/// Rounding drift allowed for a product of `segments` validated gates before
/// the result counts as genuinely non-unitary rather than noisy.
double drift_allowance(std::size_t segments, double base_tol) {
    return base_tol + 1e-14 * static_cast<double>(segments);
}

} // namespace

UnitaryOp evaluate(const GateSequence& seq, const HermitianOp& h) {
    if (seq.dim() != h.dim()) {
        throw DimensionError("evaluate: dimension mismatch");
    }
    const Index n = h.dim();
    const int ni = static_cast<int>(n);
    WaitGates waits(h);
    const kernels::Dispatch& kern = kernels::active();

    Matrix acc = Matrix::Identity(n, n);
    Matrix tmp(n, n);
    for (const GateSequence::Segment& seg : seq.segments()) {
        const Matrix& u = seg.op == GateSequence::Op::apply
                              ? seq.gate(seg.gate)
                              : waits.gate(seg.duration);
        kern.matmul(u.data(), acc.data(), tmp.data(), ni);
        acc.swap(tmp);
    }

    // Million-segment products drift at rounding scale; project that noise
    // away, but keep throwing on anything worse than accumulated round-off.
    const double deviation =
        max_abs(Matrix(acc.adjoint() * acc - Matrix::Identity(n, n)));
    const double tol = numeric_config().unitary_tol;
    if (deviation > tol) {
        if (deviation > drift_allowance(seq.segments().size(), tol)) {
            throw NotUnitary("evaluate: sequence product left the unitary group");
        }
        Eigen::JacobiSVD<Matrix> svd(acc,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
        acc = svd.matrixU() * svd.matrixV().adjoint();
    }
    return UnitaryOp(std::move(acc));
}

Vector evaluate_state(const GateSequence& seq, const HermitianOp& h, const Vector& psi) {
    if (seq.dim() != h.dim() || psi.size() != h.dim()) {
        throw DimensionError("evaluate_state: dimension mismatch");
    }
    if (std::abs(psi.norm() - 1.0) > numeric_config().state_norm_tol) {
        throw DimensionError("evaluate_state: state is not normalized");
    }
    const Index n = h.dim();
    const int ni = static_cast<int>(n);
    WaitGates waits(h);
    const kernels::Dispatch& kern = kernels::active();

    Vector cur = psi;
    Vector tmp(n);
    for (const GateSequence::Segment& seg : seq.segments()) {
        const Matrix& u = seg.op == GateSequence::Op::apply
                              ? seq.gate(seg.gate)
                              : waits.gate(seg.duration);
        kern.matvec(u.data(), cur.data(), tmp.data(), ni);
        cur.swap(tmp);
    }
    const double drift = std::abs(cur.norm() - 1.0);
    const double tol = numeric_config().state_norm_tol;
    if (drift > tol) {
        if (drift > drift_allowance(seq.segments().size(), tol)) {
            throw DimensionError("evaluate_state: norm drifted beyond tolerance");
        }
        cur /= cur.norm();  // round-off only; the state stays a state
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Materialization
// ---------------------------------------------------------------------------

GateSequence materialize(const GadgetSpec& spec, const HermitianOp& h,
                         const Budgets& budgets, const ReversalGroup& group) {
    check_budgets(budgets);
    if (h.dim() != group.dim()) {
        throw DimensionError("materialize: hypothesis/group dimension mismatch");
    }

    const Cost estimate = estimate_cost(spec, budgets, group);
    const long segments = sat_add(estimate.applies, estimate.waits);
    if (segments > budgets.segment_cap) {
        throw BudgetTooSmall("materialize: estimated " + std::to_string(segments) +
                             " segments exceed the cap of " +
                             std::to_string(budgets.segment_cap));
    }

    GateSequence seq(h.dim());
    SpecContext ctx;
    ctx.h = &h;
    ctx.budgets = &budgets;
    ctx.group = &group;
    EmitSink sink{&seq};
    emit_spec(sink, spec, 1.0, budgets.depth, ctx);
    return seq;
}

Cost estimate_cost(const GadgetSpec& spec, const Budgets& budgets,
                   const ReversalGroup& group) {
    check_budgets(budgets);
    SpecContext ctx;
    ctx.budgets = &budgets;
    ctx.group = &group;
    CountSink sink;
    emit_spec(sink, spec, 1.0, budgets.depth, ctx);
    return sink.cost;
}

} // namespace hamdist
