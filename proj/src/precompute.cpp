#include "hamdist/precompute.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <utility>

namespace hamdist {

// ---------------------------------------------------------------------------
// DiscriminationInstance
// ---------------------------------------------------------------------------

DiscriminationInstance::DiscriminationInstance(Index n,
                                               std::vector<HermitianOp> hamiltonians)
    : n_(n), hamiltonians_(std::move(hamiltonians)) {
    if (n_ < 2) {
        throw DimensionError("DiscriminationInstance: need n >= 2, got " +
                             std::to_string(n_));
    }
    if (static_cast<Index>(hamiltonians_.size()) != n_) {
        throw DimensionError("DiscriminationInstance: need exactly n = " +
                             std::to_string(n_) + " hypotheses, got " +
                             std::to_string(hamiltonians_.size()));
    }
    traceless_.reserve(hamiltonians_.size());
    for (const HermitianOp& h : hamiltonians_) {
        if (h.dim() != n_) {
            throw DimensionError("DiscriminationInstance: hypothesis dimension " +
                                 std::to_string(h.dim()) + " != n");
        }
        traceless_.push_back(traceless_part(h));
    }
    for (std::size_t i = 0; i < traceless_.size(); ++i) {
        for (std::size_t j = i + 1; j < traceless_.size(); ++j) {
            const double dist = max_abs(
                Matrix(traceless_[i].entries() - traceless_[j].entries()));
            if (dist < numeric_config().distinct_tol) {
                throw NotDistinct("DiscriminationInstance: hypotheses " +
                                  std::to_string(i) + " and " + std::to_string(j) +
                                  " differ only by an additive constant");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Steps
// ---------------------------------------------------------------------------

HermitianOp choose_g(Index n) {
    if (n < 2) {
        throw DimensionError("choose_g: need n >= 2");
    }
    Matrix g = -Matrix::Identity(n, n);
    g(0, 0) = static_cast<double>(n - 1);
    return HermitianOp(std::move(g));
}

std::vector<double> lambdas_from_functional(const HermitianOp& f,
                                            const DiscriminationInstance& inst) {
    if (f.dim() != inst.dim()) {
        throw DimensionError("lambdas_from_functional: dimension mismatch");
    }
    std::vector<double> lambdas;
    lambdas.reserve(static_cast<std::size_t>(inst.dim()));
    for (const HermitianOp& h : inst.traceless_parts()) {
        lambdas.push_back((f.entries() * h.entries()).trace().real());
    }
    return lambdas;
}

std::vector<SignPair> find_sign_pairs(const DiscriminationInstance& inst) {
    std::vector<SignPair> pairs;
    const auto& parts = inst.traceless_parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            const double dev =
                max_abs(Matrix(parts[i].entries() + parts[j].entries()));
            if (dev <= numeric_config().sign_pair_tol) {
                pairs.push_back({static_cast<Index>(i), static_cast<Index>(j)});
            }
        }
    }
    return pairs;
}

namespace {

bool in_some_pair(Index j, const std::vector<SignPair>& pairs) {
    return std::any_of(pairs.begin(), pairs.end(), [j](const SignPair& p) {
        return p.i == j || p.j == j;
    });
}

/// Accept λ when every value is nonzero and magnitudes are pairwise separated,
/// relative to the largest magnitude — exempting the forced sign pairs.
bool lambdas_acceptable(const std::vector<double>& lambdas,
                        const std::vector<SignPair>& pairs) {
    const double tol = numeric_config().lambda_spread_tol;
    double top = 0.0;
    for (double l : lambdas) top = std::max(top, std::abs(l));
    if (top <= 0.0) return false;

    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (std::abs(lambdas[i]) < tol * top) return false;
        for (std::size_t j = i + 1; j < lambdas.size(); ++j) {
            const bool paired = std::any_of(
                pairs.begin(), pairs.end(), [&](const SignPair& p) {
                    return p.i == static_cast<Index>(i) && p.j == static_cast<Index>(j);
                });
            if (paired) continue;
            if (std::abs(std::abs(lambdas[i]) - std::abs(lambdas[j])) < tol * top) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

LambdaResult find_lambdas(const DiscriminationInstance& inst, std::uint64_t seed) {
    const std::vector<SignPair> pairs = find_sign_pairs(inst);
    Rng rng(seed);
    constexpr int kResamples = 64;
    for (int attempt = 0; attempt < kResamples; ++attempt) {
        HermitianOp f = rng.traceless_unit(inst.dim());
        std::vector<double> lambdas = lambdas_from_functional(f, inst);
        if (!lambdas_acceptable(lambdas, pairs)) continue;

        // Rescale so max |λ_j| = 1: keeps the interpolation nodes λ_jΔ within
        // [−n, n] regardless of how large the instance entries are.
        double top = 0.0;
        for (double l : lambdas) top = std::max(top, std::abs(l));
        f = HermitianOp(f.entries() / top);
        lambdas = lambdas_from_functional(f, inst);
        return LambdaResult{std::move(f), std::move(lambdas), pairs};
    }
    throw FunctionalCollision(
        "find_lambdas: no functional separated the hypotheses after " +
        std::to_string(kResamples) + " draws");
}

std::vector<long> assign_targets(const std::vector<double>& lambdas,
                                 const std::vector<SignPair>& sign_pairs,
                                 Index n) {
    if (static_cast<Index>(lambdas.size()) != n) {
        throw DimensionError("assign_targets: need one lambda per hypothesis");
    }
    const auto residue = [n](long m) {
        return static_cast<Index>(((m % n) + n) % n);
    };

    std::vector<long> targets(lambdas.size(), 0);
    std::set<Index> used;

    // Sign pairs first: each consumes the residue pair {m, −m} mod n, which
    // must be two distinct unused residues. Scanning m = 1..n covers every
    // residue pair class.
    for (const SignPair& p : sign_pairs) {
        bool placed = false;
        for (long m = 1; m <= static_cast<long>(n); ++m) {
            const Index rp = residue(m);
            const Index rm = residue(-m);
            if (rp == rm || used.count(rp) || used.count(rm)) continue;
            targets[static_cast<std::size_t>(p.i)] = m;
            targets[static_cast<std::size_t>(p.j)] = -m;
            used.insert(rp);
            used.insert(rm);
            placed = true;
            break;
        }
        if (!placed) {
            throw InfeasibleTargets(
                "assign_targets: sign pair (" + std::to_string(p.i) + ", " +
                std::to_string(p.j) + ") admits no residue pair distinct mod " +
                std::to_string(n));
        }
    }

    // Unpaired hypotheses get the smallest positive exponents with fresh
    // residues; n residues for n hypotheses, so this always completes.
    for (std::size_t j = 0; j < targets.size(); ++j) {
        if (in_some_pair(static_cast<Index>(j), sign_pairs)) continue;
        for (long m = 1;; ++m) {
            if (!used.count(residue(m))) {
                targets[j] = m;
                used.insert(residue(m));
                break;
            }
        }
    }
    return targets;
}

std::vector<double> interpolate_odd_polynomial(const std::vector<double>& lambdas,
                                               const std::vector<long>& targets,
                                               double delta) {
    if (lambdas.size() != targets.size() || lambdas.empty()) {
        throw DimensionError("interpolate_odd_polynomial: size mismatch");
    }

    // One interpolation condition q(λ_jΔ) = m_jΔ per hypothesis, deduplicated:
    // a sign pair contributes the same condition twice (q is odd).
    std::vector<std::pair<double, double>> conditions;
    double top = 0.0;
    for (double l : lambdas) top = std::max(top, std::abs(l) * std::abs(delta));
    const double tol = 1e-9 * std::max(top, 1.0);

    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const double x = lambdas[j] * delta;
        const double y = static_cast<double>(targets[j]) * delta;
        bool subsumed = false;
        for (const auto& [xk, yk] : conditions) {
            const bool same = std::abs(x - xk) <= tol;
            const bool mirrored = std::abs(x + xk) <= tol;
            if (!same && !mirrored) continue;
            const double want = same ? yk : -yk;
            if (std::abs(y - want) > tol) {
                throw SingularInterpolation(
                    "interpolate_odd_polynomial: coincident |λ|Δ nodes with "
                    "conflicting targets at hypothesis " +
                    std::to_string(j));
            }
            subsumed = true;
            break;
        }
        if (!subsumed) conditions.emplace_back(x, y);
    }

    // Odd Vandermonde system: columns x, x³, …, x^{2K−1}.
    const Index k = static_cast<Index>(conditions.size());
    RealMatrix v(k, k);
    RealVector rhs(k);
    for (Index i = 0; i < k; ++i) {
        const double x = conditions[static_cast<std::size_t>(i)].first;
        const double x2 = x * x;
        double power = x;
        for (Index r = 0; r < k; ++r) {
            v(i, r) = power;
            power *= x2;
        }
        rhs(i) = conditions[static_cast<std::size_t>(i)].second;
    }

    Eigen::FullPivLU<RealMatrix> lu(v);
    if (lu.rank() < k) {
        throw SingularInterpolation(
            "interpolate_odd_polynomial: odd Vandermonde system is rank-deficient");
    }
    const RealVector q = lu.solve(rhs);
    const double residual = max_abs(RealMatrix(v * q - rhs));
    if (!(residual <= 1e-6 * std::max(std::abs(delta), 1.0))) {
        throw SingularInterpolation(
            "interpolate_odd_polynomial: solve residual " + std::to_string(residual));
    }

    // q matches p on the imaginary axis: p(ix) = i·(a_1x − a_3x³ + a_5x⁵ − …),
    // so a_{2r+1} = (−1)^r q_{2r+1}.
    std::vector<double> odd(static_cast<std::size_t>(k));
    for (Index r = 0; r < k; ++r) {
        odd[static_cast<std::size_t>(r)] = (r % 2 == 0 ? q(r) : -q(r));
    }
    return odd;
}

std::vector<double> dense_from_odd(const std::vector<double>& odd) {
    std::vector<double> dense;
    dense.reserve(odd.size() * 2);
    for (std::size_t r = 0; r < odd.size(); ++r) {
        dense.push_back(odd[r]);
        if (r + 1 < odd.size()) dense.push_back(0.0);
    }
    return dense;
}

std::pair<HermitianOp, HermitianOp> build_a_c(const HermitianOp& g,
                                              const AlgebraBasis& basis) {
    if (g.dim() != basis.dim()) {
        throw DimensionError("build_a_c: dimension mismatch");
    }
    const HermitianOp& a = basis.element(basis.x_index(0, 1));
    HermitianOp c = ad_action(g, a);
    return {a, std::move(c)};
}

HermitianOp d_prime(Index n) {
    if (n < 2) {
        throw DimensionError("d_prime: need n >= 2");
    }
    Matrix d = Matrix::Zero(n, n);
    const double shift = 0.5 * static_cast<double>(n + 1);
    for (Index i = 0; i < n; ++i) {
        d(i, i) = static_cast<double>(i + 1) - shift;
    }
    return HermitianOp(std::move(d));
}

SuperOp build_l(const HermitianOp& f, const HermitianOp& g,
                const AlgebraBasis& basis) {
    const Matrix fm = f.entries();
    const Matrix gm = g.entries();
    return superop_from_map(basis, [fm, gm](const Matrix& b) {
        return Matrix((fm * b).trace().real() * gm);
    });
}

SuperOp build_ltilde(const HermitianOp& c, Index n, const AlgebraBasis& basis) {
    const double cc = hs_inner(c.entries(), c.entries()).real();
    if (cc <= numeric_config().distinct_tol) {
        throw ZeroC("build_ltilde: C vanishes");
    }
    const Matrix cm = c.entries();
    const Matrix dm = d_prime(n).entries();
    const double scale = 2.0 * std::numbers::pi / static_cast<double>(n) / cc;
    return superop_from_map(basis, [cm, dm, scale](const Matrix& b) {
        return Matrix((cm.adjoint() * b).trace().real() * scale * dm);
    });
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

PrecomputePlan make_plan(const DiscriminationInstance& inst, std::uint64_t seed) {
    const Index n = inst.dim();
    const AlgebraBasis basis = AlgebraBasis::build(n);

    HermitianOp g = choose_g(n);
    LambdaResult lr = find_lambdas(inst, derive_seed(seed, 0));
    std::vector<long> targets = assign_targets(lr.lambdas, lr.sign_pairs, n);
    std::vector<double> poly_odd = interpolate_odd_polynomial(
        lr.lambdas, targets, static_cast<double>(n));

    auto [a, c] = build_a_c(g, basis);
    HermitianOp dp = d_prime(n);

    const SuperOp l = build_l(lr.f, g, basis);
    ConjugationDecomposition l_decomp =
        decompose_into_conjugations(l, basis, derive_seed(seed, 1));
    const SuperOp ltilde = build_ltilde(c, n, basis);
    ConjugationDecomposition ltilde_decomp =
        decompose_into_conjugations(ltilde, basis, derive_seed(seed, 2));

    PrecomputePlan plan{
        n,
        inst,
        std::move(g),
        std::move(lr.f),
        std::move(lr.lambdas),
        std::move(lr.sign_pairs),
        std::move(targets),
        std::move(poly_odd),
        std::move(a),
        std::move(c),
        std::move(dp),
        std::move(l_decomp),
        std::move(ltilde_decomp),
        seed,
        Rng::kName,
    };
    verify_plan(plan);
    return plan;
}

double plan_verification_error(const PrecomputePlan& plan) {
    const AlgebraBasis basis = AlgebraBasis::build(plan.n);
    const std::vector<double> dense = dense_from_odd(plan.poly_odd);
    const double angle = 2.0 * std::numbers::pi / static_cast<double>(plan.n);

    double worst = 0.0;
    for (Index j = 0; j < plan.n; ++j) {
        // The executed chain: decomposed ℒ on the full hypothesis (its
        // identity component dies inside Ad), the interpolated polynomial of
        // Ad, then decomposed Ã.
        const HermitianOp lh = HermitianOp(
            plan.l_decomp.apply_matrix(plan.instance.hamiltonian(j).entries()));
        const SuperOp poly_ad = polynomial_of(dense, ad_superop(lh, basis));
        const HermitianOp b = apply(poly_ad, plan.a, basis);
        const Matrix out = plan.ltilde_decomp.apply_matrix(b.entries());
        const Matrix target = static_cast<double>(plan.targets[static_cast<std::size_t>(j)]) *
                              angle * plan.d_prime.entries();
        worst = std::max(worst, max_abs(Matrix(out - target)));
    }
    return worst;
}

void verify_plan(const PrecomputePlan& plan) {
    const double err = plan_verification_error(plan);
    if (!(err <= numeric_config().plan_tol)) {
        throw PlanVerificationFailed(
            "verify_plan: identity deviation " + std::to_string(err) +
            " exceeds tolerance");
    }
}

} // namespace hamdist
