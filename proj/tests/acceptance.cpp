// acceptance.cpp — end-to-end gate: one pass/fail line per numbered criterion
//
// Standalone binary (no test framework). Every tolerance and time budget is
// pinned below; the process exits nonzero if any criterion fails. --cli PATH
// points at the hamdist executable for the process-level checks.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hamdist/gadgets.hpp"
#include "hamdist/lie.hpp"
#include "hamdist/precompute.hpp"
#include "hamdist/protocol.hpp"
#include "hamdist/rng.hpp"
#include "hamdist/serialize.hpp"
#include "hamdist/superop.hpp"

using namespace hamdist;

namespace {

// --- pinned tolerances -------------------------------------------------------

constexpr double kGramTol = 1e-12;            // criterion 1
constexpr double kSchurTol = 1e-12;           // criterion 2
constexpr double kReversalErr = 0.1;          // criterion 3, m = 64
constexpr double kRatioLo = 1.5;              // criteria 3–4 halving band
constexpr double kRatioHi = 2.5;
constexpr double kCommutatorErr = 0.05;       // criterion 4, m = 32
constexpr double kResidualTol = 1e-8;         // criterion 5
constexpr double kIdentityTol = 1e-8;         // criterion 6
constexpr double kIdealSuccess = 1.0 - 1e-6;  // criterion 7
constexpr double kTrotterSuccess = 0.99;      // criterion 8

// --- pinned time budgets (seconds) -------------------------------------------

constexpr double kTime1 = 1.0;
constexpr double kTime2 = 5.0;
constexpr double kTime3 = 30.0;
constexpr double kTime4 = 30.0;
constexpr double kTime5 = 120.0;
constexpr double kTime6PerPlan = 1.0;
constexpr double kTime7 = 120.0;
constexpr double kTime8 = 300.0;

// --- plumbing ----------------------------------------------------------------

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string g_cli;  // path to the hamdist executable
bool g_all_pass = true;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(3);
    out << x;
    return out.str();
}

void report(int id, const Outcome& outcome) {
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion-" << id << ": "
              << outcome.detail << "\n";
    std::cout.flush();
    if (!outcome.pass) g_all_pass = false;
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

std::filesystem::path temp_file(const std::string& stem) {
    return std::filesystem::temp_directory_path() /
           ("hamdist_acceptance_" + stem);
}

DiscriminationInstance zx_instance() {
    Matrix sz(2, 2), sx(2, 2);
    sz << 1.0, 0.0, 0.0, -1.0;
    sx << 0.0, 1.0, 1.0, 0.0;
    std::vector<HermitianOp> hams;
    hams.emplace_back(sz);
    hams.emplace_back(sx);
    return DiscriminationInstance(2, std::move(hams));
}

DiscriminationInstance random_instance(Index n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<HermitianOp> hams;
    for (Index j = 0; j < n; ++j) hams.push_back(rng.hermitian(n));
    return DiscriminationInstance(n, std::move(hams));
}

/// Worst deviation of p(Ad(ℒ(H_j)))(A) from m_j·C across hypotheses.
double identity_deviation(const PrecomputePlan& plan) {
    const AlgebraBasis basis = AlgebraBasis::build(plan.n);
    const SuperOp l = build_l(plan.f, plan.g, basis);
    const std::vector<double> dense = dense_from_odd(plan.poly_odd);
    double worst = 0.0;
    for (Index j = 0; j < plan.n; ++j) {
        const HermitianOp lh = apply(l, plan.instance.traceless_part_of(j), basis);
        const SuperOp p = polynomial_of(dense, ad_superop(lh, basis));
        const HermitianOp out = apply(p, plan.a, basis);
        const double mj =
            static_cast<double>(plan.targets[static_cast<std::size_t>(j)]);
        worst = std::max(worst,
                         max_abs(Matrix(out.entries() - mj * plan.c.entries())));
    }
    return worst;
}

// --- criterion 1: diagonal worked example ------------------------------------

Outcome criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_gram = 0.0;
    for (Index n = 2; n <= 5; ++n) {
        const SimulationResult r = run_diagonal_example(n);
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                if (i != j) worst_gram = std::max(worst_gram, std::abs(r.gram(i, j)));
            }
        }
    }
    bool cli_ok = true;
    for (int n = 2; n <= 5; ++n) {
        if (run_cli("example --n " + std::to_string(n)) != 0) cli_ok = false;
    }
    const double dt = seconds_since(t0);
    const bool pass = worst_gram <= kGramTol && cli_ok && dt < kTime1;
    return {pass, "gram off-diagonal max " + fmt(worst_gram) + " (tol 1e-12), "
                  "example command exit 0 for n=2..5: " +
                      std::string(cli_ok ? "yes" : "no") + ", " + fmt(dt) + " s"};
}

// --- criterion 2: Schur averaging --------------------------------------------

Outcome criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (Index n : {2, 3, 4}) {
        const ReversalGroup group = ReversalGroup::build(n);
        Rng rng(derive_seed(901, static_cast<std::uint64_t>(n)));
        for (int trial = 0; trial < 20; ++trial) {
            const HermitianOp h = rng.hermitian(n);
            const Matrix avg = group.average(h.entries());
            const Matrix want = (h.entries().trace() / static_cast<double>(n)) *
                                Matrix::Identity(n, n);
            worst = std::max(worst, max_abs(Matrix(avg - want)));
        }
    }
    const double dt = seconds_since(t0);
    const bool pass = worst <= kSchurTol && dt < kTime2;
    return {pass, "group average deviation max " + fmt(worst) +
                      " (tol 1e-12) over n=2,3,4 x 20 draws, " + fmt(dt) + " s"};
}

// --- criterion 3: time-reversal gadget ---------------------------------------

Outcome criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_err = 0.0;
    double ratio_lo = 1e300, ratio_hi = 0.0;
    for (Index n : {2, 3}) {
        const ReversalGroup group = ReversalGroup::build(n);
        Rng rng(derive_seed(902, static_cast<std::uint64_t>(n)));
        for (int trial = 0; trial < 10; ++trial) {
            const HermitianOp h = rng.traceless_unit(n);
            const Matrix target = expm_i(h, -1.0).entries();
            double err16 = 0.0, err32 = 0.0, err64 = 0.0;
            for (int m : {16, 32, 64}) {
                const GateSequence seq = reversal_sequence(1.0, m, group);
                const double err =
                    operator_norm(Matrix(evaluate(seq, h).entries() - target));
                (m == 16 ? err16 : m == 32 ? err32 : err64) = err;
            }
            worst_err = std::max(worst_err, err64);
            for (double r : {err16 / err32, err32 / err64}) {
                ratio_lo = std::min(ratio_lo, r);
                ratio_hi = std::max(ratio_hi, r);
            }
        }
    }
    const double dt = seconds_since(t0);
    const bool pass = worst_err <= kReversalErr && ratio_lo >= kRatioLo &&
                      ratio_hi <= kRatioHi && dt < kTime3;
    return {pass, "error(m=64) max " + fmt(worst_err) + " (tol 0.1), halving "
                  "ratios in [" +
                      fmt(ratio_lo) + ", " + fmt(ratio_hi) +
                      "] (band [1.5, 2.5]), " + fmt(dt) + " s"};
}

// --- criterion 4: commutator gadget -------------------------------------------

Outcome criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const HermitianOp hz([] {
        Matrix m(2, 2);
        m << 1.0, 0.0, 0.0, -1.0;
        return m;
    }());
    const HermitianOp hx([] {
        Matrix m(2, 2);
        m << 0.0, 1.0, 1.0, 0.0;
        return m;
    }());
    Matrix minus_two_y(2, 2);
    minus_two_y << Complex(0.0, 0.0), Complex(0.0, 2.0), Complex(0.0, -2.0),
        Complex(0.0, 0.0);
    const Matrix target = expm_i(HermitianOp(minus_two_y), 1.0).entries();

    // The unknown side waits for positive exponents; negative ones are exact
    // gates so only the product-formula error is measured.
    const SequenceGenerator inner = [&](double sigma) {
        GateSequence seq(2);
        if (sigma > 0.0) {
            seq.append_wait(sigma);
        } else if (sigma < 0.0) {
            seq.append_apply(expm_i(hz, sigma).entries());
        }
        return seq;
    };

    double err8 = 0.0, err16 = 0.0, err32 = 0.0;
    for (int m : {8, 16, 32}) {
        const GateSequence seq = commutator_sequence(inner, hx, 1.0, m);
        const double err =
            operator_norm(Matrix(evaluate(seq, hz).entries() - target));
        (m == 8 ? err8 : m == 16 ? err16 : err32) = err;
    }
    const double r1 = err8 / err16, r2 = err16 / err32;
    const double dt = seconds_since(t0);
    const bool pass = err32 <= kCommutatorErr && r1 >= kRatioLo &&
                      r1 <= kRatioHi && r2 >= kRatioLo && r2 <= kRatioHi &&
                      dt < kTime4;
    return {pass, "error(m=32) " + fmt(err32) + " (tol 0.05) vs e^{-2i sigma_y}, "
                  "ratios " +
                      fmt(r1) + ", " + fmt(r2) + " (band [1.5, 2.5]), " +
                      fmt(dt) + " s"};
}

// --- criterion 5: conjugation span --------------------------------------------

struct FiveCore {
    double max_residual = 0.0;
    double averaging_residual = 0.0;
    double spot_check = 0.0;  // independent reconstruction of one decomposition
    std::string artifact;     // serialized outputs for the determinism check
};

FiveCore run_five_core() {
    FiveCore core;
    for (Index n : {2, 3}) {
        const AlgebraBasis basis = AlgebraBasis::build(n);
        const Index d = n * n - 1;
        for (int trial = 0; trial < 50; ++trial) {
            Rng rng(derive_seed(903, static_cast<std::uint64_t>(n) * 1000 +
                                         static_cast<std::uint64_t>(trial)));
            RealMatrix m(d, d);
            for (Index j = 0; j < d; ++j) {
                for (Index i = 0; i < d; ++i) m(i, j) = rng.gaussian();
            }
            const SuperOp s(n, m);
            const ConjugationDecomposition dec = decompose_into_conjugations(
                s, basis,
                derive_seed(904, static_cast<std::uint64_t>(n) * 1000 +
                                     static_cast<std::uint64_t>(trial)));
            core.max_residual = std::max(core.max_residual, dec.residual);
            if (trial == 0) {
                core.spot_check = std::max(
                    core.spot_check,
                    max_abs(RealMatrix(dec.reconstruct(basis).matrix() -
                                       s.matrix())));
            }
            core.artifact += decomposition_to_json(dec).dump();
            core.artifact += '\n';
        }

        // The explicit averaging map with P = |0><0|.
        Matrix p = Matrix::Zero(n, n);
        p(0, 0) = 1.0;
        const Matrix q = Matrix::Identity(n, n) - p;
        const SuperOp avg = superop_from_map(basis, [&](const Matrix& a) {
            return Matrix(q * a * q + (p * a * p).trace() * p);
        });
        const ConjugationDecomposition dec = decompose_into_conjugations(
            avg, basis, derive_seed(904, static_cast<std::uint64_t>(n)));
        core.averaging_residual = std::max(core.averaging_residual, dec.residual);
        core.artifact += decomposition_to_json(dec).dump();
        core.artifact += '\n';
    }
    return core;
}

Outcome criterion_5(FiveCore& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = run_five_core();
    const double dt = seconds_since(t0);
    const double worst =
        std::max({out.max_residual, out.averaging_residual, out.spot_check});
    const bool pass = worst <= kResidualTol && dt < kTime5;
    return {pass, "50+50 random superoperators residual max " +
                      fmt(out.max_residual) + ", averaging map residual " +
                      fmt(out.averaging_residual) + " (tol 1e-8), " + fmt(dt) +
                      " s"};
}

// --- criterion 7 core (plans shared with criterion 6) -------------------------

struct SevenCore {
    std::vector<PrecomputePlan> plans;
    double min_success = 1.0;
    std::string artifact;
    double build_seconds = 0.0;
};

SevenCore run_seven_core() {
    SevenCore core;
    const auto t0 = std::chrono::steady_clock::now();
    core.plans.push_back(make_plan(zx_instance(), 1));
    for (int trial = 0; trial < 20; ++trial) {
        const DiscriminationInstance inst = random_instance(
            2, derive_seed(905, static_cast<std::uint64_t>(trial)));
        core.plans.push_back(
            make_plan(inst, derive_seed(907, static_cast<std::uint64_t>(trial))));
    }
    for (int trial = 0; trial < 10; ++trial) {
        const DiscriminationInstance inst = random_instance(
            3, derive_seed(906, static_cast<std::uint64_t>(trial)));
        core.plans.push_back(
            make_plan(inst, derive_seed(908, static_cast<std::uint64_t>(trial))));
    }
    for (const PrecomputePlan& plan : core.plans) {
        verify_plan(plan);  // throws PlanVerificationFailed if not verified
        const SimulationResult r = run_discrimination(plan, Mode::ideal, Budgets{});
        core.min_success = std::min(core.min_success, r.success);
        core.artifact += plan_to_json(plan).dump();
        core.artifact += '\n';
        core.artifact += result_to_json(r).dump();
        core.artifact += '\n';
    }
    core.build_seconds = seconds_since(t0);
    return core;
}

// --- criterion 6: the defining identity on every verified plan ----------------

Outcome criterion_6(const SevenCore& seven) {
    double worst_dev = 0.0;
    double worst_seconds = 0.0;
    for (const PrecomputePlan& plan : seven.plans) {
        const auto t0 = std::chrono::steady_clock::now();
        worst_dev = std::max(worst_dev, identity_deviation(plan));
        worst_seconds = std::max(worst_seconds, seconds_since(t0));
    }
    const bool pass = worst_dev <= kIdentityTol && worst_seconds < kTime6PerPlan;
    return {pass, "p(Ad(L(H_j)))(A) = m_j C deviation max " + fmt(worst_dev) +
                      " (tol 1e-8) over " + std::to_string(seven.plans.size()) +
                      " plans, slowest plan " + fmt(worst_seconds) + " s"};
}

// --- criterion 7: end-to-end ideal mode ---------------------------------------

Outcome criterion_7(const SevenCore& seven) {
    const auto t0 = std::chrono::steady_clock::now();

    // Forced-infeasible pair through the CLI: {sigma_z, -sigma_z}.
    Matrix sz(2, 2);
    sz << 1.0, 0.0, 0.0, -1.0;
    std::vector<HermitianOp> hams;
    hams.emplace_back(sz);
    hams.emplace_back(Matrix(-sz));
    const DiscriminationInstance bad(2, std::move(hams));
    const auto inst_path = temp_file("infeasible.json");
    const auto plan_path = temp_file("infeasible_plan.json");
    write_file_atomic(inst_path.string(), instance_to_json(bad).dump(2));
    const int code = run_cli("plan --in " + inst_path.string() + " --out " +
                             plan_path.string());
    std::filesystem::remove(inst_path);
    std::filesystem::remove(plan_path);

    const double dt = seven.build_seconds + seconds_since(t0);
    const bool pass = seven.min_success >= kIdealSuccess &&
                      code == InfeasibleTargets("x").exit_code() && dt < kTime7;
    return {pass, "ideal success min " + fmt(seven.min_success) +
                      " (floor 1-1e-6) over 20 n=2 + 10 n=3 instances, "
                      "infeasible pair exit code " +
                      std::to_string(code) + " (want " +
                      std::to_string(InfeasibleTargets("x").exit_code()) + "), " +
                      fmt(dt) + " s"};
}

// --- criterion 8: trotter sweep ------------------------------------------------

struct EightCore {
    std::vector<double> successes;  // mk = 8, 16, 32, 64
    std::string artifact;
};

EightCore run_eight_core() {
    EightCore core;
    const PrecomputePlan plan = make_plan(zx_instance(), 1);
    std::vector<SimulationResult> results;
    for (int mk : {8, 16, 32, 64}) {
        Budgets budgets;
        budgets.m = mk;
        budgets.k = mk;
        const SimulationResult r = run_discrimination(plan, Mode::trotter, budgets);
        core.successes.push_back(r.success);
        core.artifact += result_to_json(r).dump();
        core.artifact += '\n';
        results.push_back(r);
    }
    core.artifact += sweep_to_csv(results);
    return core;
}

Outcome criterion_8(EightCore& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = run_eight_core();
    const double dt = seconds_since(t0);
    const std::vector<double>& s = out.successes;
    const bool pass = s.size() == 4 && s[3] >= kTrotterSuccess && s[2] >= s[0] &&
                      s[3] >= s[1] && dt < kTime8;
    std::string listing;
    for (std::size_t i = 0; i < s.size(); ++i) {
        listing += (i ? ", " : "") + fmt(s[i]);
    }
    return {pass, "trotter success over m=k=8,16,32,64: [" + listing +
                      "] (floor 0.99 at 64, 4x never below 1x), " + fmt(dt) +
                      " s"};
}

// --- criterion 9: determinism ---------------------------------------------------

Outcome criterion_9(const FiveCore& five, const SevenCore& seven,
                    const EightCore& eight) {
    const auto t0 = std::chrono::steady_clock::now();
    const FiveCore five2 = run_five_core();
    const SevenCore seven2 = run_seven_core();
    const EightCore eight2 = run_eight_core();
    const bool in_process = five2.artifact == five.artifact &&
                            seven2.artifact == seven.artifact &&
                            eight2.artifact == eight.artifact;

    // The CLI end of the same promise: identical invocations, identical bytes.
    const auto inst_path = temp_file("det_instance.json");
    const auto out1 = temp_file("det_plan_1.json");
    const auto out2 = temp_file("det_plan_2.json");
    write_file_atomic(inst_path.string(),
                      instance_to_json(zx_instance()).dump(2));
    bool cli_same = false;
    if (run_cli("plan --in " + inst_path.string() + " --seed 5 --out " +
                out1.string()) == 0 &&
        run_cli("plan --in " + inst_path.string() + " --seed 5 --out " +
                out2.string()) == 0) {
        std::ifstream f1(out1), f2(out2);
        const std::string s1((std::istreambuf_iterator<char>(f1)),
                             std::istreambuf_iterator<char>());
        const std::string s2((std::istreambuf_iterator<char>(f2)),
                             std::istreambuf_iterator<char>());
        cli_same = !s1.empty() && s1 == s2;
    }
    for (const auto& p : {inst_path, out1, out2}) std::filesystem::remove(p);

    const double dt = seconds_since(t0);
    const bool pass = in_process && cli_same;
    return {pass, std::string("rerun of criteria 5-8 byte-identical: ") +
                      (in_process ? "yes" : "no") +
                      ", repeated plan command byte-identical: " +
                      (cli_same ? "yes" : "no") + ", " + fmt(dt) + " s"};
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; i += 2) {
        if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];
    }
    if (g_cli.empty()) {
        std::cerr << "usage: hamdist_acceptance --cli /path/to/hamdist\n";
        return 2;
    }

    FiveCore five;
    SevenCore seven;
    EightCore eight;

    const auto guarded = [](int id, auto&& fn) {
        Outcome outcome;
        try {
            outcome = fn();
        } catch (const std::exception& e) {
            outcome = {false, std::string("unexpected exception: ") + e.what()};
        }
        report(id, outcome);
    };

    guarded(1, [] { return criterion_1(); });
    guarded(2, [] { return criterion_2(); });
    guarded(3, [] { return criterion_3(); });
    guarded(4, [] { return criterion_4(); });
    guarded(5, [&] { return criterion_5(five); });

    // Criteria 6 and 7 share one deterministic plan set.
    bool have_seven = false;
    try {
        seven = run_seven_core();
        have_seven = true;
    } catch (const std::exception& e) {
        const Outcome failed{false,
                             std::string("plan construction failed: ") + e.what()};
        report(6, failed);
        report(7, failed);
    }
    if (have_seven) {
        guarded(6, [&] { return criterion_6(seven); });
        guarded(7, [&] { return criterion_7(seven); });
    }

    guarded(8, [&] { return criterion_8(eight); });
    guarded(9, [&] { return criterion_9(five, seven, eight); });

    return g_all_pass ? 0 : 1;
}
