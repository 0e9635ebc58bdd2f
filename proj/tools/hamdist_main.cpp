// hamdist_main.cpp — Command-line front end: build instances and plans, run
// discrimination simulations and budget sweeps, verify invariants

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hamdist/precompute.hpp"
#include "hamdist/protocol.hpp"
#include "hamdist/serialize.hpp"

namespace {

using namespace hamdist;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
    } else {
        write_file_atomic(out_path, text);
    }
}

// ---------------------------------------------------------------------------
// example
// ---------------------------------------------------------------------------

int cmd_example(Index n, const std::string& out_path) {
    const DiscriminationInstance inst = diagonal_example(n);
    const SimulationResult result = run_diagonal_example(n);

    Json j;
    j["instance"] = instance_to_json(inst);
    j["result"] = result_to_json(result);
    emit(j.dump(2), out_path);

    return std::abs(result.success - 1.0) <= 1e-10 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// plan
// ---------------------------------------------------------------------------

int cmd_plan(const std::string& in_path, std::uint64_t seed,
             const std::string& out_path) {
    const DiscriminationInstance inst =
        instance_from_json(load_json_file(in_path));
    const PrecomputePlan plan = make_plan(inst, seed);
    emit(plan_to_json(plan).dump(2), out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

std::vector<Budgets> expand_sweep(const Budgets& base, const std::string& sweep) {
    const auto eq = sweep.find('=');
    if (eq == std::string::npos) {
        throw ParseError("--sweep expects key=v1,v2,… with key m, k, or mk");
    }
    const std::string key = sweep.substr(0, eq);
    if (key != "m" && key != "k" && key != "mk") {
        throw ParseError("--sweep key must be m, k, or mk, got '" + key + "'");
    }
    std::vector<Budgets> out;
    std::string rest = sweep.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string tok =
            rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                        : comma - pos);
        int value = 0;
        try {
            value = std::stoi(tok);
        } catch (const std::exception&) {
            throw ParseError("--sweep: '" + tok + "' is not an integer");
        }
        if (value < 1) {
            throw ParseError("--sweep: budget values must be >= 1");
        }
        Budgets b = base;
        if (key == "m" || key == "mk") b.m = value;
        if (key == "k" || key == "mk") b.k = value;
        out.push_back(b);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int cmd_simulate(const std::string& plan_path, const std::string& mode_name,
                 const Budgets& budgets, const std::string& sweep,
                 const std::string& out_path, const std::string& csv_path) {
    const PrecomputePlan plan = plan_from_json(load_json_file(plan_path));
    const Mode mode = mode_from_string(mode_name);

    if (sweep.empty()) {
        const SimulationResult result = run_discrimination(plan, mode, budgets);
        emit(result_to_json(result).dump(2), out_path);
        if (!csv_path.empty()) write_file_atomic(csv_path, result_to_csv(result));
        return 0;
    }

    std::vector<SimulationResult> results;
    for (const Budgets& b : expand_sweep(budgets, sweep)) {
        results.push_back(run_discrimination(plan, mode, b));
    }
    Json j;
    j["format"] = "hamdist-sweep-v1";
    Json blocks = Json::array();
    for (const SimulationResult& r : results) blocks.push_back(result_to_json(r));
    j["results"] = std::move(blocks);
    emit(j.dump(2), out_path);
    if (!csv_path.empty()) write_file_atomic(csv_path, sweep_to_csv(results));
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct CheckRow {
    std::string name;
    bool pass;
    std::string detail;
};

/// Max-abs deviation of p(Ad(ℒ(H_j)))(A) from m_j·C over all hypotheses,
/// using the exact rank-one map rebuilt from the plan's F and G.
double eq1_deviation(const PrecomputePlan& plan) {
    const AlgebraBasis basis = AlgebraBasis::build(plan.n);
    const SuperOp l = build_l(plan.f, plan.g, basis);
    const std::vector<double> dense = dense_from_odd(plan.poly_odd);
    double worst = 0.0;
    for (Index j = 0; j < plan.n; ++j) {
        const HermitianOp lh = apply(l, plan.instance.traceless_part_of(j), basis);
        const SuperOp p = polynomial_of(dense, ad_superop(lh, basis));
        const HermitianOp out = apply(p, plan.a, basis);
        const double mj = static_cast<double>(plan.targets[static_cast<std::size_t>(j)]);
        worst = std::max(worst, max_abs(Matrix(out.entries() - mj * plan.c.entries())));
    }
    return worst;
}

DiscriminationInstance pauli_zx_instance() {
    Matrix sz(2, 2), sx(2, 2);
    sz << 1.0, 0.0, 0.0, -1.0;
    sx << 0.0, 1.0, 1.0, 0.0;
    std::vector<HermitianOp> hams;
    hams.emplace_back(sz);
    hams.emplace_back(sx);
    return DiscriminationInstance(2, std::move(hams));
}

CheckRow check_schur(Index n) {
    const ReversalGroup group = ReversalGroup::build(n);
    Rng rng(derive_seed(7, static_cast<std::uint64_t>(n)));
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const HermitianOp h = rng.hermitian(n);
        const Matrix avg = group.average(h.entries());
        const Matrix expected = (h.entries().trace() / static_cast<double>(n)) *
                                Matrix::Identity(n, n);
        worst = std::max(worst, max_abs(Matrix(avg - expected)));
    }
    return {"schur-averaging-n" + std::to_string(n), worst <= 1e-12,
            "max deviation " + std::to_string(worst)};
}

CheckRow check_reversal(Index n) {
    const ReversalGroup group = ReversalGroup::build(n);
    Rng rng(derive_seed(11, static_cast<std::uint64_t>(n)));
    bool pass = true;
    std::string detail;
    for (int trial = 0; trial < 2 && pass; ++trial) {
        const HermitianOp h = rng.traceless_unit(n);
        double prev = -1.0;
        for (int m : {16, 32}) {
            const UnitaryOp u = evaluate(reversal_sequence(1.0, m, group), h);
            const double err = operator_norm(u.entries() - expm_i(h, -1.0).entries());
            if (prev >= 0.0) {
                const double ratio = prev / err;
                if (ratio < 1.3 || ratio > 2.7) {
                    pass = false;
                    detail = "halving ratio " + std::to_string(ratio);
                }
            }
            if (m == 32 && err > 0.1) {
                pass = false;
                detail = "error " + std::to_string(err) + " at m=32";
            }
            prev = err;
        }
    }
    return {"reversal-convergence-n" + std::to_string(n), pass,
            pass ? "O(1/m) rate observed" : detail};
}

CheckRow check_span(Index n, int count) {
    const AlgebraBasis basis = AlgebraBasis::build(n);
    const Index d = n * n - 1;
    Rng rng(derive_seed(13, static_cast<std::uint64_t>(n)));
    double worst = 0.0;
    for (int trial = 0; trial < count; ++trial) {
        RealMatrix m(d, d);
        for (Index r = 0; r < d; ++r) {
            for (Index c = 0; c < d; ++c) m(r, c) = rng.gaussian();
        }
        const SuperOp target(n, std::move(m));
        const ConjugationDecomposition decomp = decompose_into_conjugations(
            target, basis, derive_seed(17, static_cast<std::uint64_t>(trial)));
        worst = std::max(worst, decomp.residual);
    }
    return {"decomposition-span-n" + std::to_string(n), worst <= 1e-8,
            "max residual " + std::to_string(worst)};
}

CheckRow check_plan_identities(const DiscriminationInstance& inst, std::uint64_t seed,
                               const std::string& label) {
    const PrecomputePlan plan = make_plan(inst, seed);
    const double dev = eq1_deviation(plan);
    const SimulationResult result =
        run_discrimination(plan, Mode::ideal, Budgets{});
    const bool pass = dev <= 1e-8 && result.success >= 1.0 - 1e-6;
    return {label, pass,
            "eq1 deviation " + std::to_string(dev) + ", success " +
                std::to_string(result.success)};
}

int cmd_verify(const std::string& level, const std::string& plan_path) {
    std::vector<CheckRow> rows;

    if (!plan_path.empty()) {
        const PrecomputePlan plan = plan_from_json(load_json_file(plan_path));
        verify_plan(plan);  // throws PlanVerificationFailed on tampering
        rows.push_back({"plan-file-verification", true,
                        "error " + std::to_string(plan_verification_error(plan))});
        const double dev = eq1_deviation(plan);
        rows.push_back({"plan-file-eq1-identity", dev <= 1e-8,
                        "deviation " + std::to_string(dev)});
    } else {
        rows.push_back(check_schur(2));
        rows.push_back(check_reversal(2));
        rows.push_back(check_span(2, 5));
        rows.push_back(check_plan_identities(pauli_zx_instance(), 1, "plan-identities-n2"));
        if (level == "full") {
            rows.push_back(check_schur(3));
            rows.push_back(check_reversal(3));
            rows.push_back(check_span(3, 10));
            Rng rng(derive_seed(23, 3));
            std::vector<HermitianOp> hams;
            for (int j = 0; j < 3; ++j) hams.push_back(rng.hermitian(3));
            rows.push_back(check_plan_identities(
                DiscriminationInstance(3, std::move(hams)), 2, "plan-identities-n3"));
        }
    }

    bool all_pass = true;
    for (const CheckRow& row : rows) {
        std::cout << (row.pass ? "PASS" : "FAIL") << "  " << row.name << "  ("
                  << row.detail << ")\n";
        all_pass = all_pass && row.pass;
    }
    return all_pass ? 0 : 1;
}

} // namespace

// ---------------------------------------------------------------------------
// main
// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian-discrimination planner and simulator"};
    app.require_subcommand(1);

    // example
    auto* example = app.add_subcommand(
        "example", "Diagonal worked example with the one-wait protocol");
    Index example_n = 3;
    example->add_option("--n", example_n, "Hilbert space dimension")
        ->check(CLI::Range(static_cast<Index>(2), static_cast<Index>(64)));
    std::string example_out;
    example->add_option("--out", example_out, "Write the JSON report here");

    // plan
    auto* plan = app.add_subcommand("plan", "Build and verify a plan from an instance");
    std::string plan_in;
    plan->add_option("--in", plan_in, "Instance JSON file")->required();
    std::uint64_t seed = 0;
    plan->add_option("--seed", seed, "Master seed")->envname("HAMDIST_SEED");
    std::string plan_out;
    plan->add_option("--out", plan_out, "Write the plan JSON here");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run the discrimination protocol");
    std::string sim_plan;
    simulate->add_option("--plan", sim_plan, "Plan JSON file")->required();
    std::string sim_mode = "ideal";
    simulate->add_option("--mode", sim_mode, "ideal or trotter");
    Budgets budgets;
    simulate->add_option("--m", budgets.m, "Reversal/commutator repetitions");
    simulate->add_option("--k", budgets.k, "Linear-map repetitions");
    simulate->add_option("--depth", budgets.depth, "Materialized nesting depth");
    simulate->add_option("--cap", budgets.segment_cap, "Segment cap");
    std::string sweep;
    simulate->add_option("--sweep", sweep, "Budget sweep, e.g. m=8,16,32,64");
    std::string sim_out;
    simulate->add_option("--out", sim_out, "Write the result JSON here");
    std::string sim_csv;
    simulate->add_option("--csv", sim_csv, "Write the result CSV here");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the invariant suites");
    std::string level = "quick";
    verify->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    std::string verify_plan_path;
    verify->add_option("--plan", verify_plan_path, "Verify a stored plan file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2; --help exits 0
    }

    try {
        if (example->parsed()) return cmd_example(example_n, example_out);
        if (plan->parsed()) return cmd_plan(plan_in, seed, plan_out);
        if (simulate->parsed()) {
            return cmd_simulate(sim_plan, sim_mode, budgets, sweep, sim_out, sim_csv);
        }
        if (verify->parsed()) return cmd_verify(level, verify_plan_path);
    } catch (const hamdist::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
