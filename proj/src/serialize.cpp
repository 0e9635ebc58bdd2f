#include "hamdist/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "hamdist/errors.hpp"

namespace hamdist {

namespace {

const Json& field(const Json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end()) {
        throw ParseError(std::string("missing field '") + name + "'");
    }
    return *it;
}

double number(const Json& j, const char* what) {
    if (!j.is_number()) {
        throw ParseError(std::string(what) + ": expected a number");
    }
    return j.get<double>();
}

long integer(const Json& j, const char* what) {
    if (!j.is_number_integer()) {
        throw ParseError(std::string(what) + ": expected an integer");
    }
    return j.get<long>();
}

/// Shortest round-trip decimal form, shared by the CSV writers.
std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace

// ---------------------------------------------------------------------------
// Matrices and vectors
// ---------------------------------------------------------------------------

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw ParseError("matrix: expected a non-empty list of rows");
    }
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const Json& row = j.at(static_cast<std::size_t>(r));
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw ParseError("matrix: ragged rows");
        }
        for (Index c = 0; c < cols; ++c) {
            const Json& entry = row.at(static_cast<std::size_t>(c));
            if (!entry.is_array() || entry.size() != 2) {
                throw ParseError("matrix: entries must be [re, im] pairs");
            }
            m(r, c) = Complex(number(entry.at(0), "matrix entry"),
                              number(entry.at(1), "matrix entry"));
        }
    }
    return m;
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back(Json::array({v(i).real(), v(i).imag()}));
    }
    return out;
}

Vector vector_from_json(const Json& j) {
    if (!j.is_array()) {
        throw ParseError("vector: expected a list of [re, im] pairs");
    }
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& entry = j.at(i);
        if (!entry.is_array() || entry.size() != 2) {
            throw ParseError("vector: entries must be [re, im] pairs");
        }
        v(static_cast<Index>(i)) = Complex(number(entry.at(0), "vector entry"),
                                           number(entry.at(1), "vector entry"));
    }
    return v;
}

Json real_matrix_to_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

Json instance_to_json(const DiscriminationInstance& inst) {
    Json j;
    j["n"] = inst.dim();
    Json hams = Json::array();
    for (const HermitianOp& h : inst.hamiltonians()) {
        hams.push_back(matrix_to_json(h.entries()));
    }
    j["hamiltonians"] = std::move(hams);
    return j;
}

DiscriminationInstance instance_from_json(const Json& j) {
    const Index n = integer(field(j, "n"), "n");
    const Json& hams = field(j, "hamiltonians");
    if (!hams.is_array()) {
        throw ParseError("hamiltonians: expected a list of matrices");
    }
    std::vector<HermitianOp> ops;
    ops.reserve(hams.size());
    for (const Json& h : hams) {
        ops.emplace_back(matrix_from_json(h));
    }
    return DiscriminationInstance(n, std::move(ops));
}

Json decomposition_to_json(const ConjugationDecomposition& d) {
    Json j;
    j["dim"] = d.dim;
    Json terms = Json::array();
    for (const ConjugationTerm& term : d.terms) {
        Json t;
        t["c"] = term.c;
        t["U"] = matrix_to_json(term.u.entries());
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    j["residual"] = d.residual;
    j["seed"] = d.seed;
    j["dict_size"] = d.dict_size;
    return j;
}

ConjugationDecomposition decomposition_from_json(const Json& j) {
    ConjugationDecomposition d;
    d.dim = integer(field(j, "dim"), "dim");
    const Json& terms = field(j, "terms");
    if (!terms.is_array()) {
        throw ParseError("terms: expected a list");
    }
    for (const Json& t : terms) {
        d.terms.push_back(ConjugationTerm{number(field(t, "c"), "c"),
                                          UnitaryOp(matrix_from_json(field(t, "U")))});
    }
    d.residual = number(field(j, "residual"), "residual");
    d.seed = j.value("seed", std::uint64_t{0});
    d.dict_size = j.value("dict_size", 0);
    return d;
}

Json plan_to_json(const PrecomputePlan& plan) {
    Json j;
    j["format"] = "hamdist-plan-v1";
    j["n"] = plan.n;
    j["seed"] = plan.seed;
    j["rng"] = plan.rng_name;
    j["instance"] = instance_to_json(plan.instance);
    j["g"] = matrix_to_json(plan.g.entries());
    j["f"] = matrix_to_json(plan.f.entries());
    j["lambdas"] = plan.lambdas;
    Json pairs = Json::array();
    for (const SignPair& p : plan.sign_pairs) {
        pairs.push_back(Json::array({p.i, p.j}));
    }
    j["sign_pairs"] = std::move(pairs);
    j["targets"] = plan.targets;
    j["poly_odd"] = plan.poly_odd;
    j["a"] = matrix_to_json(plan.a.entries());
    j["c"] = matrix_to_json(plan.c.entries());
    j["d_prime"] = matrix_to_json(plan.d_prime.entries());
    j["l_decomp"] = decomposition_to_json(plan.l_decomp);
    j["ltilde_decomp"] = decomposition_to_json(plan.ltilde_decomp);
    return j;
}

PrecomputePlan plan_from_json(const Json& j) {
    const std::string format = field(j, "format").get<std::string>();
    if (format != "hamdist-plan-v1") {
        throw ParseError("unsupported plan format '" + format + "'");
    }
    const Index n = integer(field(j, "n"), "n");

    std::vector<double> lambdas;
    for (const Json& v : field(j, "lambdas")) lambdas.push_back(number(v, "lambda"));
    std::vector<SignPair> sign_pairs;
    for (const Json& p : field(j, "sign_pairs")) {
        if (!p.is_array() || p.size() != 2) {
            throw ParseError("sign_pairs: expected [i, j] pairs");
        }
        sign_pairs.push_back(SignPair{integer(p.at(0), "sign pair"),
                                      integer(p.at(1), "sign pair")});
    }
    std::vector<long> targets;
    for (const Json& t : field(j, "targets")) targets.push_back(integer(t, "target"));
    std::vector<double> poly_odd;
    for (const Json& c : field(j, "poly_odd")) poly_odd.push_back(number(c, "poly_odd"));

    return PrecomputePlan{
        n,
        instance_from_json(field(j, "instance")),
        HermitianOp(matrix_from_json(field(j, "g"))),
        HermitianOp(matrix_from_json(field(j, "f"))),
        std::move(lambdas),
        std::move(sign_pairs),
        std::move(targets),
        std::move(poly_odd),
        HermitianOp(matrix_from_json(field(j, "a"))),
        HermitianOp(matrix_from_json(field(j, "c"))),
        HermitianOp(matrix_from_json(field(j, "d_prime"))),
        decomposition_from_json(field(j, "l_decomp")),
        decomposition_from_json(field(j, "ltilde_decomp")),
        field(j, "seed").get<std::uint64_t>(),
        field(j, "rng").get<std::string>(),
    };
}

Json budgets_to_json(const Budgets& budgets) {
    Json j;
    j["m"] = budgets.m;
    j["k"] = budgets.k;
    j["depth"] = budgets.depth;
    j["segment_cap"] = budgets.segment_cap;
    return j;
}

Budgets budgets_from_json(const Json& j) {
    Budgets b;
    b.m = static_cast<int>(integer(field(j, "m"), "m"));
    b.k = static_cast<int>(integer(field(j, "k"), "k"));
    b.depth = static_cast<int>(integer(field(j, "depth"), "depth"));
    b.segment_cap = integer(field(j, "segment_cap"), "segment_cap");
    return b;
}

Json result_to_json(const SimulationResult& result) {
    Json j;
    j["format"] = "hamdist-result-v1";
    j["mode"] = to_string(result.mode);
    j["n"] = result.n;
    j["budgets"] = budgets_to_json(result.budgets);
    j["targets"] = result.targets;
    j["success"] = result.success;
    j["gram"] = matrix_to_json(result.gram);
    j["confusion"] = real_matrix_to_json(result.confusion);
    Json states = Json::array();
    for (const Vector& v : result.final_states) states.push_back(vector_to_json(v));
    j["final_states"] = std::move(states);
    Json costs = Json::array();
    for (const Cost& c : result.costs) {
        Json jc;
        jc["applies"] = c.applies;
        jc["waits"] = c.waits;
        jc["total_wait_time"] = c.total_wait_time;
        costs.push_back(std::move(jc));
    }
    j["costs"] = std::move(costs);
    return j;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

void csv_header(std::ostringstream& out, Index n) {
    out << "mode,m,k,depth,hypothesis";
    for (Index i = 0; i < n; ++i) out << ",p_outcome_" << i;
    out << ",declared_outcome,p_correct,applies,waits,total_wait_time\n";
}

void csv_rows(std::ostringstream& out, const SimulationResult& r) {
    for (Index j = 0; j < r.n; ++j) {
        const long m = r.targets[static_cast<std::size_t>(j)];
        const Index outcome = static_cast<Index>(((m % r.n) + r.n) % r.n);
        const Cost& cost = r.costs[static_cast<std::size_t>(j)];
        out << to_string(r.mode) << ',' << r.budgets.m << ',' << r.budgets.k << ','
            << r.budgets.depth << ',' << j;
        for (Index i = 0; i < r.n; ++i) out << ',' << format_double(r.confusion(i, j));
        out << ',' << outcome << ',' << format_double(r.confusion(outcome, j)) << ','
            << cost.applies << ',' << cost.waits << ','
            << format_double(cost.total_wait_time) << '\n';
    }
}

} // namespace

std::string result_to_csv(const SimulationResult& result) {
    std::ostringstream out;
    csv_header(out, result.n);
    csv_rows(out, result);
    return out.str();
}

std::string sweep_to_csv(const std::vector<SimulationResult>& results) {
    std::ostringstream out;
    if (results.empty()) return "";
    csv_header(out, results.front().n);
    for (const SimulationResult& r : results) csv_rows(out, r);
    return out.str();
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open '" + tmp + "' for writing");
        }
        out << contents;
        if (!contents.empty() && contents.back() != '\n') out << '\n';
        out.flush();
        if (!out) {
            throw std::runtime_error("write to '" + tmp + "' failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("rename of '" + tmp + "' to '" + path + "' failed");
    }
}

void write_sequence_json(std::ostream& out, const GateSequence& seq) {
    out << "{\"n\": " << seq.dim() << ", \"segments\": [";
    bool first = true;
    for (const GateSequence::Segment& seg : seq.segments()) {
        if (!first) out << ", ";
        first = false;
        if (seg.op == GateSequence::Op::apply) {
            out << "{\"op\": \"apply\", \"U\": " << matrix_to_json(seq.gate(seg.gate)).dump()
                << "}";
        } else {
            out << "{\"op\": \"wait\", \"t\": " << format_double(seg.duration) << "}";
        }
    }
    out << "]}\n";
}

} // namespace hamdist
