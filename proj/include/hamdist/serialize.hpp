// serialize.hpp — JSON (and CSV) wire formats: matrices as [re, im] entry
// lists, instances, plans, decompositions, simulation results

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hamdist/gadgets.hpp"
#include "hamdist/precompute.hpp"
#include "hamdist/protocol.hpp"

namespace hamdist {

using Json = nlohmann::json;

// --- matrices and vectors: row lists of [re, im] pairs ----------------------

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);  // throws ParseError

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json real_matrix_to_json(const RealMatrix& m);

// --- domain types ------------------------------------------------------------

Json instance_to_json(const DiscriminationInstance& inst);
DiscriminationInstance instance_from_json(const Json& j);

Json decomposition_to_json(const ConjugationDecomposition& d);
ConjugationDecomposition decomposition_from_json(const Json& j);

Json plan_to_json(const PrecomputePlan& plan);
PrecomputePlan plan_from_json(const Json& j);

Json budgets_to_json(const Budgets& budgets);
Budgets budgets_from_json(const Json& j);

Json result_to_json(const SimulationResult& result);

/// One flat row per hypothesis: budgets, outcome distribution, declared
/// outcome, correctness probability, and sequence cost.
std::string result_to_csv(const SimulationResult& result);
std::string sweep_to_csv(const std::vector<SimulationResult>& results);

// --- files -------------------------------------------------------------------

/// Parse a JSON document, mapping any syntax error to ParseError.
Json parse_json(const std::string& text);

/// Read and parse a whole file; missing file is a ParseError too.
Json load_json_file(const std::string& path);

/// Serialize with a trailing newline and write via temp-file + rename so
/// readers never observe a partial document.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Stream a GateSequence as {"n":…, "segments":[{"op":"apply","U":…} |
/// {"op":"wait","t":…}]} without building the document in memory — sequences
/// can hold millions of segments.
void write_sequence_json(std::ostream& out, const GateSequence& seq);

} // namespace hamdist
