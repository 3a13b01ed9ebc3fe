#pragma once

#include <string>

#include <json.hpp>

#include "qpbraid/bplus_graph.hpp"
#include "qpbraid/braid.hpp"
#include "qpbraid/branch_locus.hpp"
#include "qpbraid/loop_path.hpp"
#include "qpbraid/monodromy.hpp"

namespace qpbraid {

using json = nlohmann::json;

// All readers throw InputError on malformed documents.

json to_json(cplx z);
cplx complex_from_json(const json& j);

/// {"n": 3, "letters": [[1, 1], [2, -1]]}
json to_json(const BraidWord& w);
BraidWord word_from_json(const json& j);

/// {"n": 3, "factors": [{"conjugator": [[2, 1]], "k": 1}]}
json to_json(const QuasipositiveFactorization& q);
QuasipositiveFactorization factorization_from_json(const json& j);

/// {"n": 3, "coeffs_w_desc": [f_0, ..., f_n]} where f_i lists [re, im]
/// pairs by ascending z-degree and f_0 multiplies w^n.
json to_json(const BivariatePolynomial& f);
BivariatePolynomial polynomial_from_json(const json& j);

/// {"segments": [{"kind": "seg", "a": .., "b": ..} |
///               {"kind": "arc", "center": .., "radius": r, "from": a, "to": b}]}
json to_json(const LoopPath& loop);
LoopPath loop_from_json(const json& j);

json to_json(const BranchData& b);
BranchData branch_from_json(const json& j);

json to_json(const BPlusGraph& g);

/// One event as a JSON-lines record.
json to_json(const CrossingEvent& e);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Checks a machine-output document against the schema named by its
/// "kind" field (or inferred from its keys for bare input documents).
/// Returns the kind; throws InputError describing the first violation.
std::string validate_document(const json& j);

}  // namespace qpbraid
