// json_io.hpp -- JSON serialization of the library's value types.
//
// All numeric values are emitted as decimal strings (never binary floats);
// real_to_string prints enough digits that re-parsing under the same active
// precision reproduces the value bit-for-bit, so expansions round-trip
// exactly.  Parsing functions expect the caller to have activated the
// precision context the strings were written with.

#pragma once

#include "thetalift/verify.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace tl {

using json = nlohmann::ordered_json;

// q-expansions: { "N": int, "coeffs": [[n, re, im], ...], "weight": "1",
// "disc": D } with one dense row per exponent 0..n_max.
json qexpansion_to_json(const QExpansion& f, long D, const PrecisionContext& ctx);
QExpansion qexpansion_from_json(const json& j);

// vector-valued forms: { "disc": D, "A": a, "weight": "1",
// "components": { "r": [[n, re, im], ...], ... } }, dense rows per component.
json vvform_to_json(const VectorValuedForm& F, long A, const PrecisionContext& ctx);
VectorValuedForm vvform_from_json(const json& j);

// class group summary: reduced forms, structure, character table
// (exponent vectors as integers), CM points as decimal strings.
json classgroup_to_json(const ClassGroup& G, const PrecisionContext& ctx);

// { "pair": [psi_index, chi_index], "method": ..., "value": [re, im],
// "error": e, "evaluations": n }
json petersson_to_json(int psi, int chi, const PeterssonValue& p,
                       const PrecisionContext& ctx);

// verification report: { "disc": D, "all_pass": b, "checks": [...] }
json report_to_json(long D, const std::vector<CheckResult>& checks);

std::string dump_json(const json& j, bool pretty);

}  // namespace tl
