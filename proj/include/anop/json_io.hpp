#pragma once

// JSON schemas for every value the CLI reads or writes. Parsers throw
// Error(Parse) on schema violations; semantic checks (decreasing deltas,
// triple invariants) are left to the library and surface as MALFORMED.

#include <optional>

#include <nlohmann/json.hpp>

#include "anop/decomposition.hpp"
#include "anop/linalg.hpp"
#include "anop/realize.hpp"
#include "anop/spectrum.hpp"

namespace anop::io {

using nlohmann::json;

json to_json(Multiplicity m);
Multiplicity multiplicity_from_json(const json& j);

json to_json(const DecaySequence& d);
DecaySequence decay_from_json(const json& j);

/// Values print as bare numbers for real kinds and [re, im] for NORMAL.
json to_json(const SpectrumModel& m);
/// kind_override replaces the file's "kind" field.
SpectrumModel model_from_json(const json& j, std::optional<Kind> kind_override = std::nullopt);
Kind kind_from_string(const std::string& s);

json to_json(const ANVerdict& v);
json to_json(const ModuliReport& r);

json to_json(const PositiveTriple& t);
PositiveTriple triple_from_json(const json& j);

json to_json(const StructuredDecomposition& sd);
StructuredDecomposition structured_from_json(const json& j);

json to_json(const AMForm& am);
AMForm am_form_from_json(const json& j);

json to_json(const FredholmReport& r);

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json to_json(const VerificationReport& r);
json to_json(const BlockForm& b);
json to_json(const PolarPair& p);
json to_json(const ConverseWitness& w);

}  // namespace anop::io
