#pragma once

#include <json.hpp>

#include <string>
#include <variant>

#include "hsforge/hsderiv.hpp"

namespace hsforge::io {

using Json = nlohmann::ordered_json;

// Ring, variables and truncation without data; the input shape for constructors such as power maps.
struct Universe {
    PolyRing ring;
    CoIdeal trunc;
};

// Top-level JSON document: {"type": ..., "ring": {...}, ...}.
using Document = std::variant<Poly, Series, SubstMap, HSDeriv, Universe>;

Json to_json(const Field& f, const std::vector<std::string>& gens);
Json to_json(const PolyRing& ring);
Json to_json(const Scalar& c);
Json to_json(const Poly& p);  // term list
Json to_json(const MultiIndex& m);
Json to_json(const CoIdeal& c);
Json series_coeffs_to_json(const Series& s);

PolyRing ring_from_json(const Json& j);
Scalar scalar_from_json(const Json& j, const Field& field);
Poly poly_from_json(const Json& j, const PolyRing& ring);
MultiIndex multiindex_from_json(const Json& j, const VarSet& vars);
CoIdeal coideal_from_json(const Json& j, const VarSet& vars);
VarSet varset_from_json(const Json& j);
Series series_coeffs_from_json(const Json& j, const PolyRing& ring, const CoIdeal& trunc);

// The pieces of a "subst" document, before the map itself is validated.
struct SubstParts {
    PolyRing ring;
    CoIdeal src;
    CoIdeal dst;
    std::vector<Series> images;
};
SubstParts subst_parts_from_json(const Json& j);

Json to_json(const CoeffTable& table);

Json document_to_json(const Document& doc);
// Throws parse_error for malformed input and validation_error for ill-defined objects.
Document document_from_json(const Json& j);
Document parse_document(const std::string& text);

const PolyRing& document_ring(const Document& doc);
std::string document_type(const Document& doc);

// Compact, key order preserved: the canonical byte form.
std::string dump(const Json& j);

} // namespace hsforge::io
