#include "hsforge/json_io.hpp"

#include <algorithm>
#include <cctype>

#include "hsforge/error.hpp"

namespace hsforge::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw parse_error(what); }

const Json& member(const Json& j, const char* key) {
    if (!j.is_object()) bad(std::string("expected an object with key \"") + key + "\"");
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing key \"") + key + "\"");
    return *it;
}

unsigned non_negative(const Json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0 || j.get<long long>() > 1'000'000)
        bad(std::string(what) + " must be a non-negative integer");
    return static_cast<unsigned>(j.get<long long>());
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

mpq_class rational_from_text(const std::string& text) {
    std::string num = text, den = "1";
    auto slash = text.find('/');
    if (slash != std::string::npos) num = text.substr(0, slash), den = text.substr(slash + 1);
    std::string digits = !num.empty() && num[0] == '-' ? num.substr(1) : num;
    if (!all_digits(digits) || !all_digits(den)) bad("malformed rational \"" + text + "\"");
    const mpz_class d{den};
    if (d == 0) bad("zero denominator in \"" + text + "\"");
    mpq_class q{mpz_class{num}, d};
    q.canonicalize();
    return q;
}

Json universe_json(const CoIdeal& trunc) {
    Json j = Json::object();
    j["vars"] = trunc.vars().names();
    j["trunc"] = to_json(trunc);
    return j;
}

CoIdeal universe_from_json(const Json& j, const PolyRing& ring) {
    VarSet vars = varset_from_json(member(j, "vars"));
    for (const auto& g : ring.gens())
        if (vars.contains(g)) throw validation_error("series variable clashes with generator " + g);
    return coideal_from_json(member(j, "trunc"), vars);
}

} // namespace

Json to_json(const Field& f, const std::vector<std::string>& gens) {
    Json j = Json::object();
    j["field"] = f.is_rational() ? "Q" : "GF";
    if (!f.is_rational()) j["p"] = f.p;
    j["gens"] = gens;
    return j;
}

Json to_json(const PolyRing& ring) { return to_json(ring.field(), ring.gens()); }

Json to_json(const Scalar& c) {
    if (c.field().is_rational()) return c.to_string();
    return std::stoul(c.to_string());
}

Json to_json(const Poly& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json mono = Json::object();
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) mono[p.ring().gen(i)] = m[i];
        terms.push_back(Json::array({mono, to_json(c)}));
    }
    return terms;
}

Json to_json(const MultiIndex& m) {
    Json j = Json::object();
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i]) j[m.vars()[i]] = m[i];
    return j;
}

Json to_json(const CoIdeal& c) {
    Json j = Json::object();
    switch (c.shape()) {
    case CoIdeal::Shape::total_degree:
        j["kind"] = "tm";
        j["m"] = c.max_norm();
        break;
    case CoIdeal::Shape::box:
        j["kind"] = "nbeta";
        j["beta"] = to_json(c.top());
        break;
    case CoIdeal::Shape::explicit_set: {
        j["kind"] = "explicit";
        Json members = Json::array();
        for (const auto& m : c.members()) members.push_back(to_json(m));
        j["members"] = members;
        break;
    }
    }
    return j;
}

Json series_coeffs_to_json(const Series& s) {
    Json coeffs = Json::array();
    for (const auto& [alpha, c] : s.terms()) coeffs.push_back(Json::array({to_json(alpha), to_json(c)}));
    return coeffs;
}

PolyRing ring_from_json(const Json& j) {
    const Json& field = member(j, "field");
    if (!field.is_string()) bad("ring field must be a string");
    Field f;
    if (field == "Q") {
        f = Field::rationals();
    } else if (field == "GF") {
        const Json& p = member(j, "p");
        if (!p.is_number_integer() || p.get<long long>() < 2) bad("GF characteristic must be an integer ≥ 2");
        try {
            f = Field::prime(static_cast<std::uint64_t>(p.get<long long>()));
        } catch (const precondition_error& e) {
            throw validation_error(e.what());
        }
    } else {
        bad("unknown field \"" + field.get<std::string>() + "\"");
    }
    std::vector<std::string> gens;
    auto it = j.find("gens");
    if (it != j.end()) {
        if (!it->is_array()) bad("gens must be an array of names");
        for (const auto& g : *it) {
            if (!g.is_string()) bad("generator names must be strings");
            gens.push_back(g.get<std::string>());
        }
    }
    try {
        return PolyRing(f, std::move(gens));
    } catch (const precondition_error& e) {
        throw validation_error(e.what());
    }
}

Scalar scalar_from_json(const Json& j, const Field& field) {
    if (j.is_number_integer()) return Scalar(field, mpq_class(mpz_class(j.dump())));
    if (!j.is_string()) bad("scalar must be an integer or a \"p/q\" string");
    try {
        return Scalar(field, rational_from_text(j.get<std::string>()));
    } catch (const precondition_error& e) {
        throw validation_error(e.what());
    }
}

Poly poly_from_json(const Json& j, const PolyRing& ring) {
    if (!j.is_array()) bad("polynomial must be a list of [monomial, scalar] pairs");
    Poly p(ring);
    const VarSet gens(ring.gens());
    Poly::Terms seen;
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 2) bad("polynomial term must be [monomial, scalar]");
        Monomial m = multiindex_from_json(term[0], gens).exponents();
        if (seen.count(m)) bad("repeated monomial in polynomial");
        Scalar c = scalar_from_json(term[1], ring.field());
        seen.emplace(m, c);
        p.add_term(m, c);
    }
    return p;
}

MultiIndex multiindex_from_json(const Json& j, const VarSet& vars) {
    if (!j.is_object()) bad("multi-index must be an object {var: exponent}");
    std::vector<MultiIndex::exponent_type> e(vars.size(), 0);
    for (const auto& [name, value] : j.items()) {
        auto i = vars.index_of(name);
        if (!i) bad("unknown variable \"" + name + "\"");
        e[*i] = non_negative(value, "exponent");
    }
    return MultiIndex(vars, std::move(e));
}

CoIdeal coideal_from_json(const Json& j, const VarSet& vars) {
    const Json& kind = member(j, "kind");
    if (kind == "tm") return CoIdeal::tm(vars, non_negative(member(j, "m"), "m"));
    if (kind == "nbeta") return CoIdeal::below(multiindex_from_json(member(j, "beta"), vars));
    if (kind == "explicit") {
        const Json& members = member(j, "members");
        if (!members.is_array()) bad("co-ideal members must be a list");
        std::vector<MultiIndex> list;
        for (const auto& m : members) list.push_back(multiindex_from_json(m, vars));
        return CoIdeal::from_members(vars, list);
    }
    bad("unknown co-ideal kind");
}

VarSet varset_from_json(const Json& j) {
    if (!j.is_array()) bad("vars must be a list of names");
    std::vector<std::string> names;
    for (const auto& v : j) {
        if (!v.is_string()) bad("variable names must be strings");
        names.push_back(v.get<std::string>());
    }
    try {
        return VarSet(std::move(names));
    } catch (const precondition_error& e) {
        throw validation_error(e.what());
    }
}

Series series_coeffs_from_json(const Json& j, const PolyRing& ring, const CoIdeal& trunc) {
    if (!j.is_array()) bad("series coefficients must be a list of [index, polynomial] pairs");
    Series s(ring, trunc);
    IndexSet seen;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2) bad("series entry must be [index, polynomial]");
        MultiIndex alpha = multiindex_from_json(entry[0], trunc.vars());
        if (!seen.insert(alpha).second) bad("repeated index in series");
        if (!trunc.contains(alpha)) throw validation_error("series index outside the truncation");
        s.set_coeff(alpha, poly_from_json(entry[1], ring));
    }
    return s;
}

SubstParts subst_parts_from_json(const Json& j) {
    try {
        if (member(j, "type") != "subst") bad("expected a subst document");
        const PolyRing ring = ring_from_json(member(j, "ring"));
        const CoIdeal src = universe_from_json(member(j, "src"), ring);
        const CoIdeal dst = universe_from_json(member(j, "dst"), ring);
        const Json& images = member(j, "images");
        if (!images.is_object()) bad("substitution images must be an object keyed by source variable");
        for (const auto& [name, value] : images.items())
            if (!src.vars().contains(name)) bad("image for unknown source variable \"" + name + "\"");
        std::vector<Series> list;
        for (const auto& name : src.vars().names()) {
            auto it = images.find(name);
            list.push_back(it == images.end() ? Series(ring, dst) : series_coeffs_from_json(*it, ring, dst));
        }
        return {ring, src, dst, std::move(list)};
    } catch (const Json::exception& e) {
        throw parse_error(e.what());
    }
}

Json to_json(const CoeffTable& table) {
    Json j = Json::object();
    j["type"] = "coeff_table";
    j["ring"] = to_json(table.ring);
    j["src"] = universe_json(table.src);
    j["dst"] = universe_json(table.dst);
    Json entries = Json::array();
    for (const auto& [key, value] : table.entries)
        if (!value.is_zero()) entries.push_back(Json::array({to_json(key.first), to_json(key.second), to_json(value)}));
    j["entries"] = entries;
    return j;
}

Json document_to_json(const Document& doc) {
    Json j = Json::object();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Poly>) {
                j["type"] = "poly";
                j["ring"] = to_json(v.ring());
                j["terms"] = to_json(v);
            } else if constexpr (std::is_same_v<T, Series>) {
                j["type"] = "series";
                j["ring"] = to_json(v.ring());
                j["vars"] = v.vars().names();
                j["trunc"] = to_json(v.trunc());
                j["coeffs"] = series_coeffs_to_json(v);
            } else if constexpr (std::is_same_v<T, SubstMap>) {
                j["type"] = "subst";
                j["ring"] = to_json(v.ring());
                j["src"] = universe_json(v.src());
                j["dst"] = universe_json(v.dst());
                Json images = Json::object();
                for (std::size_t i = 0; i < v.images().size(); ++i)
                    images[v.src_vars()[i]] = series_coeffs_to_json(v.image(i));
                j["images"] = images;
            } else if constexpr (std::is_same_v<T, HSDeriv>) {
                j["type"] = "hs";
                j["ring"] = to_json(v.ring());
                j["vars"] = v.vars().names();
                j["trunc"] = to_json(v.trunc());
                Json images = Json::array();
                for (const auto& img : v.images()) images.push_back(series_coeffs_to_json(img));
                j["images"] = images;
            } else {
                j["type"] = "universe";
                j["ring"] = to_json(v.ring);
                j["vars"] = v.trunc.vars().names();
                j["trunc"] = to_json(v.trunc);
            }
        },
        doc);
    return j;
}

Document document_from_json(const Json& j) {
    try {
        const Json& type = member(j, "type");
        if (!type.is_string()) bad("document type must be a string");
        const PolyRing ring = ring_from_json(member(j, "ring"));
        const std::string t = type.get<std::string>();
        if (t == "poly") return poly_from_json(member(j, "terms"), ring);
        if (t == "universe") return Universe{ring, universe_from_json(j, ring)};
        if (t == "series") return series_coeffs_from_json(member(j, "coeffs"), ring, universe_from_json(j, ring));
        if (t == "subst") {
            SubstParts parts = subst_parts_from_json(j);
            return SubstMap(parts.ring, parts.src, parts.dst, std::move(parts.images));
        }
        if (t == "hs") {
            const CoIdeal trunc = universe_from_json(j, ring);
            const Json& images = member(j, "images");
            if (!images.is_array() || images.size() != ring.ngens()) bad("hs images must list one series per generator");
            std::vector<Series> list;
            for (const auto& img : images) list.push_back(series_coeffs_from_json(img, ring, trunc));
            return HSDeriv(ring, trunc, std::move(list));
        }
        bad("unknown document type \"" + t + "\"");
    } catch (const Json::exception& e) {
        throw parse_error(e.what());
    } catch (const validation_error&) {
        throw;
    } catch (const parse_error&) {
        throw;
    } catch (const precondition_error& e) {
        // Structural problems inside a document are input errors, not misuse of an operation.
        throw validation_error(e.what());
    }
}

Document parse_document(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw parse_error(e.what());
    }
    return document_from_json(j);
}

const PolyRing& document_ring(const Document& doc) {
    return std::visit(
        [](const auto& v) -> const PolyRing& {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Universe>)
                return v.ring;
            else
                return v.ring();
        },
        doc);
}

std::string document_type(const Document& doc) {
    static const char* names[] = {"poly", "series", "subst", "hs", "universe"};
    return names[doc.index()];
}

std::string dump(const Json& j) { return j.dump(); }

} // namespace hsforge::io
