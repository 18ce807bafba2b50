#include "hsforge/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "hsforge/error.hpp"
#include "hsforge/format.hpp"
#include "hsforge/json_io.hpp"
#include "hsforge/oracle.hpp"
#include "hsforge/random.hpp"

namespace hsforge::cli {

namespace {

using io::Document;
using io::Json;
using io::Universe;

struct Options {
    std::vector<std::string> files;
    bool pretty = false;
    bool partition = false;
    bool direct = false;
    bool recursive = false;
    bool trace = false;
    bool table = false;
    bool perturb = false;
    std::string alpha;
    std::string e;
    std::string nu;
    std::string rename;
    std::optional<std::string> sizes;
    std::optional<std::uint64_t> seed;
    int order = 0;
    unsigned n = 0;
    unsigned m = 0;
    unsigned power = 0;
    // random documents
    std::string kind = "series";
    std::string field = "Q";
    unsigned p = 5;
    std::string gens = "x";
    std::string vars = "s";
    std::string dst_vars = "t";
};

struct Result {
    Json json;
    std::string text;
};

// Input documents, parsed on first use.
class Inputs {
public:
    explicit Inputs(std::vector<Json> raw) : raw_(std::move(raw)), docs_(raw_.size()) {}

    std::size_t size() const { return raw_.size(); }
    const Json& raw(std::size_t i) const { return raw_.at(i); }

    void expect(std::size_t lo, std::size_t hi = 0) const {
        if (hi == 0) hi = lo;
        if (raw_.size() < lo || raw_.size() > hi)
            throw parse_error("expected " + (lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi)) +
                              " input document(s), got " + std::to_string(raw_.size()));
    }

    const Document& doc(std::size_t i) {
        if (!docs_.at(i)) docs_[i] = io::document_from_json(raw_[i]);
        return *docs_[i];
    }

    template <class T>
    const T& get(std::size_t i, const char* type) {
        const Document& d = doc(i);
        if (!std::holds_alternative<T>(d))
            throw parse_error("input " + std::to_string(i + 1) + " must be a " + type + " document, got " + io::document_type(d));
        return std::get<T>(d);
    }

    const Series& series(std::size_t i) { return get<Series>(i, "series"); }
    const SubstMap& subst(std::size_t i) { return get<SubstMap>(i, "subst"); }
    const HSDeriv& hs(std::size_t i) { return get<HSDeriv>(i, "hs"); }
    const Poly& poly(std::size_t i) { return get<Poly>(i, "poly"); }
    const Universe& universe(std::size_t i) { return get<Universe>(i, "universe"); }

private:
    std::vector<Json> raw_;
    std::vector<std::optional<Document>> docs_;
};

std::string pretty(const Document& d) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Universe>)
                return to_string(v.trunc);
            else
                return to_string(v);
        },
        d);
}

Result doc_result(const Document& d) {
    std::string text = pretty(d);
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return {io::document_to_json(d), text};
}

Result bool_result(bool b) {
    Json j = Json::object();
    j["type"] = "boolean";
    j["value"] = b;
    return {j, b ? "true" : "false"};
}

Result ell_result(unsigned l) {
    Json j = Json::object();
    j["type"] = "ell";
    if (l == kInfiniteOrder)
        j["value"] = "inf";
    else
        j["value"] = l;
    return {j, l == kInfiniteOrder ? "inf" : std::to_string(l)};
}

MultiIndex index_option(const std::string& text, const VarSet& vars, const char* flag) {
    if (text.empty()) throw parse_error(std::string("missing ") + flag);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw parse_error(std::string(flag) + ": " + e.what());
    }
    return io::multiindex_from_json(j, vars);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::stringstream in(s);
    for (std::string part; std::getline(in, part, sep);) out.push_back(part);
    return out;
}

unsigned parse_count(const std::string& s, const std::string& what) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }) || s.size() > 9)
        throw parse_error("bad " + what + " \"" + s + "\"");
    return static_cast<unsigned>(std::stoul(s));
}

std::map<std::string, std::size_t> parse_sizes(const std::string& text) {
    std::map<std::string, std::size_t> sizes;
    for (const auto& item : split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw parse_error("sizes entry must be name=N: \"" + item + "\"");
        std::string name = item.substr(0, eq);
        std::size_t n = parse_count(item.substr(eq + 1), "size");
        if (name == "all") {
            for (const auto& c : suite_check_names()) sizes[c] = n;
            continue;
        }
        const auto& names = suite_check_names();
        if (std::find(names.begin(), names.end(), name) == names.end()) throw parse_error("unknown check \"" + name + "\"");
        sizes[name] = n;
    }
    return sizes;
}

Json trace_json(const GenerationTrace& trace) {
    Json j = Json::object();
    j["type"] = "trace";
    Json stages = Json::array();
    for (const auto& s : trace.stages) stages.push_back(io::document_to_json(s));
    j["stages"] = stages;
    return j;
}

struct Command {
    std::string group;  // empty for top-level commands
    std::string name;
    std::vector<std::string> ops;
    std::string summary;
    std::function<void(CLI::App&, Options&)> add_options;
    std::function<Result(Inputs&, const Options&)> handler;
    bool reads_input = true;
};

void no_options(CLI::App&, Options&) {}

const std::vector<Command>& commands() {
    static const std::vector<Command> table = [] {
        std::vector<Command> c;
        // ---------------------------------------------------------------- series
        c.push_back({"series", "invert", {"series.invert_recursive", "series.invert_partition"},
                     "multiplicative inverse (recursive; --partition uses the partition formula)",
                     [](CLI::App& a, Options& o) { a.add_flag("--partition", o.partition, "use the partition formula"); },
                     [](Inputs& in, const Options& o) {
                         in.expect(1);
                         return doc_result(o.partition ? invert_partition(in.series(0)) : invert_recursive(in.series(0)));
                     }});
        c.push_back({"series", "mul", {"series.mul"}, "product of two series", no_options, [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(in.series(0) * in.series(1));
                     }});
        c.push_back({"series", "add", {"series.add"}, "sum of two series", no_options, [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(in.series(0) + in.series(1));
                     }});
        c.push_back({"series", "sub", {"series.sub", "series.neg"}, "difference of two series", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(in.series(0) + -in.series(1));
                     }});
        c.push_back({"series", "external", {"series.external_product"}, "external product over disjoint variables",
                     no_options, [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(external_product(in.series(0), in.series(1)));
                     }});
        c.push_back({"series", "truncate", {"series.truncate"}, "truncate a series to a smaller universe", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(truncate(in.series(0), in.universe(1).trunc));
                     }});
        c.push_back({"series", "include", {"series.include"}, "move a series into another universe by variable name",
                     no_options, [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(include(in.series(0), in.universe(1).trunc));
                     }});
        c.push_back({"series", "pow", {"series.pow"}, "power of a series",
                     [](CLI::App& a, Options& o) { a.add_option("--power", o.power, "exponent")->required(); },
                     [](Inputs& in, const Options& o) {
                         in.expect(1);
                         return doc_result(pow(in.series(0), o.power));
                     }});
        c.push_back({"series", "scale", {"series.scaled"}, "multiply a series by a polynomial", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(in.series(0).scaled(in.poly(1)));
                     }});
        c.push_back({"series", "shift", {"series.shifted"}, "multiply a series by a monomial s^alpha",
                     [](CLI::App& a, Options& o) { a.add_option("--alpha", o.alpha, "multi-index as JSON")->required(); },
                     [](Inputs& in, const Options& o) {
                         in.expect(1);
                         const Series& s = in.series(0);
                         return doc_result(s.shifted(index_option(o.alpha, s.vars(), "--alpha")));
                     }});
        c.push_back({"series", "unit", {"series.is_unit"}, "whether the series is invertible", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(1);
                         return bool_result(is_unit(in.series(0)));
                     }});
        c.push_back({"series", "order", {"series.order"}, "least norm in the support", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(1);
                         return ell_result(in.series(0).order());
                     }});
        c.push_back({"series", "one", {"series.one"}, "unit series over a universe", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(1);
                         const Universe& u = in.universe(0);
                         return doc_result(Series::one(u.ring, u.trunc));
                     }});
        // ---------------------------------------------------------------- subst
        c.push_back({"subst", "apply", {"subst.apply", "subst.apply_table", "subst.coeff_table"},
                     "apply a substitution map to a series (--table goes through the coefficient table)",
                     [](CLI::App& a, Options& o) { a.add_flag("--table", o.table, "apply through the coefficient table"); },
                     [](Inputs& in, const Options& o) {
                         in.expect(2);
                         const SubstMap& phi = in.subst(0);
                         return doc_result(o.table ? apply_table(coeff_table(phi), in.series(1)) : apply(phi, in.series(1)));
                     }});
        c.push_back({"subst", "compose", {"subst.compose"}, "composition: first document after the second", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(compose(in.subst(0), in.subst(1)));
                     }});
        c.push_back({"subst", "add", {"subst.add"}, "sum of two substitution maps", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(add(in.subst(0), in.subst(1)));
                     }});
        c.push_back({"subst", "tensor", {"subst.tensor"}, "tensor product of two substitution maps", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(tensor(in.subst(0), in.subst(1)));
                     }});
        c.push_back({"subst", "coeff", {"subst.coeff", "subst.monomial_image", "oracle.direct_C"},
                     "coefficient of t^e in the image of s^alpha (--direct expands the product)",
                     [](CLI::App& a, Options& o) {
                         a.add_option("--alpha", o.alpha, "source multi-index as JSON")->required();
                         a.add_option("--e", o.e, "target multi-index as JSON")->required();
                         a.add_flag("--direct", o.direct, "expand the product directly");
                     },
                     [](Inputs& in, const Options& o) {
                         in.expect(1);
                         const SubstMap& phi = in.subst(0);
                         MultiIndex alpha = index_option(o.alpha, phi.src_vars(), "--alpha");
                         MultiIndex e = index_option(o.e, phi.dst_vars(), "--e");
                         if (!phi.src().contains(alpha) || !phi.dst().contains(e))
                             throw precondition_error("indices must lie in the source and target universes");
                         Poly value = o.direct ? direct_C(phi, alpha, e) : phi.monomial_image(alpha).coeff(e);
                         if (!o.direct && !(value == phi.coeff(alpha, e)))
                             throw error("coefficient formula disagrees with the monomial image");
                         return doc_result(value);
                     }});
        c.push_back({"subst", "validate", {"subst.validate"}, "whether the images define a substitution map", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(1);
                         io::SubstParts parts = io::subst_parts_from_json(in.raw(0));
                         return bool_result(validate(parts.ring, parts.src, parts.dst, parts.images));
                     }});
        c.push_back({"subst", "truncate", {"subst.truncate_subst"}, "restrict both sides to norm at most n",
                     [](CLI::App& a, Options& o) { a.add_option("--n", o.n, "norm bound")->required(); },
                     [](Inputs& in, const Options& o) {
                         in.expect(1);
                         return doc_result(truncate_subst(in.subst(0), o.n));
                     }});
        c.push_back({"subst", "retarget", {"subst.retarget"}, "same images read over new source and target universes",
                     no_options, [](Inputs& in, const Options&) {
                         in.expect(3);
                         return doc_result(retarget(in.subst(0), in.universe(1).trunc, in.universe(2).trunc));
                     }});
        c.push_back({"subst", "power", {"subst.power_map", "subst.power_coideal"}, "the map s_i -> s_i^nu_i",
                     [](CLI::App& a, Options& o) { a.add_option("--nu", o.nu, "comma-separated exponents ≥ 1")->required(); },
                     [](Inputs& in, const Options& o) {
                         in.expect(1);
                         const Universe& u = in.universe(0);
                         std::vector<unsigned> nu;
                         for (const auto& part : split(o.nu, ',')) nu.push_back(parse_count(part, "exponent"));
                         return doc_result(power_map(u.ring, u.trunc, nu));
                     }});
        c.push_back({"subst", "trivial", {"subst.trivial"}, "the zero map between two universes", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         const Universe& src = in.universe(0);
                         return doc_result(SubstMap::trivial(src.ring, src.trunc, in.universe(1).trunc));
                     }});
        c.push_back({"subst", "combinatorial", {"subst.combinatorial"}, "variable renaming map between two universes",
                     [](CLI::App& a, Options& o) { a.add_option("--rename", o.rename, "src=dst pairs, comma-separated"); },
                     [](Inputs& in, const Options& o) {
                         in.expect(2);
                         std::map<std::string, std::string> renaming;
                         for (const auto& item : split(o.rename, ',')) {
                             auto eq = item.find('=');
                             if (eq == std::string::npos) throw parse_error("rename entry must be src=dst");
                             renaming[item.substr(0, eq)] = item.substr(eq + 1);
                         }
                         const Universe& src = in.universe(0);
                         return doc_result(SubstMap::combinatorial(src.ring, src.trunc, in.universe(1).trunc, renaming));
                     }});
        c.push_back({"subst", "table", {"subst.coeff_table"}, "all coefficients C_e(phi, alpha)", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(1);
                         return Result{io::to_json(coeff_table(in.subst(0))), ""};
                     }});
        c.push_back({"subst", "multiplicative", {"subst.check_multiplicativity_table"},
                     "multiplicativity criterion on the coefficient table", no_options, [](Inputs& in, const Options&) {
                         in.expect(1);
                         return bool_result(check_multiplicativity_table(coeff_table(in.subst(0))));
                     }});
        c.push_back({"subst", "from-table", {"subst.subst_from_table"}, "rebuild the map from its coefficient table",
                     no_options, [](Inputs& in, const Options&) {
                         in.expect(1);
                         return doc_result(subst_from_table(coeff_table(in.subst(0))));
                     }});
        c.push_back({"subst", "split-top", {"generate.split_top"}, "split into top-norm and lower parts", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(1);
                         TopSplit parts = split_top(in.subst(0));
                         Json j = Json::object();
                         j["type"] = "split";
                         j["top"] = io::document_to_json(parts.top);
                         j["lower"] = io::document_to_json(parts.lower);
                         return Result{j, "top:\n" + to_string(parts.top) + "lower:\n" + to_string(parts.lower)};
                     }});
        c.push_back({"subst", "constant-coeffs", {"subst.has_constant_coeffs"}, "whether all image coefficients are scalars",
                     no_options, [](Inputs& in, const Options&) {
                         in.expect(1);
                         return bool_result(has_constant_coeffs(in.subst(0)));
                     }});
        // ---------------------------------------------------------------- hs
        c.push_back({"hs", "compose", {"hs.compose"}, "composition of two HS-derivations", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(compose(in.hs(0), in.hs(1)));
                     }});
        c.push_back({"hs", "invert", {"hs.invert"}, "inverse in the HS group", no_options, [](Inputs& in, const Options&) {
                         in.expect(1);
                         return doc_result(invert(in.hs(0)));
                     }});
        c.push_back({"hs", "act", {"hs.act"}, "action of a substitution map on an HS-derivation", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(act(in.subst(0), in.hs(1)));
                     }});
        c.push_back({"hs", "ell", {"hs.ell"}, "order of D minus the identity", no_options, [](Inputs& in, const Options&) {
                         in.expect(1);
                         return ell_result(ell(in.hs(0)));
                     }});
        c.push_back({"hs", "external", {"hs.external"}, "external product over disjoint variables", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(external(in.hs(0), in.hs(1)));
                     }});
        c.push_back({"hs", "commutator", {"hs.commutator"}, "group commutator D E D* E*", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(commutator(in.hs(0), in.hs(1)));
                     }});
        c.push_back({"hs", "iterative", {"hs.is_iterative"}, "iterativity test", no_options, [](Inputs& in, const Options&) {
                         in.expect(1);
                         return bool_result(is_iterative(in.hs(0)));
                     }});
        c.push_back({"hs", "component", {"hs.component"}, "D_alpha applied to a polynomial",
                     [](CLI::App& a, Options& o) { a.add_option("--alpha", o.alpha, "multi-index as JSON")->required(); },
                     [](Inputs& in, const Options& o) {
                         in.expect(2);
                         const HSDeriv& d = in.hs(0);
                         return doc_result(component(d, index_option(o.alpha, d.vars(), "--alpha"), in.poly(1)));
                     }});
        c.push_back({"hs", "phi", {"hs.phi_apply"}, "the algebra map A -> A[[s]] applied to a polynomial", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(phi_apply(in.hs(0), in.poly(1)));
                     }});
        c.push_back({"hs", "tilde", {"hs.tilde_apply"}, "coefficientwise extension to series", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(tilde_apply(in.hs(0), in.series(1)));
                     }});
        c.push_back({"hs", "order", {"hs.op_order_at_most", "hs.standard_witnesses"},
                     "sampling test that D_alpha has differential order at most n",
                     [](CLI::App& a, Options& o) {
                         a.add_option("--alpha", o.alpha, "multi-index as JSON")->required();
                         a.add_option("--n", o.order, "order bound (-1 tests for zero)")->required();
                     },
                     [](Inputs& in, const Options& o) {
                         in.expect(1);
                         const HSDeriv& d = in.hs(0);
                         return bool_result(op_order_at_most(OperatorHandle{d, index_option(o.alpha, d.vars(), "--alpha")}, o.order));
                     }});
        c.push_back({"hs", "d-of-phi", {"hs.d_of_phi"}, "the map s -> D~(phi(s))", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(d_of_phi(in.hs(0), in.subst(1)));
                     }});
        c.push_back({"hs", "top-law", {"generate.top_action_law"}, "clauses of the top-norm action law", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         const HSDeriv& d = in.hs(1);
                         auto report = top_action_law(in.subst(0), d, standard_witnesses(d.ring(), d.trunc().max_norm()));
                         Json j = Json::object();
                         j["type"] = "top_law";
                         j["low_components_vanish"] = report.low_components_vanish;
                         j["top_components_match"] = report.top_components_match;
                         j["factors_left"] = report.factors_left;
                         j["factors_right"] = report.factors_right;
                         j["ok"] = report.ok();
                         return Result{j, report.ok() ? "true" : "false"};
                     }});
        c.push_back({"hs", "inverse-partition", {"oracle.hs_inverse_partition"},
                     "component of the inverse from the partition sum",
                     [](CLI::App& a, Options& o) { a.add_option("--alpha", o.alpha, "multi-index as JSON")->required(); },
                     [](Inputs& in, const Options& o) {
                         in.expect(2);
                         const HSDeriv& d = in.hs(0);
                         return doc_result(hs_inverse_partition(d, index_option(o.alpha, d.vars(), "--alpha"), in.poly(1)));
                     }});
        c.push_back({"hs", "truncate", {"hs.truncate"}, "truncate to a smaller universe", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(truncate(in.hs(0), in.universe(1).trunc));
                     }});
        c.push_back({"hs", "zero-extend", {"hs.zero_extend"}, "extend by zero components to a larger universe", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(2);
                         return doc_result(zero_extend(in.hs(0), in.universe(1).trunc));
                     }});
        c.push_back({"hs", "scale", {"hs.scale"}, "a.D with components a^alpha D_alpha; one polynomial per variable",
                     no_options, [](Inputs& in, const Options&) {
                         if (in.size() < 1) in.expect(1);
                         const HSDeriv& d = in.hs(0);
                         in.expect(1 + d.vars().size());
                         std::vector<Poly> a;
                         for (std::size_t i = 1; i < in.size(); ++i) a.push_back(in.poly(i));
                         return doc_result(scale(a, d));
                     }});
        c.push_back({"hs", "identity", {"hs.identity"}, "the identity HS-derivation over a universe", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(1);
                         const Universe& u = in.universe(0);
                         return doc_result(HSDeriv::identity(u.ring, u.trunc));
                     }});
        c.push_back({"hs", "canonical", {"generate.canonical_hs"}, "Taylor HS-derivation x_i -> x_i + s_i of length m",
                     [](CLI::App& a, Options& o) { a.add_option("--m", o.m, "length")->required(); },
                     [](Inputs& in, const Options& o) {
                         in.expect(1);
                         return doc_result(canonical_hs(io::document_ring(in.doc(0)), o.m));
                     }});
        // ---------------------------------------------------------------- top level
        c.push_back({"", "phid", {"hs.phi_upper_D", "oracle.phiD_recursive_table"},
                     "the twisted map phi^D (--recursive uses the triangular recursion)",
                     [](CLI::App& a, Options& o) { a.add_flag("--recursive", o.recursive, "use the recursion"); },
                     [](Inputs& in, const Options& o) {
                         in.expect(2);
                         const SubstMap& phi = in.subst(0);
                         const HSDeriv& d = in.hs(1);
                         return doc_result(o.recursive ? subst_from_table(phiD_recursive_table(phi, d)) : phi_upper_D(phi, d));
                     }});
        c.push_back({"", "generate", {"generate.generate_subst", "generate.generate_subst_traced"},
                     "substitution map phi with phi.D = G (inputs: D, G)",
                     [](CLI::App& a, Options& o) { a.add_flag("--trace", o.trace, "emit every stage"); },
                     [](Inputs& in, const Options& o) {
                         in.expect(2);
                         GenerationProblem problem{in.hs(0), in.hs(1)};
                         if (!o.trace) return doc_result(generate_subst(problem));
                         GenerationTrace trace = generate_subst_traced(problem);
                         std::string text;
                         for (std::size_t r = 0; r < trace.stages.size(); ++r)
                             text += "stage " + std::to_string(r + 1) + ":\n" + to_string(trace.stages[r]);
                         if (!text.empty()) text.pop_back();
                         return Result{trace_json(trace), text};
                     }});
        c.push_back({"", "uniqueness", {"generate.verify_uniqueness"},
                     "regeneration fixed point for two maps (inputs: D, phi, psi)", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(3);
                         return bool_result(verify_uniqueness(in.hs(0), in.subst(1), in.subst(2)));
                     }});
        c.push_back({"", "integrate", {"generate.integrate"}, "extend an HS-derivation of length n to length m",
                     [](CLI::App& a, Options& o) { a.add_option("--m", o.m, "target length")->required(); },
                     [](Inputs& in, const Options& o) {
                         in.expect(1);
                         return doc_result(integrate(in.hs(0), o.m));
                     }});
        c.push_back({"", "random", {"random.random_series", "random.random_unit", "random.random_subst",
                                    "random.random_constant_subst", "random.random_hs"},
                     "seeded random document",
                     [](CLI::App& a, Options& o) {
                         a.add_option("--kind", o.kind, "series | unit | subst | constant-subst | hs")
                             ->check(CLI::IsMember({"series", "unit", "subst", "constant-subst", "hs"}));
                         a.add_option("--seed", o.seed, "seed");
                         a.add_option("--field", o.field, "Q or GF")->check(CLI::IsMember({"Q", "GF"}));
                         a.add_option("--p", o.p, "characteristic for GF");
                         a.add_option("--gens", o.gens, "comma-separated ring generators");
                         a.add_option("--vars", o.vars, "comma-separated series variables");
                         a.add_option("--dst-vars", o.dst_vars, "comma-separated target variables (subst)");
                         a.add_option("--m", o.m, "total-degree truncation")->required();
                     },
                     [](Inputs&, const Options& o) {
                         Field field = o.field == "Q" ? Field::rationals() : Field::prime(o.p);
                         PolyRing ring(field, split(o.gens, ','));
                         CoIdeal trunc = CoIdeal::tm(VarSet(split(o.vars, ',')), o.m);
                         Rng rng(o.seed.value_or(0));
                         if (o.kind == "series") return doc_result(random_series(ring, trunc, rng));
                         if (o.kind == "unit") return doc_result(random_unit(ring, trunc, rng));
                         if (o.kind == "hs") return doc_result(random_hs(ring, trunc, rng));
                         CoIdeal dst = CoIdeal::tm(VarSet(split(o.dst_vars, ',')), o.m);
                         if (o.kind == "subst") return doc_result(random_subst(ring, trunc, dst, rng));
                         return doc_result(random_constant_subst(ring, trunc, dst, rng));
                     },
                     false});
        c.push_back({"", "echo", {"io.parse", "io.serialize"}, "parse and re-emit documents canonically", no_options,
                     [](Inputs& in, const Options&) {
                         in.expect(1);
                         return doc_result(in.doc(0));
                     }});
        c.push_back({"", "selfcheck", {"oracle.run_suite", "oracle.run_check"}, "run the oracle suite",
                     [](CLI::App& a, Options& o) {
                         a.add_option("--seed", o.seed, "suite seed (default: HSFORGE_SEED, then 0)");
                         a.add_option("--sizes", o.sizes, "name=N,... or all=N; an empty value runs nothing");
                         a.add_flag("--perturb", o.perturb, "negative control: tamper with every check");
                     },
                     nullptr, false});
        return c;
    }();
    return table;
}

std::vector<Json> read_inputs(const std::vector<std::string>& files, std::istream& in) {
    std::vector<std::string> texts;
    if (files.empty()) {
        texts.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
        for (const auto& f : files) {
            if (f == "-") {
                texts.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
                continue;
            }
            std::ifstream file(f, std::ios::binary);
            if (!file) throw parse_error("cannot read " + f);
            texts.emplace_back(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
        }
    }
    std::vector<Json> docs;
    for (const auto& text : texts) {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::exception& e) {
            throw parse_error(e.what());
        }
        if (j.is_array())
            for (auto& item : j) docs.push_back(std::move(item));
        else
            docs.push_back(std::move(j));
    }
    return docs;
}

void emit(std::ostream& out, const Result& r, bool pretty) {
    if (pretty && !r.text.empty())
        out << r.text << "\n";
    else
        out << io::dump(r.json) << "\n";
}

void emit_error(std::ostream& out, const std::string& kind, const std::string& message) {
    Json j = Json::object();
    j["type"] = "error";
    j["kind"] = kind;
    j["message"] = message;
    out << io::dump(j) << "\n";
}

std::uint64_t selfcheck_seed(const Options& o) {
    if (o.seed) return *o.seed;
    if (const char* env = std::getenv("HSFORGE_SEED"); env && *env) {
        std::string s(env);
        if (!std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); }) || s.size() > 19)
            throw parse_error("HSFORGE_SEED must be a non-negative integer");
        return std::stoull(s);
    }
    return 0;
}

int selfcheck(const Options& o, std::ostream& out, std::ostream& err) {
    SuiteOptions suite;
    suite.seed = selfcheck_seed(o);
    suite.perturb = o.perturb;
    suite.sizes = o.sizes ? parse_sizes(*o.sizes) : default_suite_sizes();
    auto reports = run_suite(suite);
    bool passed = std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed(); });

    Json j = Json::object();
    j["type"] = "report";
    j["seed"] = suite.seed;
    j["perturb"] = suite.perturb;
    j["passed"] = passed;
    Json checks = Json::array();
    std::ostringstream text;
    for (const auto& r : reports) {
        Json c = Json::object();
        c["name"] = r.name;
        c["instances"] = r.instances;
        c["passed"] = r.passed();
        Json failures = Json::array();
        for (const auto& f : r.failures) {
            Json fj = Json::object();
            fj["input"] = f.input;
            fj["expected"] = f.expected;
            fj["got"] = f.got;
            failures.push_back(fj);
        }
        c["failures"] = failures;
        checks.push_back(c);
        text << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.instances << " instances, "
             << r.failures.size() << " failures)\n";
        for (std::size_t i = 0; i < std::min<std::size_t>(r.failures.size(), 3); ++i)
            text << "  input: " << r.failures[i].input << "\n  expected: " << r.failures[i].expected
                 << "\n  got: " << r.failures[i].got << "\n";
    }
    j["checks"] = checks;
    text << (passed ? "selfcheck passed" : "selfcheck FAILED") << " (seed " << suite.seed << ")\n";

    if (o.pretty) {
        out << text.str();
    } else {
        out << io::dump(j) << "\n";
        err << text.str();
    }
    return passed ? kExitOk : kExitSelfcheck;
}

} // namespace

const std::vector<CommandInfo>& command_registry() {
    static const std::vector<CommandInfo> info = [] {
        std::vector<CommandInfo> out;
        for (const auto& c : commands())
            out.push_back({c.group.empty() ? c.name : c.group + " " + c.name, c.ops, c.summary});
        return out;
    }();
    return info;
}

const std::vector<std::string>& library_ops() {
    static const std::vector<std::string> ops{
        "series.mul", "series.add", "series.sub", "series.neg", "series.scaled", "series.shifted", "series.order",
        "series.one", "series.truncate", "series.include", "series.pow", "series.is_unit", "series.invert_recursive",
        "series.invert_partition", "series.external_product",
        "subst.apply", "subst.coeff", "subst.monomial_image", "subst.validate", "subst.compose", "subst.add",
        "subst.tensor", "subst.power_coideal", "subst.power_map", "subst.has_constant_coeffs", "subst.truncate_subst",
        "subst.retarget", "subst.trivial", "subst.combinatorial", "subst.coeff_table",
        "subst.check_multiplicativity_table", "subst.subst_from_table", "subst.apply_table",
        "hs.identity", "hs.phi_apply", "hs.component", "hs.tilde_apply", "hs.compose", "hs.invert", "hs.ell",
        "hs.commutator", "hs.external", "hs.truncate", "hs.zero_extend", "hs.act", "hs.scale", "hs.d_of_phi",
        "hs.phi_upper_D", "hs.is_iterative", "hs.op_order_at_most", "hs.standard_witnesses",
        "generate.split_top", "generate.top_action_law", "generate.generate_subst", "generate.generate_subst_traced",
        "generate.verify_uniqueness", "generate.canonical_hs", "generate.integrate",
        "oracle.direct_C", "oracle.hs_inverse_partition", "oracle.phiD_recursive_table", "oracle.run_check",
        "oracle.run_suite",
        "random.random_series", "random.random_unit", "random.random_subst", "random.random_constant_subst",
        "random.random_hs",
        "io.parse", "io.serialize",
    };
    return ops;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options opts;
    CLI::App app{"Truncated power series, substitution maps and Hasse-Schmidt derivations", "hsforge"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--pretty", opts.pretty, "human-readable output");

    std::map<std::string, CLI::App*> groups;
    std::vector<std::pair<CLI::App*, const Command*>> leaves;
    for (const auto& c : commands()) {
        CLI::App* parent = &app;
        if (!c.group.empty()) {
            auto& g = groups[c.group];
            if (!g) {
                g = app.add_subcommand(c.group, c.group + " operations");
                g->require_subcommand(1);
                g->fallthrough();
            }
            parent = g;
        }
        CLI::App* leaf = parent->add_subcommand(c.name, c.summary);
        leaf->fallthrough();
        if (c.reads_input) leaf->add_option("files", opts.files, "input documents (default: standard input)");
        c.add_options(*leaf, opts);
        leaves.emplace_back(leaf, &c);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        emit_error(out, "usage", e.what());
        return kExitInput;
    }

    const Command* chosen = nullptr;
    for (const auto& [leaf, c] : leaves)
        if (leaf->parsed()) chosen = c;

    try {
        if (chosen->name == "selfcheck") return selfcheck(opts, out, err);
        Inputs inputs(chosen->reads_input ? read_inputs(opts.files, in) : std::vector<Json>{});
        emit(out, chosen->handler(inputs, opts), opts.pretty);
        return kExitOk;
    } catch (const parse_error& e) {
        emit_error(out, "parse", e.what());
        return kExitInput;
    } catch (const validation_error& e) {
        emit_error(out, "validation", e.what());
        return kExitInput;
    } catch (const precondition_error& e) {
        emit_error(out, "precondition", e.what());
        return kExitPrecondition;
    } catch (const std::exception& e) {
        emit_error(out, "internal", e.what());
        return kExitPrecondition;
    }
}

} // namespace hsforge::cli
