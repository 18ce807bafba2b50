#include <doctest.h>

#include <set>
#include <sstream>

#include "hsforge/cli.hpp"
#include "hsforge/json_io.hpp"
#include "support.hpp"

using namespace test;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
    io::Json json() const { return io::Json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string docs(std::initializer_list<io::Document> list) {
    io::Json arr = io::Json::array();
    for (const auto& d : list) arr.push_back(io::document_to_json(d));
    return io::dump(arr);
}

std::string doc(const io::Document& d) { return io::dump(io::document_to_json(d)); }

// Small fixtures over Q[x] with s, t at total degree 2.
struct Fixture {
    PolyRing r = ring_q();
    CoIdeal s = CoIdeal::tm(VarSet({"s1"}), 2);
    CoIdeal t = CoIdeal::tm(VarSet({"t"}), 2);
    CoIdeal s1 = CoIdeal::tm(VarSet({"s1"}), 1);
    CoIdeal u = CoIdeal::tm(VarSet({"u"}), 2);
    Rng rng{21};
    Series a = random_unit(r, s, rng), b = random_series(r, s, rng);
    Series bt = random_series(r, t, rng);
    SubstMap phi = random_subst(r, s, t, rng);
    SubstMap phi2 = random_subst(r, s, t, rng);
    SubstMap psi = random_subst(r, t, u, rng);
    HSDeriv d = canonical_hs(r, 2);
    HSDeriv e = random_hs(r, s, rng);
    HSDeriv et = random_hs(r, t, rng);
    Poly x = g(r, 0);
    io::Universe us{r, s}, ut{r, t}, uu{r, u}, us1{r, s1};
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("document round trip for every type") {
    Fixture f;
    std::vector<io::Document> all{f.x * f.x + k(f.r, 3), f.a, f.phi, f.e, f.us};
    PolyRing gf = ring_p(5, {"x", "y"});
    Rng rng(3);
    all.push_back(random_hs(gf, tdeg("s", 2, 2), rng));
    all.push_back(random_subst(gf, tdeg("s", 2, 2), tdeg("t", 1, 2), rng));
    for (const auto& d : all) {
        std::string text = doc(d);
        io::Document back = io::parse_document(text);
        CHECK(doc(back) == text);
        Outcome o = run_cli({"echo"}, text);
        CHECK(o.code == 0);
        CHECK(o.out == text + "\n");
    }
}

TEST_CASE("output is byte-deterministic") {
    Fixture f;
    std::string in = docs({f.phi, f.d});
    Outcome first = run_cli({"hs", "act"}, in), second = run_cli({"hs", "act"}, in);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
    Outcome r1 = run_cli({"random", "--kind", "hs", "--seed", "7", "--m", "3", "--gens", "x,y", "--vars", "s1,s2"});
    Outcome r2 = run_cli({"random", "--kind", "hs", "--seed", "7", "--m", "3", "--gens", "x,y", "--vars", "s1,s2"});
    CHECK(r1.code == 0);
    CHECK(r1.out == r2.out);
    Outcome s1 = run_cli({"selfcheck", "--seed", "2", "--sizes", "all=5"});
    Outcome s2 = run_cli({"selfcheck", "--seed", "2", "--sizes", "all=5"});
    CHECK(s1.out == s2.out);
}

TEST_CASE("worked example: inverting 1 + s") {
    PolyRing r = ring_q();
    VarSet v({"s"});
    CoIdeal t3 = CoIdeal::tm(v, 3);
    Series one_plus_s = ser(r, t3, {{MultiIndex(v), k(r, 1)}, {mi(v, {{"s", 1}}), k(r, 1)}});
    Outcome o = run_cli({"series", "invert"}, doc(one_plus_s));
    REQUIRE(o.code == 0);
    Series expected = ser(r, t3, {{MultiIndex(v), k(r, 1)}, {mi(v, {{"s", 1}}), k(r, -1)},
                                  {mi(v, {{"s", 2}}), k(r, 1)}, {mi(v, {{"s", 3}}), k(r, -1)}});
    CHECK(o.out == doc(expected) + "\n");
    Outcome p = run_cli({"--pretty", "series", "invert", "--partition"}, doc(one_plus_s));
    CHECK(p.out == "1 - s + s^2 - s^3  [mod t_3(s)]\n");
}

TEST_CASE("acting by the trivial map gives the identity") {
    Fixture f;
    std::string in = docs({SubstMap::trivial(f.r, f.s, f.t), f.e});
    Outcome o = run_cli({"hs", "act"}, in);
    REQUIRE(o.code == 0);
    CHECK(o.out == doc(HSDeriv::identity(f.r, f.t)) + "\n");
}

TEST_CASE("exit codes") {
    Fixture f;
    Outcome bad_json = run_cli({"echo"}, "{not json");
    CHECK(bad_json.code == cli::kExitInput);
    CHECK(bad_json.json()["type"] == "error");
    CHECK(bad_json.json()["kind"] == "parse");
    CHECK(run_cli({"no-such-command"}).code == cli::kExitInput);
    CHECK(run_cli({"series", "pow"}, doc(f.a)).code == cli::kExitInput);  // missing --power
    // Invalid map: s ↦ 1 has a constant term.
    Outcome invalid = run_cli({"echo"}, [&] {
        io::Json j = io::document_to_json(SubstMap::trivial(f.r, f.s, f.t));
        j["images"]["s1"] = io::series_coeffs_to_json(Series::one(f.r, f.t));
        return io::dump(j);
    }());
    CHECK(invalid.code == cli::kExitInput);
    CHECK(invalid.json()["kind"] == "validation");
    // Non-unit inverse is a precondition failure.
    Outcome nonunit = run_cli({"series", "invert"}, doc(ser(f.r, f.s, {{MultiIndex(f.s.vars()), f.x}})));
    CHECK(nonunit.code == cli::kExitPrecondition);
    CHECK(nonunit.json()["kind"] == "precondition");
    // Wrong document type.
    CHECK(run_cli({"series", "invert"}, doc(f.phi)).code == cli::kExitInput);
    CHECK(run_cli({"selfcheck", "--seed", "0", "--sizes", "all=3"}).code == cli::kExitOk);
    CHECK(run_cli({"selfcheck", "--seed", "0", "--sizes", "all=3", "--perturb"}).code == cli::kExitSelfcheck);
    CHECK(run_cli({"selfcheck", "--sizes", "bogus=3"}).code == cli::kExitInput);
    CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("selfcheck report shape") {
    Outcome empty = run_cli({"selfcheck", "--sizes", ""});
    CHECK(empty.code == 0);
    CHECK(empty.json()["checks"].empty());
    Outcome one = run_cli({"selfcheck", "--seed", "4", "--sizes", "series_inverse=4"});
    CHECK(one.code == 0);
    REQUIRE(one.json()["checks"].size() == 1);
    CHECK(one.err.find("selfcheck passed") != std::string::npos);
}

TEST_CASE("every library operation is reachable and every command runs") {
    std::set<std::string> covered;
    for (const auto& c : cli::command_registry()) covered.insert(c.ops.begin(), c.ops.end());
    for (const auto& op : cli::library_ops()) CHECK_MESSAGE(covered.count(op), op);

    Fixture f;
    io::Json alpha1 = io::to_json(mi(f.s.vars(), {{"s1", 1}}));
    io::Json e2 = io::to_json(mi(f.t.vars(), {{"t", 2}}));
    std::string a1 = io::dump(alpha1);
    HSDeriv g = act(f.phi, f.d);
    struct Call {
        std::vector<std::string> args;
        std::string input;
    };
    std::vector<Call> calls{
        {{"series", "invert"}, doc(f.a)},
        {{"series", "mul"}, docs({f.a, f.b})},
        {{"series", "add"}, docs({f.a, f.b})},
        {{"series", "sub"}, docs({f.a, f.b})},
        {{"series", "external"}, docs({f.a, f.bt})},
        {{"series", "truncate"}, docs({f.a, f.us1})},
        {{"series", "include"}, docs({f.a, f.us1})},
        {{"series", "pow", "--power", "3"}, doc(f.a)},
        {{"series", "scale"}, docs({f.a, f.x})},
        {{"series", "shift", "--alpha", a1}, doc(f.a)},
        {{"series", "unit"}, doc(f.a)},
        {{"series", "order"}, doc(f.b)},
        {{"series", "one"}, doc(f.us)},
        {{"subst", "apply", "--table"}, docs({f.phi, f.b})},
        {{"subst", "compose"}, docs({f.psi, f.phi})},
        {{"subst", "add"}, docs({f.phi, f.phi2})},
        {{"subst", "tensor"}, docs({f.phi, f.psi})},
        {{"subst", "coeff", "--alpha", a1, "--e", io::dump(e2)}, doc(f.phi)},
        {{"subst", "validate"}, doc(f.phi)},
        {{"subst", "truncate", "--n", "1"}, doc(f.phi)},
        {{"subst", "retarget"}, docs({f.phi, f.us, f.ut})},
        {{"subst", "power", "--nu", "2"}, doc(f.us)},
        {{"subst", "trivial"}, docs({f.us, f.ut})},
        {{"subst", "combinatorial", "--rename", "s1=t"}, docs({f.us, f.ut})},
        {{"subst", "table"}, doc(f.phi)},
        {{"subst", "multiplicative"}, doc(f.phi)},
        {{"subst", "from-table"}, doc(f.phi)},
        {{"subst", "split-top"}, doc(f.phi)},
        {{"subst", "constant-coeffs"}, doc(f.phi)},
        {{"hs", "compose"}, docs({f.d, f.e})},
        {{"hs", "invert"}, doc(f.e)},
        {{"hs", "act"}, docs({f.phi, f.e})},
        {{"hs", "ell"}, doc(f.e)},
        {{"hs", "external"}, docs({f.e, f.et})},
        {{"hs", "commutator"}, docs({f.d, f.e})},
        {{"hs", "iterative"}, doc(f.d)},
        {{"hs", "component", "--alpha", a1}, docs({f.e, f.x * f.x})},
        {{"hs", "phi"}, docs({f.e, f.x * f.x})},
        {{"hs", "tilde"}, docs({f.e, f.b})},
        {{"hs", "order", "--alpha", a1, "--n", "1"}, doc(f.e)},
        {{"hs", "d-of-phi"}, docs({f.et, f.phi})},
        {{"hs", "top-law"}, docs({f.phi, f.e})},
        {{"hs", "inverse-partition", "--alpha", a1}, docs({f.e, f.x * f.x})},
        {{"hs", "truncate"}, docs({f.e, f.us1})},
        {{"hs", "zero-extend"}, docs({f.e, io::Universe{f.r, CoIdeal::tm(f.s.vars(), 3)}})},
        {{"hs", "scale"}, docs({f.e, f.x})},
        {{"hs", "identity"}, doc(f.us)},
        {{"hs", "canonical", "--m", "2"}, doc(f.x)},
        {{"phid", "--recursive"}, docs({f.phi, f.e})},
        {{"generate", "--trace"}, docs({f.d, g})},
        {{"uniqueness"}, docs({f.d, f.phi, f.phi})},
        {{"integrate", "--m", "3"}, doc(f.e)},
        {{"random", "--kind", "constant-subst", "--m", "2", "--field", "GF", "--p", "7"}, ""},
        {{"echo"}, doc(f.e)},
        {{"selfcheck", "--sizes", "all=2"}, ""},
    };
    std::set<std::string> ran;
    for (const auto& call : calls) {
        Outcome o = run_cli(call.args, call.input);
        CHECK_MESSAGE(o.code == 0, call.args[0] << " " << call.args[1] << ": " << o.out);
        std::string path = call.args[0];
        if (path == "series" || path == "subst" || path == "hs") path += " " + call.args[1];
        ran.insert(path);
    }
    for (const auto& c : cli::command_registry()) CHECK_MESSAGE(ran.count(c.path), c.path);
}

TEST_CASE("command results agree with the library") {
    Fixture f;
    Outcome act_out = run_cli({"hs", "act"}, docs({f.phi, f.d}));
    HSDeriv g = act(f.phi, f.d);
    CHECK(act_out.out == doc(g) + "\n");
    Outcome gen = run_cli({"generate"}, docs({f.d, g}));
    CHECK(gen.out == doc(f.phi) + "\n");
    Outcome comp = run_cli({"subst", "compose"}, docs({f.psi, f.phi}));
    CHECK(comp.out == doc(compose(f.psi, f.phi)) + "\n");
    Outcome ell_out = run_cli({"hs", "ell"}, doc(HSDeriv::identity(f.r, f.s)));
    CHECK(ell_out.json()["value"] == "inf");
}

}
