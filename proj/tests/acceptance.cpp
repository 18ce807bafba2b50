// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <sstream>

#include "hsforge/cli.hpp"
#include "hsforge/format.hpp"
#include "hsforge/json_io.hpp"
#include "support.hpp"

using namespace test;

namespace {

struct Tally {
    std::size_t checks = 0;
    std::size_t failed = 0;
    std::vector<std::string> failures;  // first few only
    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        if (++failed <= 5) failures.push_back(what);
    }
    bool ok() const { return failed == 0; }
};

Poly one(const PolyRing& r) { return k(r, 1); }

PolyRing ring_by_index(std::size_t i) {
    switch (i % 4) {
        case 0: return ring_q({"x"});
        case 1: return ring_p(5, {"x"});
        case 2: return ring_q({"x", "y"});
        default: return ring_p(5, {"x", "y"});
    }
}

const MultiIndex& pick(const CoIdeal& c, Rng& rng) {
    const auto& m = c.members();
    auto it = m.begin();
    std::advance(it, static_cast<long>(rng.below(m.size())));
    return *it;
}

std::vector<Poly> generators(const PolyRing& r) {
    std::vector<Poly> out;
    for (std::size_t i = 0; i < r.ngens(); ++i) out.push_back(g(r, i));
    return out;
}

std::string ell_text(unsigned l) { return l == kInfiniteOrder ? "inf" : std::to_string(l); }

// ------------------------------------------------------------------ criteria

void units(Tally& t) {
    Rng rng(101);
    for (std::size_t i = 0; i < 200; ++i) {
        PolyRing r = i % 2 ? ring_p(5, {"x"}) : ring_q({"x"});
        if (i % 4 >= 2) r = i % 2 ? ring_p(5, {"x", "y"}) : ring_q({"x", "y"});
        CoIdeal trunc = tdeg("s", 1 + rng.below(2), rng.between(1, 4));
        Series u = random_unit(r, trunc, rng);
        Series rec = invert_recursive(u), par = invert_partition(u);
        std::string at = "unit " + std::to_string(i);
        t.expect(rec == par, at + ": partition vs recursion");
        t.expect(brute::product(u, rec) == Series::one(r, trunc), at + ": r r* = 1");
        t.expect(brute::product(rec, u) == Series::one(r, trunc), at + ": r* r = 1");
    }
}

void coefficients(Tally& t) {
    Rng rng(102);
    for (std::size_t i = 0; i < 500; ++i) {
        PolyRing r = ring_by_index(i);
        unsigned m = rng.between(1, 4);
        CoIdeal src = tdeg("s", 1 + rng.below(2), m), dst = tdeg("t", 1 + rng.below(2), m);
        SubstMap phi = random_subst(r, src, dst, rng);
        const MultiIndex& alpha = pick(src, rng);
        const MultiIndex& e = pick(dst, rng);
        Poly got = phi.coeff(alpha, e);
        std::string at = "case " + std::to_string(i) + " alpha=" + to_string(alpha) + " e=" + to_string(e);
        t.expect(got == direct_C(phi, alpha, e), at + ": direct_C");
        t.expect(got == brute::C(phi, alpha, e), at + ": schoolbook expansion");
    }
}

void composition(Tally& t) {
    Rng rng(103);
    for (std::size_t i = 0; i < 200; ++i) {
        PolyRing r = ring_by_index(i);
        unsigned m = rng.between(1, 3);
        CoIdeal s = tdeg("s", 1 + rng.below(2), m), tt = tdeg("t", 1 + rng.below(2), m), u = tdeg("u", 1 + rng.below(2), m);
        SubstMap phi = random_subst(r, s, tt, rng), psi = random_subst(r, tt, u, rng);
        SubstMap comp = compose(psi, phi);
        std::string at = "pair " + std::to_string(i);
        for (const auto& f : u.members())
            for (const auto& alpha : s.members()) {
                Poly expected(r);
                for (const auto& e : tt.members()) expected += brute::C(phi, alpha, e) * brute::C(psi, e, f);
                t.expect(comp.coeff(alpha, f) == expected, at + " f=" + to_string(f) + " alpha=" + to_string(alpha));
            }
        t.expect(compose(psi, SubstMap::trivial(r, s, tt)) == SubstMap::trivial(r, s, u), at + ": psi o 0");
        t.expect(compose(SubstMap::trivial(r, tt, u), phi) == SubstMap::trivial(r, s, u), at + ": 0 o phi");
    }
}

void multiplicativity(Tally& t) {
    Rng rng(104);
    for (std::size_t i = 0; i < 100; ++i) {
        PolyRing r = ring_by_index(i);
        unsigned m = rng.between(2, 3);
        CoIdeal src = tdeg("s", 1 + rng.below(2), m), dst = tdeg("t", 1 + rng.below(2), m);
        SubstMap phi = random_subst(r, src, dst, rng);
        CoeffTable table = coeff_table(phi);
        std::string at = "map " + std::to_string(i);
        t.expect(check_multiplicativity_table(table), at + ": forward");
        SubstMap rebuilt = subst_from_table(table);
        t.expect(rebuilt == phi, at + ": rebuilt map");
        for (int j = 0; j < 20; ++j) {
            Series a = random_series(r, src, rng);
            t.expect(apply_table(table, a) == brute::apply(phi, a), at + ": table vs apply");
            t.expect(apply(rebuilt, a) == brute::apply(phi, a), at + ": rebuilt vs apply");
        }
        // Perturb an entry with |α| ≥ 2, which the criterion determines from lower entries.
        CoeffTable bad = table;
        bool done = false;
        for (const auto& e : dst.members()) {
            for (const auto& alpha : src.members())
                if (alpha.norm() >= 2 && alpha.norm() <= e.norm()) {
                    bad.set(e, alpha, bad.at(e, alpha) + one(r));
                    done = true;
                    break;
                }
            if (done) break;
        }
        t.expect(done && !check_multiplicativity_table(bad), at + ": perturbed table accepted");
    }
}

void hs_group(Tally& t) {
    Rng rng(105);
    for (std::size_t i = 0; i < 60; ++i) {
        PolyRing r = ring_by_index(i);
        CoIdeal trunc = tdeg("s", 1 + rng.below(2), rng.between(1, 3));
        HSDeriv d = random_hs(r, trunc, rng), e = random_hs(r, trunc, rng), f = random_hs(r, trunc, rng);
        HSDeriv dinv = invert(d);
        HSDeriv id = HSDeriv::identity(r, trunc);
        std::string at = "instance " + std::to_string(i);
        t.expect(compose(d, dinv) == id, at + ": D o D*");
        t.expect(compose(dinv, d) == id, at + ": D* o D");
        t.expect(compose(compose(d, e), f) == compose(d, compose(e, f)), at + ": associativity");

        Poly a = random_poly(r, rng), b = random_poly(r, rng), w = random_poly(r, rng, 1);
        HSDeriv de = compose(d, e);
        for (const auto& alpha : trunc.members()) {
            Poly leibniz(r), dual(r), composite(r);
            for (const auto& beta : below(alpha)) {
                MultiIndex gamma = alpha - beta;
                leibniz += brute::component(d, beta, a) * brute::component(d, gamma, b);
                dual += brute::component(d, beta, brute::component(dinv, gamma, a) * w);
                composite += brute::component(d, beta, brute::component(e, gamma, w));
            }
            std::string where = at + " alpha=" + to_string(alpha);
            t.expect(brute::component(d, alpha, a * b) == leibniz, where + ": Leibniz");
            t.expect(a * brute::component(d, alpha, w) == dual, where + ": dual Leibniz");
            t.expect(brute::component(de, alpha, w) == composite, where + ": composition components");
            Poly inv = brute::inverse_component(d, alpha, w);
            t.expect(component(dinv, alpha, w) == inv, where + ": partition inverse");
            t.expect(hs_inverse_partition(d, alpha, w) == inv, where + ": library partition inverse");
            if (alpha.is_zero()) continue;
            bool odd = alpha.norm() % 2;
            Operator symbol = [&](const Poly& x) {
                Poly p = component(dinv, alpha, x);
                return odd ? p + component(d, alpha, x) : p - component(d, alpha, x);
            };
            t.expect(op_order_at_most(symbol, static_cast<int>(alpha.norm()) - 1, standard_witnesses(r, alpha.norm()),
                                      generators(r)),
                     where + ": order drop");
        }
    }
}

void ell_calculus(Tally& t) {
    Rng rng(106);
    for (std::size_t i = 0; i < 100; ++i) {
        PolyRing r = ring_by_index(i);
        unsigned m = rng.between(1, 4);
        CoIdeal trunc = tdeg("s", 1 + rng.below(2), m);
        HSDeriv d = random_hs(r, trunc, rng, 60, rng.between(1, m)), e = random_hs(r, trunc, rng, 60, rng.between(1, m));
        unsigned ld = brute::ell(d), le = brute::ell(e);
        std::string at = "pair " + std::to_string(i) + " ell=" + ell_text(ld) + "," + ell_text(le);
        t.expect(ell(d) == ld && ell(e) == le, at + ": library ell");
        unsigned lde = brute::ell(compose(d, e));
        t.expect(lde >= std::min(ld, le), at + ": subadditivity");
        if (le > ld) t.expect(lde == ld, at + ": strict case");
        if (ld > le) t.expect(lde == le, at + ": strict case (swapped)");
        unsigned lc = brute::ell(commutator(d, e));
        unsigned long long bound = static_cast<unsigned long long>(ld) + le;
        t.expect(lc == kInfiniteOrder || lc >= bound, at + ": commutator bound");
    }
    for (std::size_t i = 0; i < 30; ++i) {
        PolyRing r = ring_by_index(i);
        CoIdeal t3 = tdeg("s", 1 + i % 2, 3);
        HSDeriv c = random_hs(r, t3, rng);
        for (int j = 0; j < 3; ++j) c = commutator(c, random_hs(r, t3, rng));
        t.expect(c == HSDeriv::identity(r, t3), "nilpotency " + std::to_string(i));
    }
}

void phi_upper(Tally& t) {
    Rng rng(107);
    for (std::size_t i = 0; i < 100; ++i) {
        PolyRing r = ring_by_index(i);
        unsigned m = rng.between(1, 3);
        CoIdeal s = tdeg("s", 1 + rng.below(2), m), tt = tdeg("t", 1 + rng.below(2), m), u = tdeg("u", 1 + rng.below(2), m);
        SubstMap phi = random_subst(r, s, tt, rng), chi = random_subst(r, tt, u, rng);
        HSDeriv d = random_hs(r, s, rng), e = random_hs(r, s, rng);
        SubstMap up = phi_upper_D(phi, d);
        HSDeriv acted = act(phi, d);
        std::string at = "instance " + std::to_string(i);
        for (int j = 0; j < 3; ++j) {
            Series f = random_series(r, s, rng);
            t.expect(tilde_apply(acted, brute::apply(up, f)) == brute::apply(phi, tilde_apply(d, f)),
                     at + ": defining identity");
        }
        t.expect(invert(acted) == act(up, invert(d)), at + ": inverse");
        t.expect(act(phi, compose(d, e)) == compose(acted, act(up, e)), at + ": composition");
        t.expect(phi_upper_D(compose(chi, phi), d) == compose(phi_upper_D(chi, acted), up), at + ": cocycle");
        SubstMap constant = random_constant_subst(r, s, tt, rng);
        t.expect(phi_upper_D(constant, d) == constant, at + ": constant fixed point");
        CoeffTable rec = phiD_recursive_table(phi, d);
        for (const auto& eidx : tt.members())
            for (const auto& nu : s.members())
                if (nu.norm() <= eidx.norm())
                    t.expect(rec.at(eidx, nu) == brute::C(up, nu, eidx), at + ": recursion at " + to_string(eidx));
    }
}

void generation(Tally& t) {
    Rng rng(108);
    for (std::size_t i = 0; i < 40; ++i) {
        PolyRing r = ring_by_index(i);
        unsigned m = rng.between(1, 3);
        CoIdeal s = tdeg("s", 1 + rng.below(2), m), tt = tdeg("t", 1 + rng.below(2), m);
        SubstMap phi = random_subst(r, s, tt, rng);
        HSDeriv d = random_hs(r, s, rng);
        TopLawReport report = top_action_law(phi, d, standard_witnesses(r, m));
        t.expect(report.ok(), "top law " + std::to_string(i));
        TopSplit parts = split_top(phi);
        HSDeriv top = act(parts.top, d);
        for (const auto& e : tt.members()) {
            if (e.is_zero() || e.norm() == m) continue;
            for (const Poly& w : brute::monomials(r, 2))
                t.expect(brute::component(top, e, w).is_zero(), "top law low component " + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < 100; ++i) {
        bool prime = i % 2;
        PolyRing r = prime ? ring_p(5, {"x"}) : ring_q({"x", "y"});
        unsigned m = rng.between(1, 3);
        HSDeriv d = canonical_hs(r, m);
        CoIdeal tt = tdeg("t", 1 + rng.below(2), m);
        HSDeriv target = random_hs(r, tt, rng);
        std::string at = "round trip " + std::to_string(i);
        SubstMap phi = generate_subst({d, target});
        HSDeriv back = act(phi, d);
        t.expect(back == target, at);
        for (const auto& e : tt.members())
            for (const Poly& w : brute::monomials(r, 2)) {
                Poly sum(r);
                for (const auto& alpha : d.trunc().members())
                    sum += brute::C(phi, alpha, e) * brute::component(d, alpha, w);
                t.expect(sum == brute::component(target, e, w), at + ": component law");
            }
        SubstMap other = random_subst(r, d.trunc(), tt, rng);
        t.expect(generate_subst({d, act(other, d)}) == other, at + ": regeneration fixed point");
        t.expect(verify_uniqueness(d, phi, other), at + ": uniqueness");
    }
    for (std::size_t i = 0; i < 40; ++i) {
        PolyRing r = ring_by_index(i);
        unsigned n = rng.between(1, 2);
        HSDeriv small = random_hs(r, tdeg("t", 1 + rng.below(2), n), rng);
        HSDeriv big = integrate(small, n + rng.between(1, 2));
        t.expect(truncate(big, small.trunc()) == small, "integration " + std::to_string(i));
    }
}

void iterativity(Tally& t) {
    for (std::size_t n = 1; n <= 2; ++n)
        for (unsigned m = 1; m <= 4; ++m)
            for (bool prime : {false, true}) {
                PolyRing r = prime ? ring_p(5, n == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"})
                                   : ring_q(n == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"});
                HSDeriv d = canonical_hs(r, m);
                std::string at = "canonical n=" + std::to_string(n) + " m=" + std::to_string(m) + (prime ? " GF(5)" : " Q");
                t.expect(is_iterative(d), at);
                // D_α∘D_β = C(α+β, α) D_{α+β} on witnesses, whenever α+β is in the truncation.
                for (const auto& alpha : d.trunc().members())
                    for (const auto& beta : d.trunc().members()) {
                        MultiIndex sum = alpha + beta;
                        if (!d.trunc().contains(sum)) continue;
                        long long binom = 1;
                        for (std::size_t v = 0; v < sum.size(); ++v)
                            for (unsigned j = 1; j <= alpha[v]; ++j) binom = binom * (sum[v] - alpha[v] + j) / j;
                        for (const Poly& w : brute::monomials(r, m + 1))
                            t.expect(brute::component(d, alpha, brute::component(d, beta, w)) ==
                                         k(r, binom) * brute::component(d, sum, w),
                                     at + ": composition rule");
                    }
            }
    PolyRing r = ring_q();
    CoIdeal t2 = tdeg("s", 1, 2);
    VarSet v = t2.vars();
    HSDeriv bad(r, t2, {ser(r, t2, {{MultiIndex(v), g(r, 0)}, {mi(v, {{"s", 1}}), one(r)}, {mi(v, {{"s", 2}}), one(r)}})});
    t.expect(!is_iterative(bad), "x + s + s^2 reported iterative");
}

struct CliOutcome {
    int code;
    std::string out;
};

CliOutcome cli_run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = cli::run(args, in, out, err);
    return {code, out.str()};
}

void cli_checks(Tally& t) {
    Rng rng(110);
    PolyRing r = ring_q({"x", "y"});
    PolyRing p = ring_p(5, {"x"});
    CoIdeal s = tdeg("s", 2, 2), tt = tdeg("t", 1, 2);
    std::vector<io::Document> docs{random_poly(r, rng), random_series(r, s, rng), random_subst(r, s, tt, rng),
                                   random_hs(r, s, rng), io::Universe{r, s}, random_hs(p, tt, rng),
                                   random_unit(p, tt, rng)};
    for (std::size_t i = 0; i < docs.size(); ++i) {
        std::string text = io::dump(io::document_to_json(docs[i]));
        CliOutcome o = cli_run({"echo"}, text);
        t.expect(o.code == 0 && o.out == text + "\n", "round trip " + std::to_string(i));
        t.expect(io::dump(io::document_to_json(io::parse_document(text))) == text, "library round trip " + std::to_string(i));
    }
    auto two = [](const io::Document& a, const io::Document& b) {
        io::Json arr = io::Json::array();
        arr.push_back(io::document_to_json(a));
        arr.push_back(io::document_to_json(b));
        return io::dump(arr);
    };
    std::vector<std::pair<std::vector<std::string>, std::string>> calls{
        {{"hs", "act"}, two(docs[2], docs[3])},
        {{"hs", "invert"}, io::dump(io::document_to_json(docs[3]))},
        {{"series", "invert", "--partition"}, io::dump(io::document_to_json(docs[6]))},
        {{"subst", "table"}, io::dump(io::document_to_json(docs[2]))},
        {{"random", "--kind", "subst", "--seed", "9", "--m", "3", "--gens", "x,y", "--vars", "s1,s2"}, ""},
        {{"selfcheck", "--seed", "0"}, ""},
    };
    for (const auto& [args, input] : calls) {
        CliOutcome a = cli_run(args, input), b = cli_run(args, input);
        t.expect(a.code == 0 && a.out == b.out && !a.out.empty(), "determinism: " + args[0] + " " + args[1]);
    }
    t.expect(cli_run({"selfcheck", "--seed", "0"}).code == 0, "selfcheck --seed 0");
    t.expect(cli_run({"selfcheck", "--seed", "0", "--perturb"}).code == 3, "selfcheck --perturb");
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        void (*run)(Tally&);
    };
    const Criterion criteria[] = {
        {"1 unit inverse formula", units},
        {"2 coefficient formula", coefficients},
        {"3 composition law", composition},
        {"4 multiplicativity criterion", multiplicativity},
        {"5 HS group", hs_group},
        {"6 ell calculus", ell_calculus},
        {"7 twisted map suite", phi_upper},
        {"8 generation suite", generation},
        {"9 iterativity", iterativity},
        {"10 command line", cli_checks},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Tally t;
        auto start = std::chrono::steady_clock::now();
        std::string crash;
        try {
            c.run(t);
        } catch (const std::exception& e) {
            crash = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = t.ok() && crash.empty();
        std::printf("%s criterion %s: %zu checks, %zu failed, %.2f s\n", ok ? "PASS" : "FAIL", c.name, t.checks, t.failed,
                    secs);
        for (const auto& f : t.failures) std::printf("    %s\n", f.c_str());
        if (!crash.empty()) std::printf("    exception: %s\n", crash.c_str());
        if (!ok) ++failed;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
