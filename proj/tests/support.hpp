#pragma once

// Test-side helpers and brute-force reference computations. The reference code here only uses
// public data accessors and plain polynomial arithmetic, never the library's series or
// substitution algorithms.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hsforge/error.hpp"
#include "hsforge/generate.hpp"
#include "hsforge/oracle.hpp"
#include "hsforge/random.hpp"

namespace test {

using namespace hsforge;

inline PolyRing ring_q(std::vector<std::string> gens = {"x"}) { return PolyRing(Field::rationals(), std::move(gens)); }
inline PolyRing ring_p(std::uint64_t p, std::vector<std::string> gens = {"x"}) {
    return PolyRing(Field::prime(p), std::move(gens));
}
inline Poly k(const PolyRing& r, long long c) { return Poly::constant(r, c); }
inline Poly g(const PolyRing& r, std::size_t i) { return Poly::gen(r, i); }

inline MultiIndex mi(const VarSet& vars, std::initializer_list<std::pair<std::string_view, MultiIndex::exponent_type>> e) {
    return MultiIndex(vars, e);
}

inline Series ser(const PolyRing& r, const CoIdeal& trunc, std::vector<std::pair<MultiIndex, Poly>> terms) {
    Series out(r, trunc);
    for (auto& [a, c] : terms) out.add_to_coeff(a, c);
    return out;
}

inline CoIdeal tdeg(const std::string& prefix, std::size_t n, unsigned m) {
    if (n == 1) return CoIdeal::tm(VarSet({prefix}), m);
    return CoIdeal::tm(numbered_vars(prefix, n), m);
}

namespace brute {

using Exp = std::vector<MultiIndex::exponent_type>;
using Dense = std::map<Exp, Poly>;

inline Dense dense(const Series& s) {
    Dense out;
    for (const auto& [a, c] : s.terms()) out.emplace(Exp(a.exponents().begin(), a.exponents().end()), c);
    return out;
}

// Schoolbook product keeping only exponents accepted by `keep`.
inline Dense mul(const Dense& a, const Dense& b, const std::function<bool(const Exp&)>& keep) {
    Dense out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exp e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            if (!keep(e)) continue;
            auto it = out.find(e);
            if (it == out.end())
                out.emplace(e, ca * cb);
            else
                it->second += ca * cb;
        }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

inline Dense unit(std::size_t nvars, const PolyRing& r) { return Dense{{Exp(nvars, 0), k(r, 1)}}; }

inline std::function<bool(const Exp&)> inside(const CoIdeal& trunc) {
    return [trunc](const Exp& e) { return trunc.contains(MultiIndex(trunc.vars(), e)); };
}

inline Series to_series(const Dense& d, const PolyRing& r, const CoIdeal& trunc) {
    Series out(r, trunc);
    for (const auto& [e, c] : d)
        if (trunc.contains(MultiIndex(trunc.vars(), e))) out.add_to_coeff(MultiIndex(trunc.vars(), e), c);
    return out;
}

// Truncated product of two series over the same universe.
inline Series product(const Series& a, const Series& b) {
    return to_series(mul(dense(a), dense(b), inside(a.trunc())), a.ring(), a.trunc());
}

// C_e(φ, α): expand Π φ(s_i)^{α_i}, discarding exponents not below e.
inline Poly C(const SubstMap& phi, const MultiIndex& alpha, const MultiIndex& e) {
    const PolyRing& r = phi.ring();
    auto below_e = [&](const Exp& x) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] > e[i]) return false;
        return true;
    };
    Dense acc = unit(e.size(), r);
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (unsigned p = 0; p < alpha[i]; ++p) acc = mul(acc, dense(phi.image(i)), below_e);
    auto it = acc.find(Exp(e.exponents().begin(), e.exponents().end()));
    return it == acc.end() ? Poly(r) : it->second;
}

inline Series apply(const SubstMap& phi, const Series& a) {
    Series out(phi.ring(), phi.dst());
    for (const auto& [alpha, c] : a.terms())
        for (const auto& e : phi.dst().members()) {
            Poly v = C(phi, alpha, e);
            if (!v.is_zero()) out.add_to_coeff(e, c * v);
        }
    return out;
}

// a(images) in A[[s]]_Δ by substituting x_i ↦ images[i] term by term.
inline Series eval(const Poly& a, const std::vector<Series>& images, const PolyRing& r, const CoIdeal& trunc) {
    Dense out;
    const auto keep = inside(trunc);
    for (const auto& [m, c] : a.terms()) {
        Dense term = unit(trunc.vars().size(), r);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (unsigned p = 0; p < m[i]; ++p) term = mul(term, dense(images[i]), keep);
        for (auto& [e, v] : term) {
            Poly add = v.scaled(c);
            auto it = out.find(e);
            if (it == out.end())
                out.emplace(e, add);
            else
                it->second += add;
        }
    }
    return to_series(out, r, trunc);
}

inline Poly component(const HSDeriv& d, const MultiIndex& alpha, const Poly& a) {
    return eval(a, d.images(), d.ring(), d.trunc()).coeff(alpha);
}

// Ordered d-tuples of nonzero multi-indices summing to alpha, by recursion on the first part.
inline void tuples(const MultiIndex& alpha, std::size_t d, std::vector<MultiIndex>& prefix,
                   std::vector<std::vector<MultiIndex>>& out) {
    if (d == 0) {
        if (alpha.is_zero()) out.push_back(prefix);
        return;
    }
    for (const auto& first : below(alpha)) {
        if (first.is_zero()) continue;
        prefix.push_back(first);
        tuples(alpha - first, d - 1, prefix, out);
        prefix.pop_back();
    }
}

inline std::vector<std::vector<MultiIndex>> ordered_partitions(const MultiIndex& alpha, std::size_t d) {
    std::vector<std::vector<MultiIndex>> out;
    std::vector<MultiIndex> prefix;
    tuples(alpha, d, prefix, out);
    return out;
}

// D*_α(a) = Σ_d (-1)^d Σ_{ordered partitions} D_{α¹}∘…∘D_{α^d}(a).
inline Poly inverse_component(const HSDeriv& d, const MultiIndex& alpha, const Poly& a) {
    if (alpha.is_zero()) return a;
    Poly out(d.ring());
    for (std::size_t parts = 1; parts <= alpha.norm(); ++parts)
        for (const auto& tuple : ordered_partitions(alpha, parts)) {
            Poly v = a;
            for (auto it = tuple.rbegin(); it != tuple.rend(); ++it) v = brute::component(d, *it, v);
            if (parts % 2) out -= v; else out += v;
        }
    return out;
}

// Least norm of a nonzero component on the generators; kInfiniteOrder if none.
inline unsigned ell(const HSDeriv& d) {
    unsigned best = kInfiniteOrder;
    for (const auto& alpha : d.trunc().members()) {
        if (alpha.is_zero()) continue;
        for (std::size_t i = 0; i < d.ring().ngens(); ++i)
            if (!brute::component(d, alpha, g(d.ring(), i)).is_zero()) best = std::min(best, alpha.norm());
    }
    return best;
}

// All monomials of total degree ≤ deg.
inline std::vector<Poly> monomials(const PolyRing& r, unsigned deg) {
    std::vector<Poly> out;
    std::vector<Monomial> frontier{Monomial(r.ngens(), 0)};
    std::map<Monomial, bool, MonomialLess> seen;
    while (!frontier.empty()) {
        Monomial m = frontier.back();
        frontier.pop_back();
        if (seen.count(m)) continue;
        seen[m] = true;
        out.push_back(Poly::monomial(r, m, Scalar(r.field(), 1)));
        unsigned total = 0;
        for (auto e : m) total += e;
        if (total == deg) continue;
        for (std::size_t i = 0; i < m.size(); ++i) {
            Monomial next = m;
            ++next[i];
            frontier.push_back(next);
        }
    }
    return out;
}

} // namespace brute

} // namespace test
