#include "hsforge/hsderiv.hpp"

#include <algorithm>

#include "hsforge/error.hpp"

namespace hsforge {

namespace {

void require_same_universe(const HSDeriv& a, const HSDeriv& b) {
    if (!(a.ring() == b.ring()) || !(a.trunc() == b.trunc()))
        throw precondition_error("HS-derivations over different universes");
}

Series x_series(const PolyRing& ring, const CoIdeal& trunc, std::size_t i) {
    return Series::constant(ring, trunc, Poly::gen(ring, i));
}

} // namespace

HSDeriv::HSDeriv(PolyRing ring, CoIdeal trunc, std::vector<Series> images)
    : ring_(std::move(ring)), trunc_(std::move(trunc)), images_(std::move(images)) {
    if (images_.size() != ring_.ngens()) throw precondition_error("one image per ring generator required");
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (!(images_[i].ring() == ring_) || !(images_[i].trunc() == trunc_))
            throw precondition_error("HS-derivation image outside its universe");
        if (!(images_[i].constant_term() == Poly::gen(ring_, i)))
            throw validation_error("constant term of the image of " + ring_.gen(i) + " must be " + ring_.gen(i));
    }
}

HSDeriv HSDeriv::identity(const PolyRing& ring, const CoIdeal& trunc) {
    std::vector<Series> images;
    for (std::size_t i = 0; i < ring.ngens(); ++i) images.push_back(x_series(ring, trunc, i));
    return HSDeriv(ring, trunc, std::move(images));
}

bool operator==(const HSDeriv& a, const HSDeriv& b) {
    return a.ring_ == b.ring_ && a.trunc_ == b.trunc_ && a.images_ == b.images_;
}

Series phi_apply(const HSDeriv& d, const Poly& a) {
    if (!(a.ring() == d.ring())) throw precondition_error("polynomial over the wrong ring");
    const PolyRing& ring = d.ring();
    Series out(ring, d.trunc());
    std::vector<std::vector<Series>> powers(ring.ngens());
    auto power = [&](std::size_t i, unsigned k) -> const Series& {
        auto& p = powers[i];
        if (p.empty()) p.push_back(Series::one(ring, d.trunc()));
        while (p.size() <= k) p.push_back(p.back() * d.image(i));
        return p[k];
    };
    for (const auto& [m, c] : a.terms()) {
        Series term = Series::constant(ring, d.trunc(), Poly::constant(ring, c));
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) term = term * power(i, m[i]);
        out += term;
    }
    return out;
}

Poly component(const HSDeriv& d, const MultiIndex& alpha, const Poly& a) {
    if (!(alpha.vars() == d.vars())) throw precondition_error("component index over the wrong variables");
    return phi_apply(d, a).coeff(alpha);
}

Series tilde_apply(const HSDeriv& d, const Series& f) {
    if (!(f.ring() == d.ring()) || !(f.trunc() == d.trunc())) throw precondition_error("series outside the universe");
    Series out(d.ring(), d.trunc());
    for (const auto& [alpha, c] : f.terms()) out += phi_apply(d, c).shifted(alpha);
    return out;
}

HSDeriv compose(const HSDeriv& d, const HSDeriv& e) {
    require_same_universe(d, e);
    std::vector<Series> images;
    for (const auto& img : e.images()) images.push_back(tilde_apply(d, img));
    return HSDeriv(d.ring(), d.trunc(), std::move(images));
}

HSDeriv invert(const HSDeriv& d) {
    const PolyRing& ring = d.ring();
    const CoIdeal& trunc = d.trunc();
    std::vector<Series> images;
    for (std::size_t i = 0; i < ring.ngens(); ++i) {
        // f = Φ_{D*}(x_i) solves Σ_{β+γ=α} D_β(f_γ) = [α = 0] x_i, degree by degree.
        Series f(ring, trunc);
        Series acc(ring, trunc);  // acc_α = Σ_{β+γ=α, β≠0} D_β(f_γ) over the f_γ found so far
        auto absorb = [&](const MultiIndex& gamma, const Poly& fg) {
            const Series image = phi_apply(d, fg);
            for (const auto& [beta, c] : image.terms()) {
                if (beta.is_zero()) continue;
                MultiIndex alpha = beta + gamma;
                if (trunc.contains(alpha)) acc.add_to_coeff(alpha, c);
            }
        };
        const MultiIndex zero(d.vars());
        f.set_coeff(zero, Poly::gen(ring, i));
        absorb(zero, Poly::gen(ring, i));
        for (const auto& alpha : trunc.members()) {
            if (alpha.is_zero()) continue;
            Poly fa = -acc.coeff(alpha);
            if (fa.is_zero()) continue;
            f.set_coeff(alpha, fa);
            absorb(alpha, fa);
        }
        images.push_back(std::move(f));
    }
    return HSDeriv(ring, trunc, std::move(images));
}

unsigned ell(const HSDeriv& d) {
    unsigned best = kInfiniteOrder;
    for (std::size_t i = 0; i < d.ring().ngens(); ++i)
        best = std::min(best, (d.image(i) - x_series(d.ring(), d.trunc(), i)).order());
    return best;
}

HSDeriv commutator(const HSDeriv& d, const HSDeriv& e) {
    require_same_universe(d, e);
    return compose(compose(d, e), compose(invert(d), invert(e)));
}

HSDeriv external(const HSDeriv& d, const HSDeriv& e) {
    if (!(d.ring() == e.ring())) throw precondition_error("HS-derivations over different rings");
    const PolyRing& ring = d.ring();
    const Poly one = Poly::constant(ring, 1);
    CoIdeal trunc = product(d.trunc(), e.trunc());
    std::vector<Series> images;
    for (std::size_t i = 0; i < ring.ngens(); ++i) {
        Series img(ring, trunc);
        for (const auto& [beta, eb] : e.image(i).terms())
            img += external_product(phi_apply(d, eb), Series::monomial(ring, e.trunc(), beta, one));
        images.push_back(std::move(img));
    }
    return HSDeriv(ring, std::move(trunc), std::move(images));
}

HSDeriv truncate(const HSDeriv& d, const CoIdeal& target) {
    std::vector<Series> images;
    for (const auto& img : d.images()) images.push_back(truncate(img, target));
    return HSDeriv(d.ring(), target, std::move(images));
}

HSDeriv zero_extend(const HSDeriv& d, const CoIdeal& target) {
    if (!d.trunc().is_subset_of(target)) throw precondition_error("zero extension needs a larger truncation");
    std::vector<Series> images;
    for (const auto& img : d.images()) images.push_back(include(img, target));
    return HSDeriv(d.ring(), target, std::move(images));
}

HSDeriv act(const SubstMap& phi, const HSDeriv& d) {
    if (!(phi.src() == d.trunc()) || !(phi.ring() == d.ring()))
        throw precondition_error("substitution source does not match the HS-derivation");
    std::vector<Series> images;
    for (const auto& img : d.images()) images.push_back(phi.apply(img));
    return HSDeriv(d.ring(), phi.dst(), std::move(images));
}

HSDeriv scale(std::span<const Poly> a, const HSDeriv& d) {
    if (a.size() != d.vars().size()) throw precondition_error("one scaling factor per variable required");
    const PolyRing& ring = d.ring();
    std::vector<Series> images;
    for (const auto& img : d.images()) {
        Series out(ring, d.trunc());
        for (const auto& [alpha, c] : img.terms()) {
            Poly f = c;
            for (std::size_t s = 0; s < alpha.size(); ++s)
                if (alpha[s]) f *= a[s].pow(alpha[s]);
            out.set_coeff(alpha, std::move(f));
        }
        images.push_back(std::move(out));
    }
    return HSDeriv(ring, d.trunc(), std::move(images));
}

SubstMap d_of_phi(const HSDeriv& d, const SubstMap& phi) {
    if (!(phi.dst() == d.trunc()) || !(phi.ring() == d.ring()))
        throw precondition_error("HS-derivation does not act on the substitution target");
    std::vector<Series> images;
    for (const auto& img : phi.images()) images.push_back(tilde_apply(d, img));
    return SubstMap(phi.ring(), phi.src(), phi.dst(), std::move(images));
}

SubstMap phi_upper_D(const SubstMap& phi, const HSDeriv& d) { return d_of_phi(invert(act(phi, d)), phi); }

bool is_iterative(const HSDeriv& d) {
    const PolyRing& ring = d.ring();
    const VarSet& s = d.vars();
    std::vector<std::string> primed;
    std::map<std::string, std::string> to_primed;
    for (const auto& name : s.names()) {
        std::string p = name + "'";
        while (s.contains(p) || ring.gen_index(p) ||
               std::find(primed.begin(), primed.end(), p) != primed.end())
            p += "'";
        primed.push_back(p);
        to_primed[name] = p;
    }
    const VarSet doubled = disjoint_union(s, VarSet(primed));
    std::vector<MultiIndex> members;
    for (const auto& delta : d.trunc().members()) {
        for (const auto& beta : below(delta)) {
            std::vector<MultiIndex::exponent_type> e(doubled.size(), 0);
            const auto gamma = delta - beta;
            for (std::size_t i = 0; i < s.size(); ++i) e[i] = beta[i], e[s.size() + i] = gamma[i];
            members.emplace_back(doubled, std::move(e));
        }
    }
    const CoIdeal target = CoIdeal::from_members(doubled, members);
    const SubstMap iota = SubstMap::combinatorial(ring, d.trunc(), target);
    const SubstMap iota_primed = SubstMap::combinatorial(ring, d.trunc(), target, to_primed);
    return act(add(iota, iota_primed), d) == compose(act(iota, d), act(iota_primed, d));
}

const Series& PhiCache::phi(const Poly& a) {
    auto it = memo_.find(a);
    if (it == memo_.end()) it = memo_.emplace(a, phi_apply(d_, a)).first;
    return it->second;
}

namespace {

struct NestedCommutator {
    const Operator& op;
    std::map<Poly, Poly> memo;

    Poly apply(const Poly& w) {
        auto it = memo.find(w);
        if (it == memo.end()) it = memo.emplace(w, op(w)).first;
        return it->second;
    }
    // [[..[P,a_0],..],a_{k-1}](w)
    Poly eval(std::span<const Poly> mults, const Poly& w) {
        if (mults.empty()) return apply(w);
        const Poly& last = mults.back();
        auto rest = mults.first(mults.size() - 1);
        return eval(rest, last * w) - last * eval(rest, w);
    }
};

bool all_tuples_vanish(NestedCommutator& nc, std::span<const Poly> multipliers, std::size_t len,
                       std::span<const Poly> witnesses, std::vector<Poly>& cur, std::size_t start) {
    if (cur.size() == len) {
        for (const auto& w : witnesses)
            if (!nc.eval(cur, w).is_zero()) return false;
        return true;
    }
    // Multiplications commute, so nondecreasing tuples suffice.
    for (std::size_t i = start; i < multipliers.size(); ++i) {
        cur.push_back(multipliers[i]);
        bool ok = all_tuples_vanish(nc, multipliers, len, witnesses, cur, i);
        cur.pop_back();
        if (!ok) return false;
    }
    return true;
}

} // namespace

bool op_order_at_most(const Operator& p, int n, std::span<const Poly> witnesses, std::span<const Poly> multipliers) {
    if (n < -1) throw precondition_error("order bound below -1");
    NestedCommutator nc{p, {}};
    std::vector<Poly> cur;
    return all_tuples_vanish(nc, multipliers, static_cast<std::size_t>(n + 1), witnesses, cur, 0);
}

bool op_order_at_most(const OperatorHandle& h, int n, std::span<const Poly> witnesses) {
    const PolyRing& ring = h.deriv.ring();
    std::vector<Poly> defaults;
    if (witnesses.empty()) {
        defaults = standard_witnesses(ring, h.index.norm());
        witnesses = defaults;
    }
    std::vector<Poly> gens;
    for (std::size_t i = 0; i < ring.ngens(); ++i) gens.push_back(Poly::gen(ring, i));
    PhiCache cache(h.deriv);
    Operator op = [&](const Poly& a) { return cache.component(h.index, a); };
    return op_order_at_most(op, n, witnesses, gens);
}

std::vector<Poly> standard_witnesses(const PolyRing& ring, unsigned m) {
    std::vector<Poly> out;
    const VarSet gens(ring.gens());
    const CoIdeal box = CoIdeal::tm(gens, m + 2);
    for (const auto& e : box.members())
        out.push_back(Poly::monomial(ring, e.exponents(), Scalar(ring.field(), 1)));
    return out;
}

} // namespace hsforge
