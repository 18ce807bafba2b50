#include "hsforge/series.hpp"

#include <algorithm>

#include "hsforge/error.hpp"

namespace hsforge {

namespace {

void require_compatible(const Series& a, const Series& b) {
    if (!(a.ring() == b.ring())) throw precondition_error("series ring mismatch");
    if (!(a.trunc() == b.trunc())) throw precondition_error("series universe mismatch");
}

} // namespace

Series::Series(PolyRing ring, CoIdeal trunc) : ring_(std::move(ring)), trunc_(std::move(trunc)) {
    for (const auto& g : ring_.gens())
        if (trunc_.vars().contains(g)) throw precondition_error("series variable clashes with generator " + g);
}

Series::Series(PolyRing ring, CoIdeal trunc, Unchecked) : ring_(std::move(ring)), trunc_(std::move(trunc)) {}

Series Series::constant(const PolyRing& ring, const CoIdeal& trunc, const Poly& c) {
    return monomial(ring, trunc, MultiIndex(trunc.vars()), c);
}

Series Series::one(const PolyRing& ring, const CoIdeal& trunc) {
    return constant(ring, trunc, Poly::constant(ring, 1));
}

Series Series::monomial(const PolyRing& ring, const CoIdeal& trunc, const MultiIndex& alpha, const Poly& c) {
    Series s(ring, trunc);
    if (trunc.contains(alpha) && !c.is_zero()) s.terms_.emplace(alpha, c);
    return s;
}

Poly Series::coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Poly(ring_) : it->second;
}

Poly Series::constant_term() const { return coeff(MultiIndex(vars())); }

unsigned Series::order() const { return terms_.empty() ? kInfiniteOrder : terms_.begin()->first.norm(); }

void Series::set_coeff(const MultiIndex& alpha, Poly c) {
    if (!trunc_.contains(alpha)) throw precondition_error("index outside the truncation");
    if (!(c.ring() == ring_)) throw precondition_error("series ring mismatch");
    if (c.is_zero())
        terms_.erase(alpha);
    else
        terms_.insert_or_assign(alpha, std::move(c));
}

void Series::add_to_coeff(const MultiIndex& alpha, const Poly& c) {
    if (c.is_zero()) return;
    if (!trunc_.contains(alpha)) throw precondition_error("index outside the truncation");
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Series Series::operator-() const {
    Series out(ring_, trunc_, Unchecked{});
    for (const auto& [a, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), a, -c);
    return out;
}

Series& Series::operator+=(const Series& o) {
    require_compatible(*this, o);
    for (const auto& [a, c] : o.terms_) add_to_coeff(a, c);
    return *this;
}

Series& Series::operator-=(const Series& o) {
    require_compatible(*this, o);
    for (const auto& [a, c] : o.terms_) add_to_coeff(a, -c);
    return *this;
}

Series Series::scaled(const Poly& c) const {
    Series out(ring_, trunc_, Unchecked{});
    if (c.is_zero()) return out;
    for (const auto& [a, v] : terms_) {
        Poly p = v * c;
        if (!p.is_zero()) out.terms_.emplace_hint(out.terms_.end(), a, std::move(p));
    }
    return out;
}

Series Series::shifted(const MultiIndex& alpha) const {
    Series out(ring_, trunc_, Unchecked{});
    const unsigned cap = trunc_.max_norm();
    const unsigned n = alpha.norm();
    for (const auto& [a, v] : terms_) {
        if (a.norm() + n > cap) break;
        MultiIndex b = a + alpha;
        if (trunc_.contains(b)) out.terms_.emplace(std::move(b), v);
    }
    return out;
}

Series operator*(const Series& a, const Series& b) {
    require_compatible(a, b);
    Series out(a.ring_, a.trunc_, Series::Unchecked{});
    const unsigned cap = a.trunc_.max_norm();
    for (const auto& [x, cx] : a.terms_) {
        const unsigned nx = x.norm();
        for (const auto& [y, cy] : b.terms_) {
            if (nx + y.norm() > cap) break;
            MultiIndex z = x + y;
            if (a.trunc_.contains(z)) out.add_to_coeff(z, cx * cy);
        }
    }
    return out;
}

bool operator==(const Series& a, const Series& b) {
    require_compatible(a, b);
    return a.terms_ == b.terms_;
}

Series truncate(const Series& a, const CoIdeal& target) {
    if (!(a.vars() == target.vars())) throw precondition_error("truncation over different variables");
    Series out(a.ring(), target, Series::Unchecked{});
    for (const auto& [x, c] : a.terms())
        if (target.contains(x)) out.terms_.emplace_hint(out.terms_.end(), x, c);
    return out;
}

Series pow(const Series& a, unsigned e) {
    Series result = Series::one(a.ring(), a.trunc());
    for (unsigned i = 0; i < e; ++i) {
        result = result * a;
        if (result.is_zero()) break;
    }
    return result;
}

bool is_unit(const Series& a) {
    Poly c = a.constant_term();
    return !c.is_zero() && c.is_constant();
}

Series invert_recursive(const Series& a) {
    if (!is_unit(a)) throw precondition_error("series is not a unit");
    const PolyRing& ring = a.ring();
    const Scalar a0_inv = a.constant_term().constant_term().inverse();
    Series r(ring, a.trunc());
    const MultiIndex zero(a.vars());
    r.set_coeff(zero, Poly::constant(ring, a0_inv));
    for (const auto& alpha : a.trunc().members()) {
        if (alpha.is_zero()) continue;
        Poly acc(ring);
        for (const auto& [beta, ab] : a.terms()) {
            if (beta.is_zero()) continue;
            if (beta.norm() > alpha.norm()) break;
            if (!leq(beta, alpha)) continue;
            auto it = r.terms().find(alpha - beta);
            if (it != r.terms().end()) acc += ab * it->second;
        }
        r.set_coeff(alpha, acc.scaled(-a0_inv));
    }
    return r;
}

Series invert_partition(const Series& a) {
    const PolyRing& ring = a.ring();
    if (!(a.constant_term() == Poly::constant(ring, 1)))
        throw precondition_error("partition inverse needs constant term 1");
    Series r(ring, a.trunc());
    r.set_coeff(MultiIndex(a.vars()), Poly::constant(ring, 1));
    for (const auto& alpha : a.trunc().members()) {
        if (alpha.is_zero()) continue;
        Poly total(ring);
        for (std::size_t d = 1; d <= alpha.norm(); ++d) {
            Poly sum(ring);
            for_each_ordered_partition(alpha, d, [&](std::span<const MultiIndex> parts) {
                Poly prod = Poly::constant(ring, 1);
                for (const auto& p : parts) {
                    auto it = a.terms().find(p);
                    if (it == a.terms().end()) return;
                    prod *= it->second;
                }
                sum += prod;
            });
            if (d % 2) total -= sum;
            else total += sum;
        }
        r.set_coeff(alpha, std::move(total));
    }
    return r;
}

Series external_product(const Series& a, const Series& b) {
    if (!(a.ring() == b.ring())) throw precondition_error("series ring mismatch");
    CoIdeal trunc = product(a.trunc(), b.trunc());
    Series out(a.ring(), trunc);
    for (const auto& [x, cx] : a.terms())
        for (const auto& [y, cy] : b.terms()) out.set_coeff(concat(trunc.vars(), x, y), cx * cy);
    return out;
}

Series include(const Series& a, const CoIdeal& target) {
    Series out(a.ring(), target);
    for (const auto& [x, c] : a.terms()) {
        MultiIndex y = relabel(x, target.vars());
        if (target.contains(y)) out.set_coeff(y, c);
    }
    return out;
}

} // namespace hsforge
