#include "hsforge/substitution.hpp"

#include <mutex>

#include "hsforge/error.hpp"

namespace hsforge {

struct SubstMap::Cache {
    std::mutex mutex;
    std::map<std::pair<MultiIndex, MultiIndex>, Poly, IndexPairLess> coeffs;  // key (alpha, e)
    std::map<MultiIndex, Series, GrLexLess> monomials;
};

namespace {

void check_structure(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst, const std::vector<Series>& images) {
    if (images.size() != src.vars().size()) throw precondition_error("one image per source variable required");
    for (const auto& img : images) {
        if (!(img.ring() == ring)) throw precondition_error("image over the wrong ring");
        if (!(img.trunc() == dst)) throw precondition_error("image outside the target universe");
    }
}

} // namespace

bool validate(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst, const std::vector<Series>& images) {
    check_structure(ring, src, dst, images);
    for (const auto& img : images)
        if (!img.constant_term().is_zero()) return false;
    for (const auto& alpha : minimal_outside(src, dst.max_norm())) {
        Series prod = Series::one(ring, dst);
        for (std::size_t s = 0; s < alpha.size() && !prod.is_zero(); ++s)
            if (alpha[s]) prod = prod * pow(images[s], alpha[s]);
        if (!prod.is_zero()) return false;
    }
    return true;
}

SubstMap::SubstMap(PolyRing ring, CoIdeal src, CoIdeal dst, std::vector<Series> images)
    : ring_(std::move(ring)), src_(std::move(src)), dst_(std::move(dst)), images_(std::move(images)),
      cache_(std::make_shared<Cache>()) {
    for (const auto& img : images_)
        if (!img.constant_term().is_zero()) throw validation_error("substitution image has a constant term");
    if (!validate(ring_, src_, dst_, images_))
        throw validation_error("substitution map is not well defined on the source truncation");
}

SubstMap SubstMap::trivial(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst) {
    return SubstMap(ring, src, dst, std::vector<Series>(src.vars().size(), Series(ring, dst)));
}

SubstMap SubstMap::combinatorial(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst,
                                 const std::map<std::string, std::string>& renaming) {
    std::vector<Series> images;
    for (const auto& name : src.vars().names()) {
        auto it = renaming.find(name);
        const std::string& target = it == renaming.end() ? name : it->second;
        auto j = dst.vars().index_of(target);
        images.push_back(j ? Series::monomial(ring, dst, MultiIndex::unit(dst.vars(), *j), Poly::constant(ring, 1))
                           : Series(ring, dst));
    }
    return SubstMap(ring, src, dst, std::move(images));
}

Poly SubstMap::coeff(const MultiIndex& alpha, const MultiIndex& e) const {
    if (!(alpha.vars() == src_vars()) || !(e.vars() == dst_vars()))
        throw precondition_error("coefficient index over the wrong variables");
    if (!src_.contains(alpha) || !dst_.contains(e)) throw precondition_error("coefficient index outside the truncation");
    if (alpha.norm() > e.norm()) return Poly(ring_);
    const auto key = std::make_pair(alpha, e);
    {
        std::lock_guard lock(cache_->mutex);
        auto it = cache_->coeffs.find(key);
        if (it != cache_->coeffs.end()) return it->second;
    }
    // Sum over indexed partitions of e with slots [alpha] of Π c^{t}_{part}.
    const auto owners = slot_vars(alpha);
    Poly total(ring_);
    for_each_ordered_partition(e, owners.size(), [&](std::span<const MultiIndex> parts) {
        Poly prod = Poly::constant(ring_, 1);
        for (std::size_t k = 0; k < parts.size(); ++k) {
            const auto& terms = images_[owners[k]].terms();
            auto it = terms.find(parts[k]);
            if (it == terms.end()) return;
            prod *= it->second;
        }
        total += prod;
    });
    std::lock_guard lock(cache_->mutex);
    return cache_->coeffs.try_emplace(key, std::move(total)).first->second;
}

Series SubstMap::monomial_image(const MultiIndex& alpha) const {
    if (!(alpha.vars() == src_vars())) throw precondition_error("monomial over the wrong variables");
    if (!src_.contains(alpha)) return Series(ring_, dst_);
    {
        std::lock_guard lock(cache_->mutex);
        auto it = cache_->monomials.find(alpha);
        if (it != cache_->monomials.end()) return it->second;
    }
    Series result = Series::one(ring_, dst_);
    if (!alpha.is_zero()) {
        const std::size_t i = alpha.support().front();
        result = monomial_image(alpha - MultiIndex::unit(alpha.vars(), i)) * images_[i];
    }
    std::lock_guard lock(cache_->mutex);
    return cache_->monomials.try_emplace(alpha, std::move(result)).first->second;
}

Series SubstMap::apply(const Series& a) const {
    if (!(a.ring() == ring_) || !(a.trunc() == src_)) throw precondition_error("series outside the source universe");
    Series out(ring_, dst_);
    for (const auto& [alpha, c] : a.terms()) out += monomial_image(alpha).scaled(c);
    return out;
}

bool operator==(const SubstMap& a, const SubstMap& b) {
    return a.ring_ == b.ring_ && a.src_ == b.src_ && a.dst_ == b.dst_ && a.images_ == b.images_;
}

SubstMap compose(const SubstMap& psi, const SubstMap& phi) {
    if (!(phi.dst() == psi.src()) || !(phi.ring() == psi.ring()))
        throw precondition_error("substitution maps are not composable");
    std::vector<Series> images;
    for (const auto& img : phi.images()) images.push_back(psi.apply(img));
    return SubstMap(phi.ring(), phi.src(), psi.dst(), std::move(images));
}

SubstMap add(const SubstMap& phi, const SubstMap& psi) {
    if (!(phi.src() == psi.src()) || !(phi.dst() == psi.dst()) || !(phi.ring() == psi.ring()))
        throw precondition_error("substitution maps have different universes");
    std::vector<Series> images;
    for (std::size_t i = 0; i < phi.images().size(); ++i) images.push_back(phi.image(i) + psi.image(i));
    return SubstMap(phi.ring(), phi.src(), phi.dst(), std::move(images));
}

SubstMap tensor(const SubstMap& phi, const SubstMap& psi) {
    if (!(phi.ring() == psi.ring())) throw precondition_error("substitution maps over different rings");
    const PolyRing& ring = phi.ring();
    CoIdeal src = product(phi.src(), psi.src());
    CoIdeal dst = product(phi.dst(), psi.dst());
    const Series one_left = Series::one(ring, phi.dst());
    const Series one_right = Series::one(ring, psi.dst());
    std::vector<Series> images;
    for (const auto& img : phi.images()) images.push_back(external_product(img, one_right));
    for (const auto& img : psi.images()) images.push_back(external_product(one_left, img));
    return SubstMap(ring, std::move(src), std::move(dst), std::move(images));
}

CoIdeal power_coideal(const CoIdeal& src, std::span<const unsigned> nu) {
    std::vector<MultiIndex> members;
    IndexSet seen;
    for (const auto& alpha : src.members())
        for (auto& g : below(scale_componentwise(alpha, nu)))
            if (seen.insert(g).second) members.push_back(g);
    return CoIdeal::from_members(src.vars(), members);
}

SubstMap power_map(const PolyRing& ring, const CoIdeal& src, std::span<const unsigned> nu) {
    if (nu.size() != src.vars().size()) throw precondition_error("one exponent per variable required");
    for (auto v : nu)
        if (v == 0) throw precondition_error("power map exponents must be positive");
    CoIdeal dst = power_coideal(src, nu);
    std::vector<Series> images;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        std::vector<MultiIndex::exponent_type> e(nu.size(), 0);
        e[i] = nu[i];
        images.push_back(Series::monomial(ring, dst, MultiIndex(dst.vars(), e), Poly::constant(ring, 1)));
    }
    return SubstMap(ring, src, std::move(dst), std::move(images));
}

bool has_constant_coeffs(const SubstMap& phi) {
    for (const auto& img : phi.images())
        for (const auto& [alpha, c] : img.terms())
            if (!c.is_constant()) return false;
    return true;
}

SubstMap truncate_subst(const SubstMap& phi, unsigned n) {
    CoIdeal src = slice(phi.src(), n);
    CoIdeal dst = slice(phi.dst(), n);
    std::vector<Series> images;
    for (const auto& img : phi.images()) images.push_back(truncate(img, dst));
    return SubstMap(phi.ring(), std::move(src), std::move(dst), std::move(images));
}

SubstMap retarget(const SubstMap& phi, const CoIdeal& src, const CoIdeal& dst) {
    if (!(src.vars() == phi.src_vars())) throw precondition_error("retarget changes the source variables");
    std::vector<Series> images;
    for (const auto& img : phi.images()) images.push_back(include(img, dst));
    return SubstMap(phi.ring(), src, dst, std::move(images));
}

// ------------------------------------------------------------ CoeffTable

Poly CoeffTable::at(const MultiIndex& e, const MultiIndex& alpha) const {
    auto it = entries.find({e, alpha});
    return it == entries.end() ? Poly(ring) : it->second;
}

void CoeffTable::set(const MultiIndex& e, const MultiIndex& alpha, Poly value) {
    if (value.is_zero())
        entries.erase({e, alpha});
    else
        entries.insert_or_assign({e, alpha}, std::move(value));
}

CoeffTable coeff_table(const SubstMap& phi) {
    CoeffTable table{phi.ring(), phi.src(), phi.dst(), {}};
    for (const auto& e : phi.dst().members())
        for (const auto& alpha : phi.src().members()) {
            if (alpha.norm() > e.norm()) break;
            table.set(e, alpha, phi.coeff(alpha, e));
        }
    return table;
}

bool check_multiplicativity_table(const CoeffTable& table) {
    const PolyRing& ring = table.ring;
    const VarSet& svars = table.src.vars();
    const VarSet& tvars = table.dst.vars();
    if (!(table.at(MultiIndex(tvars), MultiIndex(svars)) == Poly::constant(ring, 1))) return false;
    auto find = [&](const MultiIndex& e, const MultiIndex& a) -> const Poly* {
        auto it = table.entries.find({e, a});
        return it == table.entries.end() ? nullptr : &it->second;
    };
    for (const auto& e : table.dst.members()) {
        const auto splits = below(e);
        for (const auto& mu : table.src.members()) {
            for (const auto& nu : table.src.members()) {
                if (mu.norm() + nu.norm() > e.norm()) break;
                const MultiIndex sum = mu + nu;
                Poly lhs = table.src.contains(sum) ? table.at(e, sum) : Poly(ring);
                Poly rhs(ring);
                for (const auto& beta : splits) {
                    if (beta.norm() < mu.norm()) continue;
                    const MultiIndex gamma = e - beta;
                    if (gamma.norm() < nu.norm()) continue;
                    const Poly* a = find(beta, mu);
                    if (!a) continue;
                    const Poly* b = find(gamma, nu);
                    if (!b) continue;
                    rhs += *a * *b;
                }
                if (!(lhs == rhs)) return false;
            }
        }
    }
    return true;
}

SubstMap subst_from_table(const CoeffTable& table) {
    const VarSet& svars = table.src.vars();
    std::vector<Series> images;
    for (std::size_t u = 0; u < svars.size(); ++u) {
        const MultiIndex unit = MultiIndex::unit(svars, u);
        Series img(table.ring, table.dst);
        for (const auto& e : table.dst.members())
            if (!e.is_zero()) img.set_coeff(e, table.at(e, unit));
        images.push_back(std::move(img));
    }
    return SubstMap(table.ring, table.src, table.dst, std::move(images));
}

Series apply_table(const CoeffTable& table, const Series& a) {
    if (!(a.trunc() == table.src)) throw precondition_error("series outside the table's source universe");
    Series out(table.ring, table.dst);
    for (const auto& [key, k] : table.entries) {
        auto it = a.terms().find(key.second);
        if (it != a.terms().end()) out.add_to_coeff(key.first, k * it->second);
    }
    return out;
}

} // namespace hsforge
