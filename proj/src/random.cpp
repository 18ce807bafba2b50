#include "hsforge/random.hpp"

#include "hsforge/error.hpp"

namespace hsforge {

std::uint64_t derive_seed(std::uint64_t seed, const std::string& label, std::uint64_t index) {
    // FNV-1a over the label, then a splitmix64 finalizer.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : label) h = (h ^ c) * 1099511628211ull;
    std::uint64_t z = seed ^ h ^ (index * 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

VarSet numbered_vars(const std::string& prefix, std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
    return VarSet(std::move(names));
}

Poly random_coeff(const PolyRing& ring, Rng& rng) {
    const bool has_x = ring.ngens() >= 1, has_y = ring.ngens() >= 2;
    const unsigned pool = 5 + (has_x ? 2 : 0) + (has_y ? 1 : 0);
    switch (rng.below(pool)) {
    case 0: return Poly(ring);
    case 1: return Poly::constant(ring, 1);
    case 2: return Poly::constant(ring, -1);
    case 3: return Poly::constant(ring, 2);
    case 4: return Poly::constant(ring, -2);
    case 5: return Poly::gen(ring, 0);
    case 6: return Poly::gen(ring, 0) + Poly::constant(ring, 1);
    default: return Poly::gen(ring, 1);
    }
}

Poly random_poly(const PolyRing& ring, Rng& rng, unsigned factors) {
    Poly out(ring);
    const unsigned terms = rng.between(1, 3);
    for (unsigned i = 0; i < terms; ++i) {
        Poly p = Poly::constant(ring, 1);
        for (unsigned k = 0; k < factors; ++k) p *= random_coeff(ring, rng);
        out += p;
    }
    return out;
}

Series random_series(const PolyRing& ring, const CoIdeal& trunc, Rng& rng, unsigned density, unsigned min_order) {
    Series out(ring, trunc);
    for (const auto& alpha : trunc.members())
        if (alpha.norm() >= min_order && rng.chance(density)) out.set_coeff(alpha, random_coeff(ring, rng));
    return out;
}

Series random_unit(const PolyRing& ring, const CoIdeal& trunc, Rng& rng, unsigned density) {
    Series out = random_series(ring, trunc, rng, density, 1);
    out.set_coeff(MultiIndex(trunc.vars()), Poly::constant(ring, 1));
    return out;
}

SubstMap random_subst(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst, Rng& rng, unsigned density) {
    std::vector<Series> images;
    for (std::size_t i = 0; i < src.vars().size(); ++i) images.push_back(random_series(ring, dst, rng, density, 1));
    return SubstMap(ring, src, dst, std::move(images));
}

SubstMap random_constant_subst(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst, Rng& rng,
                               unsigned density) {
    std::vector<Series> images;
    for (std::size_t i = 0; i < src.vars().size(); ++i) {
        Series img(ring, dst);
        for (const auto& alpha : dst.members())
            if (!alpha.is_zero() && rng.chance(density))
                img.set_coeff(alpha, Poly::constant(ring, static_cast<long long>(rng.below(5)) - 2));
        images.push_back(std::move(img));
    }
    return SubstMap(ring, src, dst, std::move(images));
}

HSDeriv random_hs(const PolyRing& ring, const CoIdeal& trunc, Rng& rng, unsigned density, unsigned min_order) {
    std::vector<Series> images;
    for (std::size_t i = 0; i < ring.ngens(); ++i) {
        Series img = random_series(ring, trunc, rng, density, std::max(1u, min_order));
        img.set_coeff(MultiIndex(trunc.vars()), Poly::gen(ring, i));
        images.push_back(std::move(img));
    }
    return HSDeriv(ring, trunc, std::move(images));
}

} // namespace hsforge
