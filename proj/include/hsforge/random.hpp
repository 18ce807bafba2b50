#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "hsforge/hsderiv.hpp"

namespace hsforge {

// Deterministic source for test instances. Draws are derived from the raw engine output only,
// so sequences do not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    // Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
    // Uniform in [lo, hi].
    unsigned between(unsigned lo, unsigned hi) { return lo + static_cast<unsigned>(below(hi - lo + 1)); }
    bool chance(unsigned percent) { return below(100) < percent; }

private:
    std::mt19937_64 engine_;
};

// Stable 64-bit mix of a seed with a label and an index.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& label, std::uint64_t index);

// "v1".."vn".
VarSet numbered_vars(const std::string& prefix, std::size_t n);

// Drawn from {0, ±1, ±2, x, y, x+1}, using the first two generators when present.
Poly random_coeff(const PolyRing& ring, Rng& rng);
// Each index of the truncation with norm ≥ min_order gets a random coefficient with probability `density`.
Series random_series(const PolyRing& ring, const CoIdeal& trunc, Rng& rng, unsigned density = 60,
                     unsigned min_order = 0);
// Random series with constant term 1.
Series random_unit(const PolyRing& ring, const CoIdeal& trunc, Rng& rng, unsigned density = 60);
// Images without constant term. Well defined whenever every index outside src has norm above
// dst.max_norm(), e.g. src = t_m and dst = t_{m'} with m' ≤ m.
SubstMap random_subst(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst, Rng& rng, unsigned density = 60);
// Same, with constant (scalar) coefficients.
SubstMap random_constant_subst(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst, Rng& rng,
                               unsigned density = 60);
// Φ(x_i) = x_i + random terms of norm ≥ min_order.
HSDeriv random_hs(const PolyRing& ring, const CoIdeal& trunc, Rng& rng, unsigned density = 60,
                  unsigned min_order = 1);
// Random polynomial: sum of a few products of pool elements.
Poly random_poly(const PolyRing& ring, Rng& rng, unsigned factors = 2);

} // namespace hsforge
