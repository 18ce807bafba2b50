#pragma once

#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hsforge/substitution.hpp"

namespace hsforge {

// Multivariate HS-derivation D of A over (s, Δ), stored through Φ_D(x_i) = Σ_α D_α(x_i) s^α.
class HSDeriv {
public:
    // images[i] = Φ_D(x_i); its constant term must be x_i.
    HSDeriv(PolyRing ring, CoIdeal trunc, std::vector<Series> images);
    static HSDeriv identity(const PolyRing& ring, const CoIdeal& trunc);

    const PolyRing& ring() const noexcept { return ring_; }
    const CoIdeal& trunc() const noexcept { return trunc_; }
    const VarSet& vars() const noexcept { return trunc_.vars(); }
    const std::vector<Series>& images() const& noexcept { return images_; }
    std::vector<Series> images() && { return std::move(images_); }
    const Series& image(std::size_t i) const { return images_.at(i); }

    friend bool operator==(const HSDeriv& a, const HSDeriv& b);

private:
    PolyRing ring_;
    CoIdeal trunc_;
    std::vector<Series> images_;
};

// Φ_D(a) = Σ_α D_α(a) s^α.
Series phi_apply(const HSDeriv& d, const Poly& a);
// D_α(a).
Poly component(const HSDeriv& d, const MultiIndex& alpha, const Poly& a);
// D̃(Σ a_α s^α) = Σ Φ_D(a_α) s^α.
Series tilde_apply(const HSDeriv& d, const Series& f);

HSDeriv compose(const HSDeriv& d, const HSDeriv& e);
HSDeriv invert(const HSDeriv& d);
// ℓ(D) = min_i ord(Φ_D(x_i) − x_i); kInfiniteOrder for the identity.
unsigned ell(const HSDeriv& d);
// D∘E∘D*∘E*.
HSDeriv commutator(const HSDeriv& d, const HSDeriv& e);
// D⊠E over s⊔t with components (D⊠E)_{(α,β)} = D_α∘E_β.
HSDeriv external(const HSDeriv& d, const HSDeriv& e);
HSDeriv truncate(const HSDeriv& d, const CoIdeal& target);
// Same components on a larger truncation over the same variables, zero outside the old one.
HSDeriv zero_extend(const HSDeriv& d, const CoIdeal& target);

// φ•D with components (φ•D)_e = Σ_{|α|≤|e|} C_e(φ,α) D_α.
HSDeriv act(const SubstMap& phi, const HSDeriv& d);
// a•D with components a^α D_α.
HSDeriv scale(std::span<const Poly> a, const HSDeriv& d);
// D(φ): s ↦ D̃(φ(s)).
SubstMap d_of_phi(const HSDeriv& d, const SubstMap& phi);
// φ^D, the unique map with φ = (φ•D)~∘φ^D on the image of each variable.
SubstMap phi_upper_D(const SubstMap& phi, const HSDeriv& d);
// Compares (ι+ι')•D with (ι•D)∘(ι'•D) over a doubled copy of the variables. The target truncation
// is {(β,γ) : β+γ ∈ Δ}, on which ι+ι' is well defined.
bool is_iterative(const HSDeriv& d);

// k-linear operator on A.
using Operator = std::function<Poly(const Poly&)>;

// Memoizes Φ_D(a) so that many components can be read off one evaluation.
class PhiCache {
public:
    explicit PhiCache(HSDeriv d) : d_(std::move(d)) {}
    const HSDeriv& deriv() const noexcept { return d_; }
    const Series& phi(const Poly& a);
    Poly component(const MultiIndex& alpha, const Poly& a) { return phi(a).coeff(alpha); }

private:
    HSDeriv d_;
    std::map<Poly, Series> memo_;
};

struct OperatorHandle {
    HSDeriv deriv;
    MultiIndex index;
    Poly operator()(const Poly& a) const { return component(deriv, index, a); }
};

// Sampling test of "P has differential order ≤ n": [[..[P,a_0],..],a_n](w) = 0 for all multipliers
// a_i and witnesses w. n = -1 tests P = 0.
bool op_order_at_most(const Operator& p, int n, std::span<const Poly> witnesses, std::span<const Poly> multipliers);
// Multipliers default to the ring generators; witnesses to standard_witnesses(ring, |α|).
bool op_order_at_most(const OperatorHandle& h, int n, std::span<const Poly> witnesses = {});
// All monomials of degree ≤ m + 2.
std::vector<Poly> standard_witnesses(const PolyRing& ring, unsigned m);

} // namespace hsforge
