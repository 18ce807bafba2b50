#pragma once

#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "hsforge/algebra.hpp"
#include "hsforge/multiindex.hpp"

namespace hsforge {

// Order of the zero series / length of the identity.
inline constexpr unsigned kInfiniteOrder = std::numeric_limits<unsigned>::max();

// Element of A[[s]]_Δ: a polynomial coefficient for each member of the truncation Δ.
class Series {
public:
    using Terms = std::map<MultiIndex, Poly, GrLexLess>;

    // Zero series. The variables of `trunc` must be disjoint from the ring generators.
    Series(PolyRing ring, CoIdeal trunc);
    static Series constant(const PolyRing& ring, const CoIdeal& trunc, const Poly& c);
    static Series one(const PolyRing& ring, const CoIdeal& trunc);
    // c·s^alpha, or zero if alpha lies outside the truncation.
    static Series monomial(const PolyRing& ring, const CoIdeal& trunc, const MultiIndex& alpha, const Poly& c);

    const PolyRing& ring() const noexcept { return ring_; }
    const CoIdeal& trunc() const noexcept { return trunc_; }
    const VarSet& vars() const noexcept { return trunc_.vars(); }
    const Terms& terms() const& noexcept { return terms_; }
    Terms terms() && { return std::move(terms_); }

    Poly coeff(const MultiIndex& alpha) const;
    Poly constant_term() const;
    bool is_zero() const noexcept { return terms_.empty(); }
    // Least norm in the support; kInfiniteOrder for zero.
    unsigned order() const;

    // Requires alpha ∈ Δ.
    void set_coeff(const MultiIndex& alpha, Poly c);
    void add_to_coeff(const MultiIndex& alpha, const Poly& c);

    Series operator-() const;
    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series scaled(const Poly& c) const;
    // s^alpha · this, truncated.
    Series shifted(const MultiIndex& alpha) const;

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(const Series& a, const Series& b);
    friend bool operator==(const Series& a, const Series& b);

private:
    struct Unchecked {};
    Series(PolyRing ring, CoIdeal trunc, Unchecked);
    friend Series truncate(const Series&, const CoIdeal&);

    PolyRing ring_;
    CoIdeal trunc_;
    Terms terms_;
};

// Projection onto a smaller co-ideal over the same variables.
Series truncate(const Series& a, const CoIdeal& target);
Series pow(const Series& a, unsigned e);
// Constant term is a nonzero scalar.
bool is_unit(const Series& a);
Series invert_recursive(const Series& a);
// Requires constant term 1.
Series invert_partition(const Series& a);
// a ⊠ b over s ⊔ t with truncation ∇ × Δ.
Series external_product(const Series& a, const Series& b);
// Moves `a` into `target`, matching variables by name; indices outside the target truncation are dropped.
Series include(const Series& a, const CoIdeal& target);

} // namespace hsforge
