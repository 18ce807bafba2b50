#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hsforge/series.hpp"

namespace hsforge {

// φ: A[[s]]_∇ → A[[t]]_Δ determined by the images φ(s) (zero constant term) and well defined,
// i.e. φ kills every s^α with α ∉ ∇.
class SubstMap {
public:
    // images[i] is the image of the i-th source variable. Throws validation_error if the
    // images have a constant term or do not define a map on the truncation.
    SubstMap(PolyRing ring, CoIdeal src, CoIdeal dst, std::vector<Series> images);
    // Every source variable goes to 0.
    static SubstMap trivial(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst);
    // Sends each source variable to the same-named target variable (or to 0 if absent).
    static SubstMap combinatorial(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst,
                                  const std::map<std::string, std::string>& renaming = {});

    const PolyRing& ring() const noexcept { return ring_; }
    const CoIdeal& src() const noexcept { return src_; }
    const CoIdeal& dst() const noexcept { return dst_; }
    const VarSet& src_vars() const noexcept { return src_.vars(); }
    const VarSet& dst_vars() const noexcept { return dst_.vars(); }
    const std::vector<Series>& images() const& noexcept { return images_; }
    std::vector<Series> images() && { return std::move(images_); }
    const Series& image(std::size_t i) const { return images_.at(i); }

    // C_e(φ, α): coefficient of t^e in φ(s^α). Memoized; safe to call concurrently.
    Poly coeff(const MultiIndex& alpha, const MultiIndex& e) const;
    // φ(s^α) for α ∈ ∇. Memoized.
    Series monomial_image(const MultiIndex& alpha) const;
    Series apply(const Series& a) const;

    friend bool operator==(const SubstMap& a, const SubstMap& b);

private:
    struct Cache;
    PolyRing ring_;
    CoIdeal src_;
    CoIdeal dst_;
    std::vector<Series> images_;
    std::shared_ptr<Cache> cache_;
};

// True iff the images have no constant term and kill s^α for every minimal α ∉ src.
// Throws precondition_error on structural mismatches (wrong ring/universe/arity).
bool validate(const PolyRing& ring, const CoIdeal& src, const CoIdeal& dst, const std::vector<Series>& images);

inline Series apply(const SubstMap& phi, const Series& a) { return phi.apply(a); }
// ψ∘φ (φ first).
SubstMap compose(const SubstMap& psi, const SubstMap& phi);
SubstMap add(const SubstMap& phi, const SubstMap& psi);
// φ⊗ψ: A[[s⊔u]]_{∇×∇'} → A[[t⊔v]]_{Δ×Δ'}.
SubstMap tensor(const SubstMap& phi, const SubstMap& psi);
// ν∇ = {γ : γ ≤ να for some α ∈ ∇}.
CoIdeal power_coideal(const CoIdeal& src, std::span<const unsigned> nu);
// [ν]: s ↦ s^{ν_s} from ∇ to ν∇.
SubstMap power_map(const PolyRing& ring, const CoIdeal& src, std::span<const unsigned> nu);
bool has_constant_coeffs(const SubstMap& phi);
// τ_n: images truncated to norm ≤ n between the slices ∇^n and Δ^n.
SubstMap truncate_subst(const SubstMap& phi, unsigned n);
// Same images with the target truncation changed; the result must still be well defined.
SubstMap retarget(const SubstMap& phi, const CoIdeal& src, const CoIdeal& dst);

struct IndexPairLess {
    bool operator()(const std::pair<MultiIndex, MultiIndex>& a, const std::pair<MultiIndex, MultiIndex>& b) const {
        if (!(a.first == b.first)) return GrLexLess{}(a.first, b.first);
        return GrLexLess{}(a.second, b.second);
    }
};

// Table K_{e,α} for e ∈ Δ, α ∈ ∇, |α| ≤ |e|. Missing entries are zero.
struct CoeffTable {
    PolyRing ring;
    CoIdeal src;
    CoIdeal dst;
    std::map<std::pair<MultiIndex, MultiIndex>, Poly, IndexPairLess> entries;  // key (e, alpha)

    Poly at(const MultiIndex& e, const MultiIndex& alpha) const;
    void set(const MultiIndex& e, const MultiIndex& alpha, Poly value);
};

CoeffTable coeff_table(const SubstMap& phi);
// The multiplicativity criterion: K_{0,0} = 1 and K_{e,μ+ν} = Σ K_{β,μ} K_{γ,ν} over β+γ = e with
// |μ| ≤ |β|, |ν| ≤ |γ|, for all μ, ν ∈ ∇ and e ∈ Δ with |μ+ν| ≤ |e| (K_{e,μ+ν} = 0 if μ+ν ∉ ∇).
bool check_multiplicativity_table(const CoeffTable& table);
// φ(s) = Σ_e K_{e,s} t^e. Validates.
SubstMap subst_from_table(const CoeffTable& table);
// The linear map a ↦ Σ_e (Σ_α K_{e,α} a_α) t^e.
Series apply_table(const CoeffTable& table, const Series& a);

} // namespace hsforge
