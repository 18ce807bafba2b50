#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hsforge/hsderiv.hpp"

namespace hsforge {

// φ = top + lower, where top keeps the norm-m part of each image (m = target max norm).
struct TopSplit {
    SubstMap top;
    SubstMap lower;
};
TopSplit split_top(const SubstMap& phi);

struct TopLawReport {
    bool low_components_vanish = false;  // (top•D)_e = 0 for 0 < |e| < m
    bool top_components_match = false;   // (top•D)_e = Σ_t c^t_e D_{s^t} for |e| = m
    bool factors_left = false;           // φ•D = (top•D)∘(lower•D)
    bool factors_right = false;          // φ•D = (lower•D)∘(top•D)
    bool ok() const { return low_components_vanish && top_components_match && factors_left && factors_right; }
};
// Both truncations must be total-degree truncations of the same length m.
TopLawReport top_action_law(const SubstMap& phi, const HSDeriv& d, std::span<const Poly> witnesses);

struct GenerationProblem {
    HSDeriv generator;  // D over (s, t_m)
    HSDeriv target;     // G over (t, t_m)
    DerivationSolver solver = solve_in_derivation_basis;
};

// Stage r (1-based) holds the map t_r(s) → t_r(t) built so far; the last stage is the answer.
struct GenerationTrace {
    std::vector<SubstMap> stages;
    const SubstMap& result() const { return stages.back(); }
};

// Builds φ with φ•D = G one norm at a time. `on_stage` may stop the construction early by returning false.
GenerationTrace generate_subst_traced(const GenerationProblem& problem,
                                      const std::function<bool(const SubstMap&)>& on_stage = {});
SubstMap generate_subst(const GenerationProblem& problem);

// Regenerates φ and ψ from their actions on D; true iff both come back unchanged (which forces
// φ = ψ whenever φ•D = ψ•D).
bool verify_uniqueness(const HSDeriv& d, const SubstMap& phi, const SubstMap& psi,
                       const DerivationSolver& solver = solve_in_derivation_basis);

// Φ(x_i) = x_i + s_i over t_m(s_1..s_n); components are divided-power partial derivatives.
HSDeriv canonical_hs(const PolyRing& ring, unsigned m);

// Extends E over (t, t_n) to length m > n, with truncation back to t_n equal to E.
HSDeriv integrate(const HSDeriv& e, unsigned m);

} // namespace hsforge
