#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hsforge/generate.hpp"

namespace hsforge {

// Reference implementations. Each one takes a route independent of the optimized code it checks.

// C_e(φ, α) by expanding Π_t (φ(t))^{α_t} with plain series products.
Poly direct_C(const SubstMap& phi, const MultiIndex& alpha, const MultiIndex& e);
// D*_α(a) = Σ_{d≥1} (-1)^d Σ_{(α_1..α_d) ∈ Par(α,d)} D_{α_1}∘…∘D_{α_d}(a).
Poly hs_inverse_partition(const HSDeriv& d, const MultiIndex& alpha, const Poly& a);
// Table of C_e(φ^D, ν) from the triangular recursion
//   C_e(φ^D,ν) = C_e(φ,ν) − Σ_{β+γ=e, β≠0, |g|≤|β|, |ν|≤|γ|<|e|} C_β(φ,g) D_g(C_γ(φ^D,ν)).
CoeffTable phiD_recursive_table(const SubstMap& phi, const HSDeriv& d);
Poly phiD_recursive_C(const SubstMap& phi, const HSDeriv& d, const MultiIndex& nu, const MultiIndex& e);

struct CheckFailure {
    std::string input;
    std::string expected;
    std::string got;
};

struct CheckReport {
    std::string name;
    std::size_t instances = 0;
    std::vector<CheckFailure> failures;
    bool passed() const { return failures.empty(); }
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    // Check name → number of random instances. Checks not listed are skipped.
    std::map<std::string, std::size_t> sizes;
    // Adds 1 to one coefficient of an optimized result in every check; every check must then fail.
    bool perturb = false;
};

const std::vector<std::string>& suite_check_names();
std::map<std::string, std::size_t> default_suite_sizes();
// Throws precondition_error for an unknown check name.
CheckReport run_check(const std::string& name, std::uint64_t seed, std::size_t instances, bool perturb = false);
// Runs the listed checks in registry order. Deterministic in (seed, sizes, perturb).
std::vector<CheckReport> run_suite(const SuiteOptions& options);

} // namespace hsforge
