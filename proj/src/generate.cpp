#include "hsforge/generate.hpp"

#include <algorithm>

#include "hsforge/error.hpp"

namespace hsforge {

namespace {

unsigned total_degree_length(const CoIdeal& c, const char* what) {
    if (c.shape() != CoIdeal::Shape::total_degree)
        throw precondition_error(std::string(what) + " must be a total-degree truncation");
    return c.max_norm();
}

Series series_part(const Series& s, unsigned lo, unsigned hi) {
    Series out(s.ring(), s.trunc());
    for (const auto& [a, c] : s.terms())
        if (a.norm() >= lo && a.norm() <= hi) out.set_coeff(a, c);
    return out;
}

} // namespace

TopSplit split_top(const SubstMap& phi) {
    const unsigned m = total_degree_length(phi.dst(), "target");
    std::vector<Series> top, lower;
    for (const auto& img : phi.images()) {
        top.push_back(series_part(img, m, m));
        lower.push_back(series_part(img, 0, m == 0 ? 0 : m - 1));
    }
    return {SubstMap(phi.ring(), phi.src(), phi.dst(), std::move(top)),
            SubstMap(phi.ring(), phi.src(), phi.dst(), std::move(lower))};
}

TopLawReport top_action_law(const SubstMap& phi, const HSDeriv& d, std::span<const Poly> witnesses) {
    const unsigned m = total_degree_length(phi.dst(), "target");
    if (total_degree_length(phi.src(), "source") != m) throw precondition_error("source and target lengths differ");
    const auto [top, lower] = split_top(phi);
    const HSDeriv top_d = act(top, d);
    const HSDeriv lower_d = act(lower, d);
    const HSDeriv full = act(phi, d);

    TopLawReport report;
    report.low_components_vanish = true;
    report.top_components_match = true;
    PhiCache top_cache(top_d), d_cache(d);
    const VarSet& svars = d.vars();
    for (const auto& w : witnesses) {
        const Series& tw = top_cache.phi(w);
        for (const auto& e : phi.dst().members()) {
            if (e.is_zero()) continue;
            if (e.norm() < m) {
                if (!tw.coeff(e).is_zero()) report.low_components_vanish = false;
                continue;
            }
            Poly expected(phi.ring());
            for (std::size_t t = 0; t < svars.size(); ++t)
                expected += top.image(t).coeff(e) * d_cache.component(MultiIndex::unit(svars, t), w);
            if (!(tw.coeff(e) == expected)) report.top_components_match = false;
        }
    }
    report.factors_left = full == compose(top_d, lower_d);
    report.factors_right = full == compose(lower_d, top_d);
    return report;
}

GenerationTrace generate_subst_traced(const GenerationProblem& problem,
                                      const std::function<bool(const SubstMap&)>& on_stage) {
    const HSDeriv& d = problem.generator;
    const HSDeriv& g = problem.target;
    if (!(d.ring() == g.ring())) throw precondition_error("generator and target over different rings");
    const unsigned m = total_degree_length(d.trunc(), "generator truncation");
    if (total_degree_length(g.trunc(), "target truncation") != m)
        throw precondition_error("generator and target have different lengths");
    if (!problem.solver) throw precondition_error("no derivation solver supplied");

    const PolyRing& ring = d.ring();
    const VarSet& svars = d.vars();
    const VarSet& tvars = g.vars();
    const std::size_t n = ring.ngens();

    // Coordinate derivations D_{s^j}, read off the images on generators.
    std::vector<Derivation> basis;
    for (std::size_t j = 0; j < svars.size(); ++j) {
        std::vector<Poly> values;
        for (std::size_t i = 0; i < n; ++i) values.push_back(d.image(i).coeff(MultiIndex::unit(svars, j)));
        basis.emplace_back(ring, std::move(values));
    }

    GenerationTrace trace;
    SubstMap current = SubstMap::trivial(ring, CoIdeal::tm(svars, 0), CoIdeal::tm(tvars, 0));
    for (unsigned r = 1; r <= m; ++r) {
        const CoIdeal src = CoIdeal::tm(svars, r);
        const CoIdeal dst = CoIdeal::tm(tvars, r);
        const HSDeriv d_r = truncate(d, src);
        const SubstMap lifted = retarget(current, src, dst);
        const HSDeriv h = compose(truncate(g, dst), invert(act(lifted, d_r)));

        std::vector<Series> images = lifted.images();
        for (const auto& e : dst.members()) {
            if (e.is_zero() || e.norm() > r) continue;
            std::vector<Poly> values;
            for (std::size_t i = 0; i < n; ++i) values.push_back(h.image(i).coeff(e));
            if (e.norm() < r) {
                if (std::any_of(values.begin(), values.end(), [](const Poly& p) { return !p.is_zero(); }))
                    throw error("generation stage left a low-order component");
                continue;
            }
            // H_e must be a derivation; spot-check Leibniz on generator pairs.
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = i; k < n; ++k) {
                    Poly lhs = (h.image(i) * h.image(k)).coeff(e);
                    Poly rhs = Poly::gen(ring, i) * values[k] + Poly::gen(ring, k) * values[i];
                    if (!(lhs == rhs)) throw error("top component of the generation defect is not a derivation");
                }
            const std::vector<Poly> coeffs = problem.solver(Derivation(ring, values), basis);
            if (coeffs.size() != svars.size()) throw solver_error("solver returned the wrong number of coefficients");
            for (std::size_t j = 0; j < coeffs.size(); ++j) images[j].add_to_coeff(e, coeffs[j]);
        }
        current = SubstMap(ring, src, dst, std::move(images));
        trace.stages.push_back(current);
        if (on_stage && !on_stage(current)) break;
    }
    if (trace.stages.empty()) trace.stages.push_back(current);
    return trace;
}

SubstMap generate_subst(const GenerationProblem& problem) { return generate_subst_traced(problem).result(); }

bool verify_uniqueness(const HSDeriv& d, const SubstMap& phi, const SubstMap& psi, const DerivationSolver& solver) {
    auto regenerates = [&](const SubstMap& map) {
        try {
            return generate_subst({d, act(map, d), solver}) == map;
        } catch (const solver_error&) {
            return false;
        }
    };
    return regenerates(phi) && regenerates(psi);
}

HSDeriv canonical_hs(const PolyRing& ring, unsigned m) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < ring.ngens(); ++i) {
        std::string name = "s" + std::to_string(i + 1);
        while (ring.gen_index(name)) name += "'";
        names.push_back(name);
    }
    const CoIdeal trunc = CoIdeal::tm(VarSet(names), m);
    std::vector<Series> images;
    for (std::size_t i = 0; i < ring.ngens(); ++i) {
        Series img = Series::constant(ring, trunc, Poly::gen(ring, i));
        img.add_to_coeff(MultiIndex::unit(trunc.vars(), i), Poly::constant(ring, 1));
        images.push_back(std::move(img));
    }
    return HSDeriv(ring, trunc, std::move(images));
}

HSDeriv integrate(const HSDeriv& e, unsigned m) {
    const unsigned n = total_degree_length(e.trunc(), "truncation");
    if (m <= n) throw precondition_error("integration length must exceed the current length");
    const HSDeriv d = canonical_hs(e.ring(), m);
    const SubstMap phi = generate_subst({truncate(d, CoIdeal::tm(d.vars(), n)), e});
    const SubstMap lifted = retarget(phi, d.trunc(), CoIdeal::tm(e.vars(), m));
    HSDeriv result = act(lifted, d);
    if (!(truncate(result, e.trunc()) == e)) throw error("integration does not restrict to the input");
    return result;
}

} // namespace hsforge
