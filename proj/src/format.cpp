#include "hsforge/format.hpp"

#include <algorithm>
#include <sstream>

namespace hsforge {

namespace {

std::string monomial_text(const std::vector<std::string>& names, std::span<const std::uint32_t> exps) {
    std::string out;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (!exps[i]) continue;
        if (!out.empty()) out += '*';
        out += names[i];
        if (exps[i] > 1) out += '^' + std::to_string(exps[i]);
    }
    return out;
}

} // namespace

std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    // Highest degree first.
    std::vector<std::pair<Monomial, Scalar>> terms(p.terms().begin(), p.terms().end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        unsigned da = 0, db = 0;
        for (auto e : a.first) da += e;
        for (auto e : b.first) db += e;
        return da > db;
    });
    std::string out;
    for (const auto& [m, c] : terms) {
        std::string mono = monomial_text(p.ring().gens(), m);
        std::string coeff = c.to_string();
        bool negative = !coeff.empty() && coeff[0] == '-';
        if (negative) coeff.erase(0, 1);
        if (out.empty())
            out = negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        if (mono.empty())
            out += coeff;
        else if (coeff == "1")
            out += mono;
        else
            out += coeff + "*" + mono;
    }
    return out;
}

std::string to_string(const MultiIndex& m) {
    std::string s = monomial_text(m.vars().names(), m.exponents());
    return s.empty() ? "1" : s;
}

std::string to_string(const CoIdeal& c) {
    std::string vars;
    for (const auto& n : c.vars().names()) vars += (vars.empty() ? "" : ",") + n;
    switch (c.shape()) {
    case CoIdeal::Shape::total_degree: return "t_" + std::to_string(c.max_norm()) + "(" + vars + ")";
    case CoIdeal::Shape::box: return "below(" + to_string(c.top()) + ")";
    case CoIdeal::Shape::explicit_set: break;
    }
    std::string out = "{";
    for (const auto& m : c.members()) out += (out.size() > 1 ? ", " : "") + to_string(m);
    return out + "}";
}

std::string to_string(const Series& s) {
    if (s.is_zero()) return "0";
    std::string out;
    for (const auto& [alpha, c] : s.terms()) {
        std::string coeff = to_string(c);
        bool single = c.terms().size() == 1;
        bool negative = single && coeff[0] == '-';
        if (negative) coeff.erase(0, 1);
        if (out.empty())
            out = negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        if (!single) coeff = "(" + coeff + ")";
        if (alpha.is_zero())
            out += coeff;
        else
            out += (coeff == "1" ? "" : coeff + "*") + to_string(alpha);
    }
    return out + "  [mod " + to_string(s.trunc()) + "]";
}

std::string to_string(const SubstMap& phi) {
    std::ostringstream out;
    out << to_string(phi.src()) << " -> " << to_string(phi.dst()) << "\n";
    for (std::size_t i = 0; i < phi.images().size(); ++i) {
        out << "  " << phi.src_vars()[i] << " |-> ";
        const auto& img = phi.image(i);
        std::string text = to_string(img);
        out << text.substr(0, text.find("  [mod")) << "\n";
    }
    return out.str();
}

std::string to_string(const HSDeriv& d) {
    std::ostringstream out;
    out << "HS-derivation over " << to_string(d.trunc()) << "\n";
    for (std::size_t i = 0; i < d.images().size(); ++i) {
        std::string text = to_string(d.image(i));
        out << "  Phi(" << d.ring().gen(i) << ") = " << text.substr(0, text.find("  [mod")) << "\n";
    }
    return out.str();
}

} // namespace hsforge
