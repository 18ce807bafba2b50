#include "hsforge/multiindex.hpp"

#include <algorithm>
#include <numeric>

#include "hsforge/error.hpp"

namespace hsforge {

namespace {

const std::shared_ptr<const std::vector<std::string>>& empty_names() {
    static const auto empty = std::make_shared<const std::vector<std::string>>();
    return empty;
}

void require_same_vars(const VarSet& a, const VarSet& b) {
    if (!(a == b)) throw precondition_error("multi-index ambient mismatch");
}

} // namespace

VarSet::VarSet() : names_(empty_names()) {}

VarSet::VarSet(std::vector<std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty()) throw precondition_error("empty variable name");
        for (std::size_t j = 0; j < i; ++j)
            if (names[i] == names[j]) throw precondition_error("duplicate variable name: " + names[i]);
    }
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

std::optional<std::size_t> VarSet::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_->size(); ++i)
        if ((*names_)[i] == name) return i;
    return std::nullopt;
}

bool operator==(const VarSet& a, const VarSet& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
}

bool disjoint(const VarSet& a, const VarSet& b) {
    return std::none_of(a.names().begin(), a.names().end(),
                        [&](const std::string& n) { return b.contains(n); });
}

VarSet disjoint_union(const VarSet& a, const VarSet& b) {
    if (!disjoint(a, b)) throw precondition_error("variable sets are not disjoint");
    std::vector<std::string> names = a.names();
    names.insert(names.end(), b.names().begin(), b.names().end());
    return VarSet(std::move(names));
}

MultiIndex::MultiIndex(VarSet vars) : vars_(std::move(vars)), exps_(vars_.size(), 0) {}

MultiIndex::MultiIndex(VarSet vars, std::vector<exponent_type> exps)
    : vars_(std::move(vars)), exps_(std::move(exps)) {
    if (exps_.size() != vars_.size()) throw precondition_error("exponent vector length mismatch");
}

MultiIndex::MultiIndex(VarSet vars, std::initializer_list<std::pair<std::string_view, exponent_type>> entries)
    : MultiIndex(std::move(vars)) {
    for (const auto& [name, e] : entries) {
        auto i = vars_.index_of(name);
        if (!i) throw precondition_error("unknown variable: " + std::string(name));
        exps_[*i] += e;
    }
}

MultiIndex MultiIndex::unit(VarSet vars, std::size_t i) {
    MultiIndex m(std::move(vars));
    if (i >= m.exps_.size()) throw precondition_error("variable position out of range");
    m.exps_[i] = 1;
    return m;
}

MultiIndex::exponent_type MultiIndex::at(std::string_view name) const {
    auto i = vars_.index_of(name);
    if (!i) throw precondition_error("unknown variable: " + std::string(name));
    return exps_[*i];
}

unsigned MultiIndex::norm() const noexcept {
    return std::accumulate(exps_.begin(), exps_.end(), 0u);
}

bool MultiIndex::is_zero() const noexcept {
    return std::all_of(exps_.begin(), exps_.end(), [](exponent_type e) { return e == 0; });
}

std::vector<std::size_t> MultiIndex::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i] != 0) out.push_back(i);
    return out;
}

bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.exps_ == b.exps_ && a.vars_ == b.vars_;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    require_same_vars(a.vars(), b.vars());
    std::vector<MultiIndex::exponent_type> e(a.exponents());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += b[i];
    return MultiIndex(a.vars(), std::move(e));
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
    if (!leq(b, a)) throw precondition_error("multi-index difference would be negative");
    std::vector<MultiIndex::exponent_type> e(a.exponents());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b[i];
    return MultiIndex(a.vars(), std::move(e));
}

MultiIndex scale_componentwise(const MultiIndex& a, std::span<const unsigned> factors) {
    if (factors.size() != a.size()) throw precondition_error("scaling vector length mismatch");
    std::vector<MultiIndex::exponent_type> e(a.exponents());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] *= factors[i];
    return MultiIndex(a.vars(), std::move(e));
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
    require_same_vars(a.vars(), b.vars());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

MultiIndex join(const MultiIndex& a, const MultiIndex& b) {
    require_same_vars(a.vars(), b.vars());
    std::vector<MultiIndex::exponent_type> e(a.exponents());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::max(e[i], b[i]);
    return MultiIndex(a.vars(), std::move(e));
}

std::vector<MultiIndex> below(const MultiIndex& beta) {
    std::vector<MultiIndex> out;
    std::vector<MultiIndex::exponent_type> cur(beta.size(), 0);
    // Odometer over the box.
    while (true) {
        out.emplace_back(beta.vars(), cur);
        std::size_t i = 0;
        while (i < cur.size() && cur[i] == beta[i]) cur[i++] = 0;
        if (i == cur.size()) break;
        ++cur[i];
    }
    std::sort(out.begin(), out.end(), GrLexLess{});
    return out;
}

MultiIndex concat(const VarSet& joint, const MultiIndex& a, const MultiIndex& b) {
    if (joint.size() != a.size() + b.size()) throw precondition_error("concatenation ambient mismatch");
    std::vector<MultiIndex::exponent_type> e(a.exponents());
    e.insert(e.end(), b.exponents().begin(), b.exponents().end());
    return MultiIndex(joint, std::move(e));
}

MultiIndex relabel(const MultiIndex& a, const VarSet& target) {
    if (a.vars() == target) return a;
    MultiIndex out(target);
    std::vector<MultiIndex::exponent_type> e(target.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        auto j = target.index_of(a.vars()[i]);
        if (!j) throw precondition_error("variable " + a.vars()[i] + " missing from target");
        e[*j] = a[i];
    }
    return MultiIndex(target, std::move(e));
}

bool grlex_less(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    std::uint64_t na = 0, nb = 0;
    for (auto x : a) na += x;
    for (auto x : b) nb += x;
    if (na != nb) return na < nb;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return a.size() < b.size();
}

// ---------------------------------------------------------------- CoIdeal

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void collect_total_degree(const VarSet& vars, std::size_t pos, unsigned budget,
                          std::vector<MultiIndex::exponent_type>& cur, IndexSet& out) {
    if (pos == cur.size()) {
        out.emplace(vars, cur);
        return;
    }
    for (unsigned e = 0; e <= budget; ++e) {
        cur[pos] = e;
        collect_total_degree(vars, pos + 1, budget - e, cur, out);
    }
    cur[pos] = 0;
}

} // namespace

CoIdeal::CoIdeal(VarSet vars, IndexSet members) {
    auto d = std::make_shared<Data>();
    d->vars = std::move(vars);
    d->members = std::move(members);
    d->top = MultiIndex(d->vars);
    for (const auto& m : d->members) {
        d->max_norm = std::max(d->max_norm, m.norm());
        d->top = join(d->top, m);
    }
    if (d->members.size() == binomial(d->vars.size() + d->max_norm, d->vars.size())) {
        d->shape = Shape::total_degree;
    } else {
        std::uint64_t box = 1;
        for (auto e : d->top.exponents()) box *= e + 1;
        d->shape = box == d->members.size() ? Shape::box : Shape::explicit_set;
    }
    data_ = std::move(d);
}

CoIdeal CoIdeal::tm(VarSet vars, unsigned m) {
    IndexSet members;
    std::vector<MultiIndex::exponent_type> cur(vars.size(), 0);
    collect_total_degree(vars, 0, m, cur, members);
    return CoIdeal(std::move(vars), std::move(members));
}

CoIdeal CoIdeal::below(const MultiIndex& beta) {
    auto list = hsforge::below(beta);
    return CoIdeal(beta.vars(), IndexSet(list.begin(), list.end()));
}

CoIdeal CoIdeal::from_members(VarSet vars, const std::vector<MultiIndex>& members) {
    IndexSet set;
    for (const auto& m : members) {
        if (!(m.vars() == vars)) throw validation_error("co-ideal member over the wrong variables");
        set.insert(m);
    }
    if (!set.count(MultiIndex(vars))) throw validation_error("co-ideal must contain 0");
    for (const auto& m : set) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            auto e = m.exponents();
            --e[i];
            if (!set.count(MultiIndex(vars, e))) throw validation_error("co-ideal is not downward closed");
        }
    }
    return CoIdeal(std::move(vars), std::move(set));
}

bool CoIdeal::contains(const MultiIndex& alpha) const {
    if (alpha.norm() > data_->max_norm) return false;
    return data_->members.count(alpha) != 0;
}

bool CoIdeal::is_subset_of(const CoIdeal& other) const {
    if (!(vars() == other.vars())) throw precondition_error("co-ideal ambient mismatch");
    return std::all_of(members().begin(), members().end(),
                       [&](const MultiIndex& m) { return other.contains(m); });
}

bool operator==(const CoIdeal& a, const CoIdeal& b) {
    if (a.data_ == b.data_) return true;
    if (!(a.vars() == b.vars()) || a.size() != b.size()) return false;
    return std::equal(a.members().begin(), a.members().end(), b.members().begin());
}

CoIdeal intersect(const CoIdeal& a, const CoIdeal& b) {
    if (!(a.vars() == b.vars())) throw precondition_error("co-ideal ambient mismatch");
    std::vector<MultiIndex> out;
    for (const auto& m : a.members())
        if (b.contains(m)) out.push_back(m);
    return CoIdeal::from_members(a.vars(), out);
}

CoIdeal unite(const CoIdeal& a, const CoIdeal& b) {
    if (!(a.vars() == b.vars())) throw precondition_error("co-ideal ambient mismatch");
    std::vector<MultiIndex> out(a.members().begin(), a.members().end());
    out.insert(out.end(), b.members().begin(), b.members().end());
    return CoIdeal::from_members(a.vars(), out);
}

CoIdeal slice(const CoIdeal& delta, unsigned m) {
    std::vector<MultiIndex> out;
    for (const auto& x : delta.members())
        if (x.norm() <= m) out.push_back(x);
    return CoIdeal::from_members(delta.vars(), out);
}

CoIdeal product(const CoIdeal& a, const CoIdeal& b) {
    VarSet joint = disjoint_union(a.vars(), b.vars());
    std::vector<MultiIndex> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a.members())
        for (const auto& y : b.members()) out.push_back(concat(joint, x, y));
    return CoIdeal::from_members(joint, out);
}

std::vector<MultiIndex> minimal_outside(const CoIdeal& delta, unsigned cap) {
    IndexSet found;
    const auto n = delta.vars().size();
    for (const auto& m : delta.members()) {
        for (std::size_t i = 0; i < n; ++i) {
            auto e = m.exponents();
            ++e[i];
            MultiIndex cand(delta.vars(), e);
            if (cand.norm() > cap || delta.contains(cand)) continue;
            bool minimal = true;
            for (std::size_t j = 0; j < n && minimal; ++j) {
                if (e[j] == 0) continue;
                auto f = e;
                --f[j];
                minimal = delta.contains(MultiIndex(delta.vars(), f));
            }
            if (minimal) found.insert(std::move(cand));
        }
    }
    return {found.begin(), found.end()};
}

// ------------------------------------------------------------- partitions

namespace {

void ordered_partitions_rec(const MultiIndex& remaining, std::size_t slots_left, std::vector<MultiIndex>& cur,
                            const std::function<void(std::span<const MultiIndex>)>& visit,
                            const std::stop_token& stop) {
    if (stop.stop_requested()) throw cancelled();
    if (slots_left == 0) {
        if (remaining.is_zero()) visit(cur);
        return;
    }
    if (remaining.norm() < slots_left) return;
    if (slots_left == 1) {
        cur.push_back(remaining);
        visit(cur);
        cur.pop_back();
        return;
    }
    for (const auto& part : below(remaining)) {
        if (part.is_zero()) continue;
        MultiIndex rest = remaining - part;
        if (rest.norm() < slots_left - 1) continue;
        cur.push_back(part);
        ordered_partitions_rec(rest, slots_left - 1, cur, visit, stop);
        cur.pop_back();
    }
}

} // namespace

void for_each_ordered_partition(const MultiIndex& alpha, std::size_t d,
                                const std::function<void(std::span<const MultiIndex>)>& visit,
                                std::stop_token stop) {
    std::vector<MultiIndex> cur;
    cur.reserve(d);
    ordered_partitions_rec(alpha, d, cur, visit, stop);
}

std::vector<std::vector<MultiIndex>> enum_ordered_partitions(const MultiIndex& alpha, std::size_t d,
                                                             std::stop_token stop) {
    std::vector<std::vector<MultiIndex>> out;
    for_each_ordered_partition(
        alpha, d, [&](std::span<const MultiIndex> p) { out.emplace_back(p.begin(), p.end()); }, stop);
    return out;
}

std::vector<std::size_t> slot_vars(const MultiIndex& alpha) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < alpha.size(); ++t) out.insert(out.end(), alpha[t], t);
    return out;
}

const MultiIndex& IndexedPartition::at(std::size_t var, unsigned r) const {
    if (var >= shape.size() || r == 0 || r > shape[var]) throw precondition_error("slot outside [alpha]");
    std::size_t k = r - 1;
    for (std::size_t t = 0; t < var; ++t) k += shape[t];
    return parts[k];
}

std::size_t IndexedPartition::slot_var(std::size_t k) const {
    for (std::size_t t = 0; t < shape.size(); ++t) {
        if (k < shape[t]) return t;
        k -= shape[t];
    }
    throw precondition_error("slot outside [alpha]");
}

std::vector<IndexedPartition> enum_indexed_partitions(const MultiIndex& e, const MultiIndex& alpha,
                                                      std::stop_token stop) {
    std::vector<IndexedPartition> out;
    if (alpha.norm() > e.norm()) return out;
    for_each_ordered_partition(
        e, alpha.norm(),
        [&](std::span<const MultiIndex> p) { out.push_back({alpha, {p.begin(), p.end()}}); }, stop);
    return out;
}

} // namespace hsforge
