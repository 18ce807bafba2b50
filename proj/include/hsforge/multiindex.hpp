#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hsforge {

// Ordered finite set of variable names. Cheap to copy.
class VarSet {
public:
    VarSet();
    explicit VarSet(std::vector<std::string> names);
    VarSet(std::initializer_list<std::string> names) : VarSet(std::vector<std::string>(names)) {}

    std::size_t size() const noexcept { return names_->size(); }
    bool empty() const noexcept { return names_->empty(); }
    const std::string& operator[](std::size_t i) const { return (*names_)[i]; }
    const std::vector<std::string>& names() const noexcept { return *names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    bool contains(std::string_view name) const { return index_of(name).has_value(); }

    friend bool operator==(const VarSet& a, const VarSet& b);

private:
    std::shared_ptr<const std::vector<std::string>> names_;
};

bool disjoint(const VarSet& a, const VarSet& b);
// s ⊔ t with s first; throws precondition_error on a name collision.
VarSet disjoint_union(const VarSet& a, const VarSet& b);

// Exponent vector over a VarSet. Stored densely; the sparse view is `support()`.
class MultiIndex {
public:
    using exponent_type = std::uint32_t;

    explicit MultiIndex(VarSet vars);
    MultiIndex(VarSet vars, std::vector<exponent_type> exps);
    MultiIndex(VarSet vars, std::initializer_list<std::pair<std::string_view, exponent_type>> entries);
    static MultiIndex unit(VarSet vars, std::size_t i);

    const VarSet& vars() const noexcept { return vars_; }
    std::size_t size() const noexcept { return exps_.size(); }
    exponent_type operator[](std::size_t i) const { return exps_[i]; }
    exponent_type at(std::string_view name) const;
    const std::vector<exponent_type>& exponents() const noexcept { return exps_; }
    unsigned norm() const noexcept;
    bool is_zero() const noexcept;
    std::vector<std::size_t> support() const;

    friend bool operator==(const MultiIndex& a, const MultiIndex& b);

private:
    VarSet vars_;
    std::vector<exponent_type> exps_;
};

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
// Requires b ≤ a.
MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
MultiIndex scale_componentwise(const MultiIndex& a, std::span<const unsigned> factors);
bool leq(const MultiIndex& a, const MultiIndex& b);
MultiIndex join(const MultiIndex& a, const MultiIndex& b);
// All α with α ≤ beta, in graded-lex order.
std::vector<MultiIndex> below(const MultiIndex& beta);
// Index over s ⊔ t from halves over s and t.
MultiIndex concat(const VarSet& joint, const MultiIndex& a, const MultiIndex& b);
// Reinterprets `a` over `target`, matching variables by name. Missing names throw.
MultiIndex relabel(const MultiIndex& a, const VarSet& target);

// Graded order: total degree, then larger exponent of an earlier variable first.
// Shared by multi-indices and polynomial monomials.
bool grlex_less(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

struct GrLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        return grlex_less(a.exponents(), b.exponents());
    }
};

using IndexSet = std::set<MultiIndex, GrLexLess>;

// Finite co-ideal (downward closed, contains 0) of exponent vectors.
class CoIdeal {
public:
    enum class Shape { total_degree, box, explicit_set };

    static CoIdeal tm(VarSet vars, unsigned m);
    static CoIdeal below(const MultiIndex& beta);
    static CoIdeal from_members(VarSet vars, const std::vector<MultiIndex>& members);

    const VarSet& vars() const noexcept { return data_->vars; }
    const IndexSet& members() const& noexcept { return data_->members; }
    IndexSet members() && { return data_->members; }
    std::size_t size() const noexcept { return data_->members.size(); }
    bool contains(const MultiIndex& alpha) const;
    unsigned max_norm() const noexcept { return data_->max_norm; }
    bool is_subset_of(const CoIdeal& other) const;

    // Canonical description: t_m if the set equals t_m, else n_β if it is a box, else explicit.
    Shape shape() const noexcept { return data_->shape; }
    const MultiIndex& top() const noexcept { return data_->top; }

    friend bool operator==(const CoIdeal& a, const CoIdeal& b);

private:
    struct Data {
        VarSet vars;
        IndexSet members;
        unsigned max_norm = 0;
        Shape shape = Shape::explicit_set;
        MultiIndex top{VarSet{}};
    };
    CoIdeal(VarSet vars, IndexSet members);
    std::shared_ptr<const Data> data_;
};

CoIdeal intersect(const CoIdeal& a, const CoIdeal& b);
CoIdeal unite(const CoIdeal& a, const CoIdeal& b);
// Δ^m = Δ ∩ t_m.
CoIdeal slice(const CoIdeal& delta, unsigned m);
// ∇ × Δ over the disjoint union of the ambient variable sets.
CoIdeal product(const CoIdeal& a, const CoIdeal& b);
// Minimal elements of the complement with norm ≤ cap, in graded-lex order.
std::vector<MultiIndex> minimal_outside(const CoIdeal& delta, unsigned cap);

// Ordered partitions of alpha into d nonzero parts, in lexicographic order of the part sequence.
void for_each_ordered_partition(const MultiIndex& alpha, std::size_t d,
                                const std::function<void(std::span<const MultiIndex>)>& visit,
                                std::stop_token stop = {});
std::vector<std::vector<MultiIndex>> enum_ordered_partitions(const MultiIndex& alpha, std::size_t d,
                                                             std::stop_token stop = {});

// A map from the slots [α] = {(t, r) : 1 ≤ r ≤ α_t} to nonzero indices summing to `total`.
// Slots are ordered by variable then r; `parts[k]` belongs to the k-th slot.
struct IndexedPartition {
    MultiIndex shape;
    std::vector<MultiIndex> parts;

    // r is 1-based.
    const MultiIndex& at(std::size_t var, unsigned r) const;
    std::size_t slot_var(std::size_t k) const;
};

std::vector<IndexedPartition> enum_indexed_partitions(const MultiIndex& e, const MultiIndex& alpha,
                                                      std::stop_token stop = {});
// Variable owning each slot of [alpha], in slot order.
std::vector<std::size_t> slot_vars(const MultiIndex& alpha);

} // namespace hsforge
