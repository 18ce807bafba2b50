#include "hsforge/algebra.hpp"

#include <algorithm>

#include "hsforge/error.hpp"
#include "hsforge/multiindex.hpp"

namespace hsforge {

// ------------------------------------------------------------------ Field

Field Field::prime(std::uint64_t p) {
    if (p < 2 || p >= (1ull << 31)) throw precondition_error("field characteristic out of range");
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw precondition_error("field characteristic is not prime: " + std::to_string(p));
    return {Kind::prime, static_cast<std::uint32_t>(p)};
}

// ----------------------------------------------------------------- Scalar

namespace {

std::uint32_t reduce(long long n, std::uint32_t p) {
    long long r = n % static_cast<long long>(p);
    if (r < 0) r += p;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t reduce(const mpz_class& n, std::uint32_t p) {
    mpz_class r = n % p;
    if (r < 0) r += p;
    return static_cast<std::uint32_t>(r.get_ui());
}

std::uint32_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

[[noreturn]] void field_mismatch() { throw precondition_error("scalar field mismatch"); }

} // namespace

Scalar::Scalar(const Field& f, long long n) {
    if (f.is_rational())
        v_ = mpq_class(static_cast<long>(n));
    else
        v_ = Residue{reduce(n, f.p), f.p};
}

Scalar::Scalar(const Field& f, const mpq_class& q) {
    if (f.is_rational()) {
        mpq_class c(q);
        c.canonicalize();
        v_ = std::move(c);
        return;
    }
    std::uint32_t den = reduce(q.get_den(), f.p);
    if (den == 0) throw precondition_error("denominator vanishes modulo " + std::to_string(f.p));
    std::uint64_t num = reduce(q.get_num(), f.p);
    v_ = Residue{static_cast<std::uint32_t>(num * pow_mod(den, f.p - 2, f.p) % f.p), f.p};
}

Field Scalar::field() const {
    if (auto r = std::get_if<Residue>(&v_)) return {Field::Kind::prime, r->p};
    return Field::rationals();
}

bool Scalar::is_zero() const {
    if (auto r = std::get_if<Residue>(&v_)) return r->value == 0;
    return sgn(std::get<mpq_class>(v_)) == 0;
}

bool Scalar::is_one() const {
    if (auto r = std::get_if<Residue>(&v_)) return r->value == 1;
    return std::get<mpq_class>(v_) == 1;
}

mpq_class Scalar::to_rational() const {
    if (auto r = std::get_if<Residue>(&v_)) return mpq_class(static_cast<unsigned long>(r->value));
    return std::get<mpq_class>(v_);
}

std::string Scalar::to_string() const {
    if (auto r = std::get_if<Residue>(&v_)) return std::to_string(r->value);
    return std::get<mpq_class>(v_).get_str();
}

Scalar Scalar::operator-() const {
    Scalar out(*this);
    if (auto r = std::get_if<Residue>(&out.v_))
        r->value = r->value == 0 ? 0 : r->p - r->value;
    else
        std::get<mpq_class>(out.v_) = -std::get<mpq_class>(out.v_);
    return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    if (auto r = std::get_if<Residue>(&v_)) {
        auto s = std::get_if<Residue>(&o.v_);
        if (!s || s->p != r->p) field_mismatch();
        r->value = static_cast<std::uint32_t>((std::uint64_t(r->value) + s->value) % r->p);
    } else {
        auto s = std::get_if<mpq_class>(&o.v_);
        if (!s) field_mismatch();
        std::get<mpq_class>(v_) += *s;
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
    if (auto r = std::get_if<Residue>(&v_)) {
        auto s = std::get_if<Residue>(&o.v_);
        if (!s || s->p != r->p) field_mismatch();
        r->value = static_cast<std::uint32_t>(std::uint64_t(r->value) * s->value % r->p);
    } else {
        auto s = std::get_if<mpq_class>(&o.v_);
        if (!s) field_mismatch();
        std::get<mpq_class>(v_) *= *s;
    }
    return *this;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw precondition_error("division by zero");
    Scalar out(*this);
    if (auto r = std::get_if<Residue>(&out.v_))
        r->value = pow_mod(r->value, r->p - 2, r->p);
    else
        std::get<mpq_class>(out.v_) = 1 / std::get<mpq_class>(out.v_);
    return out;
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.v_.index() != b.v_.index()) field_mismatch();
    if (auto r = std::get_if<Scalar::Residue>(&a.v_)) return *r == std::get<Scalar::Residue>(b.v_);
    return std::get<mpq_class>(a.v_) == std::get<mpq_class>(b.v_);
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    if (a.v_.index() != b.v_.index()) return a.v_.index() <=> b.v_.index();
    if (auto r = std::get_if<Scalar::Residue>(&a.v_)) {
        const auto& s = std::get<Scalar::Residue>(b.v_);
        if (r->p != s.p) return r->p <=> s.p;
        return r->value <=> s.value;
    }
    int c = cmp(std::get<mpq_class>(a.v_), std::get<mpq_class>(b.v_));
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

// --------------------------------------------------------------- PolyRing

PolyRing::PolyRing(Field field, std::vector<std::string> gens) {
    VarSet check(gens);  // rejects duplicates and empty names
    (void)check;
    data_ = std::make_shared<const Data>(Data{field, std::move(gens)});
}

std::optional<std::size_t> PolyRing::gen_index(const std::string& name) const {
    auto it = std::find(data_->gens.begin(), data_->gens.end(), name);
    if (it == data_->gens.end()) return std::nullopt;
    return static_cast<std::size_t>(it - data_->gens.begin());
}

bool operator==(const PolyRing& a, const PolyRing& b) {
    return a.data_ == b.data_ || (a.data_->field == b.data_->field && a.data_->gens == b.data_->gens);
}

// ------------------------------------------------------------------- Poly

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const { return grlex_less(a, b); }

namespace {

void require_same_ring(const PolyRing& a, const PolyRing& b) {
    if (!(a == b)) throw precondition_error("polynomial ring mismatch");
}

} // namespace

Poly::Poly(PolyRing ring) : ring_(std::move(ring)) {}

Poly Poly::constant(const PolyRing& ring, const Scalar& c) {
    return monomial(ring, Monomial(ring.ngens(), 0), c);
}

Poly Poly::constant(const PolyRing& ring, long long c) { return constant(ring, Scalar(ring.field(), c)); }

Poly Poly::gen(const PolyRing& ring, std::size_t i) {
    if (i >= ring.ngens()) throw precondition_error("generator index out of range");
    Monomial m(ring.ngens(), 0);
    m[i] = 1;
    return monomial(ring, std::move(m), Scalar(ring.field(), 1));
}

Poly Poly::monomial(const PolyRing& ring, Monomial m, const Scalar& c) {
    if (m.size() != ring.ngens()) throw precondition_error("monomial length mismatch");
    Poly p(ring);
    if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    const auto& m = terms_.begin()->first;
    return terms_.size() == 1 && std::all_of(m.begin(), m.end(), [](std::uint32_t e) { return e == 0; });
}

Scalar Poly::constant_term() const {
    if (!terms_.empty()) {
        const auto& [m, c] = *terms_.begin();
        if (std::all_of(m.begin(), m.end(), [](std::uint32_t e) { return e == 0; })) return c;
    }
    return Scalar(ring_.field(), 0);
}

unsigned Poly::degree() const {
    if (terms_.empty()) return 0;
    unsigned d = 0;
    for (auto e : terms_.rbegin()->first) d += e;
    return d;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly out(ring_);
    for (const auto& [m, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, -c);
    return out;
}

Poly& Poly::operator+=(const Poly& o) {
    require_same_ring(ring_, o.ring_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    require_same_ring(ring_, o.ring_);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    require_same_ring(a.ring_, b.ring_);
    Poly out(a.ring_);
    if (a.is_zero() || b.is_zero()) return out;
    Monomial m(a.ring_.ngens());
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            auto [it, inserted] = out.terms_.try_emplace(m, ca);
            if (inserted)
                it->second *= cb;
            else
                it->second += ca * cb;
        }
    }
    std::erase_if(out.terms_, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly Poly::scaled(const Scalar& c) const {
    Poly out(ring_);
    if (c.is_zero()) return out;
    for (const auto& [m, v] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, v * c);
    return out;
}

Poly Poly::derivative(std::size_t i) const {
    if (i >= ring_.ngens()) throw precondition_error("generator index out of range");
    Poly out(ring_);
    for (const auto& [m, c] : terms_) {
        if (m[i] == 0) continue;
        Monomial d = m;
        --d[i];
        out.add_term(d, c * Scalar(ring_.field(), static_cast<long long>(m[i])));
    }
    return out;
}

Poly Poly::pow(unsigned e) const {
    Poly result = constant(ring_, 1);
    Poly base = *this;
    while (e) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

bool operator==(const Poly& a, const Poly& b) {
    require_same_ring(a.ring_, b.ring_);
    return a.terms_ == b.terms_;
}

bool operator<(const Poly& a, const Poly& b) {
    return std::lexicographical_compare(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return MonomialLess{}(x.first, y.first);
            return (x.second <=> y.second) < 0;
        });
}

// ------------------------------------------------------------- Derivation

Derivation::Derivation(PolyRing ring, std::vector<Poly> images) : ring_(std::move(ring)), images_(std::move(images)) {
    if (images_.size() != ring_.ngens()) throw precondition_error("derivation needs one image per generator");
    for (const auto& p : images_) require_same_ring(ring_, p.ring());
}

Derivation Derivation::partial(const PolyRing& ring, std::size_t i) {
    std::vector<Poly> images;
    for (std::size_t j = 0; j < ring.ngens(); ++j) images.push_back(Poly::constant(ring, i == j ? 1 : 0));
    return Derivation(ring, std::move(images));
}

Poly Derivation::operator()(const Poly& a) const {
    require_same_ring(ring_, a.ring());
    Poly out(ring_);
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (images_[i].is_zero()) continue;
        out += a.derivative(i) * images_[i];
    }
    return out;
}

Poly determinant(const std::vector<std::vector<Poly>>& matrix) {
    const std::size_t n = matrix.size();
    if (n == 0) throw precondition_error("determinant of an empty matrix needs a ring");
    for (const auto& row : matrix)
        if (row.size() != n) throw precondition_error("determinant of a non-square matrix");
    const PolyRing& ring = matrix[0][0].ring();
    if (n == 1) return matrix[0][0];
    // Laplace expansion along the first row; sizes here are the number of ring generators.
    Poly det(ring);
    for (std::size_t j = 0; j < n; ++j) {
        if (matrix[0][j].is_zero()) continue;
        std::vector<std::vector<Poly>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Poly> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(matrix[i][k]);
            minor.push_back(std::move(row));
        }
        Poly term = matrix[0][j] * determinant(minor);
        if (j % 2) det -= term;
        else det += term;
    }
    return det;
}

std::vector<Poly> solve_in_derivation_basis(const Derivation& delta, std::span<const Derivation> generators) {
    const PolyRing& ring = delta.ring();
    const std::size_t n = ring.ngens();
    if (generators.size() != n) throw solver_error("unsupported generating set");
    if (n == 0) return {};
    // matrix[i][j] = generators[j](x_i)
    std::vector<std::vector<Poly>> matrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!(generators[j].ring() == ring)) throw precondition_error("derivation ring mismatch");
            matrix[i].push_back(generators[j].images()[i]);
        }
    Poly det = determinant(matrix);
    if (det.is_zero() || !det.is_constant()) throw solver_error("unsupported generating set");
    Scalar inv = det.constant_term().inverse();
    std::vector<Poly> coeffs;
    for (std::size_t j = 0; j < n; ++j) {
        auto replaced = matrix;
        for (std::size_t i = 0; i < n; ++i) replaced[i][j] = delta.images()[i];
        coeffs.push_back(determinant(replaced).scaled(inv));
    }
    return coeffs;
}

} // namespace hsforge
