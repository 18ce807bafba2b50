#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hsforge {

struct Field {
    enum class Kind { rational, prime };
    Kind kind = Kind::rational;
    std::uint32_t p = 0;

    static Field rationals() { return {}; }
    // Throws precondition_error unless p is a prime below 2^31.
    static Field prime(std::uint64_t p);

    bool is_rational() const noexcept { return kind == Kind::rational; }
    friend bool operator==(const Field&, const Field&) = default;
};

// Element of Q (reduced rational) or of GF(p) (residue in [0, p)).
class Scalar {
public:
    struct Residue {
        std::uint32_t value;
        std::uint32_t p;
        friend bool operator==(const Residue&, const Residue&) = default;
    };

    Scalar() : v_(mpq_class(0)) {}
    Scalar(const Field& f, long long n);
    // Throws precondition_error if the denominator vanishes in f.
    Scalar(const Field& f, const mpq_class& q);

    Field field() const;
    bool is_zero() const;
    bool is_one() const;
    // Rational value; residues are reported as their representative in [0, p).
    mpq_class to_rational() const;
    // Canonical text: "p/q" (or "p") over Q, the residue over GF(p).
    std::string to_string() const;
    const std::variant<mpq_class, Residue>& raw() const noexcept { return v_; }

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    // Throws precondition_error on division by zero.
    Scalar inverse() const;

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

private:
    std::variant<mpq_class, Residue> v_;
};

// k[x_1..x_n] with named generators.
class PolyRing {
public:
    PolyRing(Field field, std::vector<std::string> gens);

    const Field& field() const noexcept { return data_->field; }
    std::size_t ngens() const noexcept { return data_->gens.size(); }
    const std::string& gen(std::size_t i) const { return data_->gens[i]; }
    const std::vector<std::string>& gens() const noexcept { return data_->gens; }
    std::optional<std::size_t> gen_index(const std::string& name) const;

    friend bool operator==(const PolyRing& a, const PolyRing& b);

private:
    struct Data {
        Field field;
        std::vector<std::string> gens;
    };
    std::shared_ptr<const Data> data_;
};

using Monomial = std::vector<std::uint32_t>;

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

class Poly {
public:
    using Terms = std::map<Monomial, Scalar, MonomialLess>;

    explicit Poly(PolyRing ring);
    static Poly constant(const PolyRing& ring, const Scalar& c);
    static Poly constant(const PolyRing& ring, long long c);
    static Poly gen(const PolyRing& ring, std::size_t i);
    static Poly monomial(const PolyRing& ring, Monomial m, const Scalar& c);

    const PolyRing& ring() const noexcept { return ring_; }
    const Terms& terms() const& noexcept { return terms_; }
    Terms terms() && { return std::move(terms_); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const;
    Scalar constant_term() const;
    unsigned degree() const;

    // Adds c·x^m in place.
    void add_term(const Monomial& m, const Scalar& c);

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly scaled(const Scalar& c) const;
    Poly derivative(std::size_t i) const;
    Poly pow(unsigned e) const;

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b);
    // Arbitrary total order; used for cache keys.
    friend bool operator<(const Poly& a, const Poly& b);

private:
    PolyRing ring_;
    Terms terms_;
};

// k-derivation of A, stored by its values on the generators.
class Derivation {
public:
    Derivation(PolyRing ring, std::vector<Poly> images);
    static Derivation partial(const PolyRing& ring, std::size_t i);

    const PolyRing& ring() const noexcept { return ring_; }
    const std::vector<Poly>& images() const& noexcept { return images_; }
    std::vector<Poly> images() && { return std::move(images_); }
    Poly operator()(const Poly& a) const;

    friend bool operator==(const Derivation&, const Derivation&) = default;

private:
    PolyRing ring_;
    std::vector<Poly> images_;
};

Poly determinant(const std::vector<std::vector<Poly>>& matrix);

// Coefficients c with delta = Σ_j c_j · generators[j]. Uses Cramer's rule and requires the
// matrix (generators[j](x_i)) to have a nonzero scalar determinant; otherwise throws solver_error
// ("unsupported generating set").
std::vector<Poly> solve_in_derivation_basis(const Derivation& delta, std::span<const Derivation> generators);

using DerivationSolver =
    std::function<std::vector<Poly>(const Derivation& delta, std::span<const Derivation> generators)>;

} // namespace hsforge
