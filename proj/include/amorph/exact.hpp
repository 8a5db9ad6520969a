#pragma once

// Exact rational scalars, dense rational matrices and the handful of
// linear-algebra routines the rest of the library is built on. No floating
// point is used anywhere in this module.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace amorph {

using BigInt = mpz_class;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(int value) : q_(value) {}
    Rational(long value) : q_(value) {}
    Rational(long long value);
    Rational(const BigInt& value) : q_(value) {}
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(const mpq_class& value) : q_(value) { q_.canonicalize(); }

    /// Parses `a` or `a/b`; throws Error(ParseError) on malformed text or b = 0.
    static Rational parse(std::string_view text);

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_integer() const { return q_.get_den() == 1; }
    bool is_zero() const { return sgn(q_) == 0; }
    int sign() const { return sgn(q_); }

    /// Throws if not an integer or out of range.
    long long to_int64() const;

    /// `a` for integers, `a/b` otherwise.
    std::string str() const;

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_;
};

using RatVector = std::vector<Rational>;

/// Dense row-major rational matrix with dimensions >= 1 (0 x 0 only when
/// default-constructed).
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(std::size_t rows, std::size_t cols);
    RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);
    static RatMatrix from_rows(const std::vector<RatVector>& rows);
    static RatMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    RatVector column(std::size_t c) const;

    RatMatrix transpose() const;
    RatMatrix operator*(const RatMatrix& o) const;
    RatMatrix scaled(const Rational& s) const;
    RatVector apply(std::span<const Rational> x) const;

    friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Rational> data_;
};

std::ostream& operator<<(std::ostream& os, const RatMatrix& m);

/// Coefficients in degree-descending order: {1, -2, -3} is x^2 - 2x - 3.
struct Polynomial {
    std::vector<Rational> coeffs;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    Rational operator()(const Rational& x) const;
    std::string str() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

struct IntegerRoots {
    /// Integer roots with multiplicity, ascending.
    std::vector<BigInt> roots;
    /// What is left after deflating every integer root; the constant 1 when the
    /// polynomial splits over the integers.
    Polynomial residual;

    bool splits() const { return residual.degree() == 0; }
};

/// Exact inverse; throws SingularMatrix. The product with the input is checked.
RatMatrix inverse(const RatMatrix& m);

/// Monic characteristic polynomial det(xI - M).
Polynomial char_poly(const RatMatrix& m);

/// Integer roots of a monic integer polynomial, plus the residual factor.
/// Throws NonMonicOrNonIntegral.
IntegerRoots integer_roots(const Polynomial& p);

/// Basis of {x : Mx = 0} read off the reduced echelon form (one vector per
/// free column, with a 1 in that column). Every vector is checked.
std::vector<RatVector> nullspace(const RatMatrix& m);

/// Rank over the rationals.
std::size_t rank(const RatMatrix& m);

std::size_t hash_value(std::span<const Rational> v);

} // namespace amorph

template <>
struct std::hash<amorph::Rational> {
    std::size_t operator()(const amorph::Rational& r) const;
};
