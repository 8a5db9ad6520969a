#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amorph/exact.hpp"

namespace amorph {

/// Whether parameters describe a relation (graph) or an idempotent. The
/// idempotent analogues of lambda and mu are Krein parameters and need not be
/// integers.
enum class SrKind { Relation, Idempotent };

/// (v, k, lambda, mu) with restricted eigenvalues r > s. For idempotents k is
/// the rank and r, s the restricted dual eigenvalues.
struct SrgParams {
    std::int64_t v = 0;
    std::int64_t k = 0;
    Rational lambda;
    Rational mu;
    Rational r;
    Rational s;
};

/// Derives lambda = k + r + s + rs and mu = k + rs and checks
/// k(k - lambda - 1) = (v - k - 1) mu, r >= 0 > s, 0 < k < v - 1.
/// Throws InvalidSrgParams. r and s may be given in either order.
SrgParams make_srg_params(std::int64_t v, std::int64_t k, const Rational& r, const Rational& s,
                          SrKind kind = SrKind::Relation);

enum class SrgType { LatinSquare, NegativeLatinSquare, Conference };

const char* to_string(SrgType t);

struct TypeTag {
    SrgType type = SrgType::LatinSquare;
    std::int64_t n = 0; // negative for NegativeLatinSquare; 0 for Conference
    std::int64_t t = 0;
    bool strict = false; // (negative) Latin square type and not a conference graph

    std::string str() const;
    friend bool operator==(const TypeTag&, const TypeTag&) = default;
};

std::vector<TypeTag> classify_srg(const SrgParams& params);
std::vector<TypeTag> classify_srg(std::int64_t v, std::int64_t k, const Rational& r, const Rational& s,
                                  SrKind kind = SrKind::Relation);

bool has_type(const std::vector<TypeTag>& tags, SrgType type);

/// Parameters of a (negative) Latin square type graph: v = n^2,
/// k = t(n - 1), eigenvalues n - t and -t.
SrgParams latin_params(std::int64_t n, std::int64_t t);

struct RailwayResult {
    std::array<Rational, 4> theta;
    std::array<Rational, 4> mult;
};

/// Restricted spectrum of A1 + A2 for edge-disjoint commuting SRGs with
/// valencies k_i and restricted eigenvalues a_i, b_i. Throws
/// DegenerateDenominator, or PropertyViolation if the multiplicities fail
/// their sum, trace or positivity checks.
RailwayResult railway(const Rational& v, const Rational& k1, const Rational& a1, const Rational& b1,
                      const Rational& k2, const Rational& a2, const Rational& b2);

enum class ClosureMode { Complement, Union };

struct ClosureResult {
    SrgParams params;
    TypeTag tag;
};

/// Complement: t' = n + 1 - t. Union: t' = t1 + t2 on the same n. Throws
/// TypeMismatch when union inputs differ in type or n.
ClosureResult same_type_closure(ClosureMode mode, const TypeTag& a, const std::optional<TypeTag>& b = std::nullopt);

/// Given v = n^2, a size (valency or rank) and one restricted eigenvalue a
/// with size = -a(n - 1), returns the (negative) Latin square tag with
/// t = -a and other eigenvalue n + a. Throws HypothesisFails.
TypeTag from_single_eigenvalue(SrKind kind, std::int64_t v, std::int64_t size, const Rational& a);

struct SrIdempotent {
    std::int64_t v = 0;
    std::int64_t m = 0;
    Rational a; // larger restricted dual eigenvalue
    Rational b;
};

/// m >= a >= 0 > -1 >= b >= -m, ab = q^2_11 - m, a + b = q^1_11 - q^2_11.
/// Returns the first failing condition, or nullopt.
std::optional<std::string> smith_check(const SrIdempotent& e, const Rational& q111, const Rational& q211);

/// Valency sums of the four relation sets cut out by two strongly regular
/// idempotents (rank m_i, dual eigenvalues a_i, b_i). Throws
/// DegenerateDenominator or PropertyViolation.
std::array<Rational, 4> dual_railway(const Rational& v, const Rational& m1, const Rational& a1, const Rational& b1,
                                     const Rational& m2, const Rational& a2, const Rational& b2);

struct DualRailwaySets {
    std::array<std::vector<std::size_t>, 4> sets; // relation indices
    std::array<Rational, 4> valency_sums;
};

/// Splits relations 1..d by the (a/b, a/b) pattern of Q columns j1 and j2
/// (larger value = a) and sums valencies taken from P row 0.
DualRailwaySets dual_railway_sets(const RatMatrix& P, const RatMatrix& Q, std::size_t j1, std::size_t j2);

/// Principal columns taking exactly two distinct values. Empty for d = 1.
std::vector<std::size_t> sr_detect(const RatMatrix& M);

/// The two distinct principal values of column c, larger first.
std::pair<Rational, Rational> two_values(const RatMatrix& M, std::size_t c);

} // namespace amorph
