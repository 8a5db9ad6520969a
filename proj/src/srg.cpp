#include "amorph/srg.hpp"

#include <algorithm>
#include <set>

#include "amorph/error.hpp"

namespace amorph {

namespace {

Rational R(std::int64_t x) { return Rational(static_cast<long long>(x)); }

std::optional<std::int64_t> exact_sqrt(std::int64_t v)
{
    if (v < 0) {
        return std::nullopt;
    }
    BigInt root;
    BigInt value(static_cast<long>(v));
    mpz_sqrt(root.get_mpz_t(), value.get_mpz_t());
    if (root * root != value) {
        return std::nullopt;
    }
    return root.get_si();
}

} // namespace

const char* to_string(SrgType t)
{
    switch (t) {
    case SrgType::LatinSquare: return "LatinSquare";
    case SrgType::NegativeLatinSquare: return "NegativeLatinSquare";
    case SrgType::Conference: return "Conference";
    }
    return "?";
}

std::string TypeTag::str() const
{
    if (type == SrgType::Conference) {
        return "Conference";
    }
    return std::string(to_string(type)) + "(" + std::to_string(n) + "," + std::to_string(t) + ")" +
           (strict ? " strict" : "");
}

SrgParams make_srg_params(std::int64_t v, std::int64_t k, const Rational& r_in, const Rational& s_in, SrKind kind)
{
    Rational r = std::max(r_in, s_in);
    Rational s = std::min(r_in, s_in);
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::InvalidSrgParams, "(" + std::to_string(v) + "," + std::to_string(k) + "," + r.str() +
                                                     "," + s.str() + "): " + why);
    };
    if (k <= 0 || k >= v - 1) {
        fail("need 0 < k < v - 1");
    }
    if (r.sign() < 0 || s.sign() >= 0) {
        fail("need r >= 0 > s");
    }
    SrgParams p{v, k, R(k) + r + s + r * s, R(k) + r * s, r, s};
    if (kind == SrKind::Relation && (!p.lambda.is_integer() || !p.mu.is_integer())) {
        fail("lambda and mu must be integers");
    }
    if (p.lambda.sign() < 0 || p.mu.sign() < 0) {
        fail("lambda and mu must be nonnegative");
    }
    if (R(k) * (R(k) - p.lambda - 1) != R(v - k - 1) * p.mu) {
        fail("k(k - lambda - 1) != (v - k - 1) mu");
    }
    return p;
}

std::vector<TypeTag> classify_srg(const SrgParams& p)
{
    std::vector<TypeTag> tags;
    const bool conference = 2 * p.k == p.v - 1 && R(4) * p.lambda == R(p.v - 5) && R(4) * p.mu == R(p.v - 1);
    if (auto root = exact_sqrt(p.v)) {
        for (std::int64_t n : {*root, -*root}) {
            if (n - 1 == 0 || p.k % (n - 1) != 0) {
                continue;
            }
            const std::int64_t t = p.k / (n - 1);
            if (t == 0 || (t > 0) != (n > 0)) {
                continue;
            }
            const Rational e1 = R(n - t);
            const Rational e2 = R(-t);
            if ((e1 == p.r && e2 == p.s) || (e1 == p.s && e2 == p.r)) {
                tags.push_back({n > 0 ? SrgType::LatinSquare : SrgType::NegativeLatinSquare, n, t, !conference});
            }
        }
    }
    if (conference) {
        tags.push_back({SrgType::Conference, 0, 0, false});
    }
    return tags;
}

std::vector<TypeTag> classify_srg(std::int64_t v, std::int64_t k, const Rational& r, const Rational& s, SrKind kind)
{
    return classify_srg(make_srg_params(v, k, r, s, kind));
}

bool has_type(const std::vector<TypeTag>& tags, SrgType type)
{
    return std::any_of(tags.begin(), tags.end(), [&](const TypeTag& t) { return t.type == type; });
}

SrgParams latin_params(std::int64_t n, std::int64_t t)
{
    return make_srg_params(n * n, t * (n - 1), R(n - t), R(-t));
}

RailwayResult railway(const Rational& v, const Rational& k1, const Rational& a1, const Rational& b1,
                      const Rational& k2, const Rational& a2, const Rational& b2)
{
    const Rational den = (a1 - b1) * (a2 - b2);
    if (den.is_zero()) {
        throw Error(ErrorKind::DegenerateDenominator, "(a1 - b1)(a2 - b2) = 0");
    }
    RailwayResult out;
    out.theta = {a1 + a2, a1 + b2, b1 + a2, b1 + b2};
    out.mult = {
        (v * b1 * b2 - (k1 - b1) * (k2 - b2)) / den,
        -(v * b1 * a2 - (k1 - b1) * (k2 - a2)) / den,
        -(v * a1 * b2 - (k1 - a1) * (k2 - b2)) / den,
        (v * a1 * a2 - (k1 - a1) * (k2 - a2)) / den,
    };
    Rational sum = 0;
    Rational trace = k1 + k2;
    for (std::size_t i = 0; i < 4; ++i) {
        sum += out.mult[i];
        trace += out.mult[i] * out.theta[i];
    }
    if (sum != v - 1) {
        throw Error(ErrorKind::PropertyViolation, "railway multiplicities sum to " + sum.str());
    }
    if (!trace.is_zero()) {
        throw Error(ErrorKind::PropertyViolation, "railway spectrum has nonzero trace " + trace.str());
    }
    if (a1 > b1 && a2 > b2 && (out.mult[1].sign() <= 0 || out.mult[2].sign() <= 0)) {
        throw Error(ErrorKind::PropertyViolation, "railway m2 or m3 is not positive");
    }
    return out;
}

ClosureResult same_type_closure(ClosureMode mode, const TypeTag& a, const std::optional<TypeTag>& b)
{
    if (a.type == SrgType::Conference || (b && b->type == SrgType::Conference)) {
        throw Error(ErrorKind::TypeMismatch, "closure needs a Latin or negative Latin square tag");
    }
    std::int64_t t = 0;
    if (mode == ClosureMode::Complement) {
        t = a.n + 1 - a.t;
    } else {
        if (!b) {
            throw Error(ErrorKind::TypeMismatch, "union needs two tags");
        }
        if (a.type != b->type || a.n != b->n) {
            throw Error(ErrorKind::TypeMismatch, "union of " + a.str() + " and " + b->str());
        }
        t = a.t + b->t;
    }
    SrgParams params = latin_params(a.n, t);
    for (const auto& tag : classify_srg(params)) {
        if (tag.type == a.type) {
            return {params, tag};
        }
    }
    throw Error(ErrorKind::InternalMismatch, "closure lost its type");
}

TypeTag from_single_eigenvalue(SrKind kind, std::int64_t v, std::int64_t size, const Rational& a)
{
    auto root = exact_sqrt(v);
    if (!root || !a.is_integer()) {
        throw Error(ErrorKind::HypothesisFails, "v must be a perfect square and a an integer");
    }
    const std::int64_t ai = a.to_int64();
    for (std::int64_t n : {*root, -*root}) {
        if (size != -ai * (n - 1)) {
            continue;
        }
        const std::int64_t t = -ai;
        const Rational b = R(n + ai);
        auto tags = classify_srg(v, size, a, b, kind);
        const SrgType want = n > 0 ? SrgType::LatinSquare : SrgType::NegativeLatinSquare;
        for (const auto& tag : tags) {
            if (tag.type == want && tag.t == t) {
                return tag;
            }
        }
        throw Error(ErrorKind::InternalMismatch, "derived parameters do not classify");
    }
    throw Error(ErrorKind::HypothesisFails, "size " + std::to_string(size) + " != -a(n - 1) for n = +-sqrt(v)");
}

std::optional<std::string> smith_check(const SrIdempotent& e, const Rational& q111, const Rational& q211)
{
    const Rational m = R(e.m);
    if (!(m >= e.a && e.a >= Rational(0) && Rational(-1) >= e.b && e.b >= -m)) {
        return "inequality chain m >= a >= 0 > -1 >= b >= -m fails for m=" + m.str() + " a=" + e.a.str() +
               " b=" + e.b.str();
    }
    if (e.a * e.b != q211 - m) {
        return "ab = " + (e.a * e.b).str() + " but q^2_11 - m = " + (q211 - m).str();
    }
    if (e.a + e.b != q111 - q211) {
        return "a + b = " + (e.a + e.b).str() + " but q^1_11 - q^2_11 = " + (q111 - q211).str();
    }
    return std::nullopt;
}

std::array<Rational, 4> dual_railway(const Rational& v, const Rational& m1, const Rational& a1, const Rational& b1,
                                     const Rational& m2, const Rational& a2, const Rational& b2)
{
    const Rational den = (a1 - b1) * (a2 - b2);
    if (den.is_zero()) {
        throw Error(ErrorKind::DegenerateDenominator, "(a1 - b1)(a2 - b2) = 0");
    }
    std::array<Rational, 4> ell{
        (v * b1 * b2 - (m1 - b1) * (m2 - b2)) / den,
        -(v * b1 * a2 - (m1 - b1) * (m2 - a2)) / den,
        -(v * a1 * b2 - (m1 - a1) * (m2 - b2)) / den,
        (v * a1 * a2 - (m1 - a1) * (m2 - a2)) / den,
    };
    const Rational sum = ell[0] + ell[1] + ell[2] + ell[3];
    if (sum != v - 1) {
        throw Error(ErrorKind::PropertyViolation, "dual railway values sum to " + sum.str());
    }
    if (a1 > b1 && a2 > b2 && (ell[1].sign() <= 0 || ell[2].sign() <= 0)) {
        throw Error(ErrorKind::PropertyViolation, "dual railway l2 or l3 is not positive");
    }
    return ell;
}

std::pair<Rational, Rational> two_values(const RatMatrix& M, std::size_t c)
{
    std::set<Rational> values;
    for (std::size_t r = 1; r < M.rows(); ++r) {
        values.insert(M(r, c));
    }
    if (values.size() != 2) {
        throw Error(ErrorKind::InvalidSrgParams, "column " + std::to_string(c) + " is not two-valued");
    }
    return {*values.rbegin(), *values.begin()};
}

DualRailwaySets dual_railway_sets(const RatMatrix& P, const RatMatrix& Q, std::size_t j1, std::size_t j2)
{
    const Rational a1 = two_values(Q, j1).first;
    const Rational a2 = two_values(Q, j2).first;
    DualRailwaySets out;
    for (std::size_t i = 1; i < Q.rows(); ++i) {
        const std::size_t slot = (Q(i, j1) == a1 ? 0 : 2) + (Q(i, j2) == a2 ? 0 : 1);
        out.sets[slot].push_back(i);
        out.valency_sums[slot] += P(0, i);
    }
    return out;
}

std::vector<std::size_t> sr_detect(const RatMatrix& M)
{
    std::vector<std::size_t> out;
    const std::size_t d = M.rows() - 1;
    if (d < 2) {
        return out;
    }
    for (std::size_t c = 1; c <= d; ++c) {
        std::set<Rational> values;
        for (std::size_t r = 1; r <= d; ++r) {
            values.insert(M(r, c));
        }
        if (values.size() == 2) {
            out.push_back(c);
        }
    }
    return out;
}

} // namespace amorph
