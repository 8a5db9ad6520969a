#include "amorph/exact.hpp"

#include <algorithm>
#include <sstream>

#include "amorph/error.hpp"

namespace amorph {

// ---------------------------------------------------------------- Rational

Rational::Rational(long long value)
{
    // mpq_class has no long long constructor on every platform.
    q_ = mpq_class(mpz_class(std::to_string(value)));
}

Rational::Rational(const BigInt& num, const BigInt& den)
{
    if (den == 0) {
        throw Error(ErrorKind::ParseError, "zero denominator");
    }
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational Rational::parse(std::string_view text)
{
    auto parse_int = [&](std::string_view s) {
        std::string str(s);
        std::size_t start = (!str.empty() && (str[0] == '-' || str[0] == '+')) ? 1 : 0;
        if (start == str.size() ||
            !std::all_of(str.begin() + static_cast<long>(start), str.end(),
                         [](unsigned char ch) { return std::isdigit(ch); })) {
            throw Error(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'");
        }
        if (str[0] == '+') {
            str.erase(0, 1);
        }
        return BigInt(str);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text));
    }
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) {
        throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    }
    return Rational(parse_int(text.substr(0, slash)), den);
}

long long Rational::to_int64() const
{
    if (!is_integer() || !q_.get_num().fits_slong_p()) {
        throw Error(ErrorKind::DimensionMismatch, "rational " + str() + " is not a machine integer");
    }
    return q_.get_num().get_si();
}

std::string Rational::str() const
{
    if (is_integer()) {
        return q_.get_num().get_str();
    }
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero()) {
        throw Error(ErrorKind::SingularMatrix, "division by zero");
    }
    q_ /= o.q_;
    return *this;
}

std::size_t hash_value(std::span<const Rational> v)
{
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& x : v) {
        h ^= std::hash<Rational>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

// ---------------------------------------------------------------- RatMatrix

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols)
{
    if (rows == 0 || cols == 0) {
        throw Error(ErrorKind::DimensionMismatch, "matrix dimensions must be positive");
    }
}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : RatMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0)
{
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
        }
        std::copy(row.begin(), row.end(), data_.begin() + static_cast<long>(r * cols_));
        ++r;
    }
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows)
{
    RatMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) {
            throw Error(ErrorKind::DimensionMismatch, "ragged rows");
        }
        for (std::size_t c = 0; c < m.cols(); ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

RatMatrix RatMatrix::identity(std::size_t n)
{
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

RatVector RatMatrix::column(std::size_t c) const
{
    RatVector out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out.push_back((*this)(r, c));
    }
    return out;
}

RatMatrix RatMatrix::transpose() const
{
    RatMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const
{
    if (cols_ != o.rows_) {
        throw Error(ErrorKind::DimensionMismatch, "product of incompatible matrices");
    }
    RatMatrix out(rows_, o.cols_);
    mpq_class acc;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < o.cols_; ++c) {
            acc = 0;
            for (std::size_t k = 0; k < cols_; ++k) {
                acc += (*this)(r, k).raw() * o(k, c).raw();
            }
            out(r, c) = Rational(acc);
        }
    }
    return out;
}

RatMatrix RatMatrix::scaled(const Rational& s) const
{
    RatMatrix out = *this;
    for (auto& x : out.data_) {
        x *= s;
    }
    return out;
}

RatVector RatMatrix::apply(std::span<const Rational> x) const
{
    if (x.size() != cols_) {
        throw Error(ErrorKind::DimensionMismatch, "vector length does not match columns");
    }
    RatVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        mpq_class acc = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            acc += (*this)(r, c).raw() * x[c].raw();
        }
        out[r] = Rational(acc);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const RatMatrix& m)
{
    os << '[';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << (r ? ", [" : "[");
        for (std::size_t c = 0; c < m.cols(); ++c) {
            os << (c ? ", " : "") << m(r, c);
        }
        os << ']';
    }
    return os << ']';
}

// ---------------------------------------------------------------- elimination

namespace {

using IntGrid = std::vector<std::vector<BigInt>>;

// Scales each row by the lcm of its denominators.
IntGrid clear_denominators(const RatMatrix& m)
{
    IntGrid out(m.rows(), std::vector<BigInt>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        BigInt l = 1;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).raw().get_den_mpz_t());
        }
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out[r][c] = m(r, c).raw().get_num() * (l / m(r, c).raw().get_den());
        }
    }
    return out;
}

struct Echelon {
    IntGrid a;
    std::vector<std::size_t> pivot_cols; // pivot_cols[r] is the pivot column of row r
    BigInt pivot;                        // common value of every pivot entry
};

// Fraction-free Gauss-Jordan (Bareiss one-step rule applied to every other
// row). Only columns < elim_cols are eligible as pivots. On exit each pivot
// row carries the same pivot value and all other entries of pivot columns are
// zero. Every division is exact.
Echelon fraction_free_reduce(IntGrid a, std::size_t elim_cols)
{
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    BigInt prev = 1;
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    BigInt t;
    for (std::size_t c = 0; c < elim_cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) {
            ++p;
        }
        if (p == rows) {
            continue;
        }
        std::swap(a[p], a[r]);
        const BigInt piv = a[r][c];
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) {
                continue;
            }
            const BigInt factor = a[i][c];
            for (std::size_t j = 0; j < cols; ++j) {
                t = piv * a[i][j] - factor * a[r][j];
                if (!mpz_divisible_p(t.get_mpz_t(), prev.get_mpz_t())) {
                    throw Error(ErrorKind::InternalMismatch, "inexact fraction-free division");
                }
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = piv;
        pivots.push_back(c);
        ++r;
    }
    return {std::move(a), std::move(pivots), prev};
}

} // namespace

RatMatrix inverse(const RatMatrix& m)
{
    if (!m.square()) {
        throw Error(ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
    }
    const std::size_t n = m.rows();
    // D*M = N with D diagonal, so M^-1 = N^-1 * D.
    IntGrid left = clear_denominators(m);
    std::vector<Rational> row_scale(n);
    for (std::size_t r = 0; r < n; ++r) {
        BigInt l = 1;
        for (std::size_t c = 0; c < n; ++c) {
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).raw().get_den_mpz_t());
        }
        row_scale[r] = Rational(l);
    }
    IntGrid aug(n, std::vector<BigInt>(2 * n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            aug[r][c] = left[r][c];
        }
        aug[r][n + r] = 1;
    }
    Echelon e = fraction_free_reduce(std::move(aug), n);
    if (e.pivot_cols.size() < n) {
        throw Error(ErrorKind::SingularMatrix,
                    "rank " + std::to_string(e.pivot_cols.size()) + " < " + std::to_string(n));
    }
    RatMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            out(r, c) = Rational(e.a[r][n + c], e.pivot) * row_scale[c];
        }
    }
    if (m * out != RatMatrix::identity(n)) {
        throw Error(ErrorKind::InternalMismatch, "inverse check failed");
    }
    return out;
}

std::vector<RatVector> nullspace(const RatMatrix& m)
{
    Echelon e = fraction_free_reduce(clear_denominators(m), m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivot_cols) {
        is_pivot[c] = true;
    }
    std::vector<RatVector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) {
            continue;
        }
        RatVector x(m.cols());
        x[f] = 1;
        for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) {
            x[e.pivot_cols[r]] = -Rational(e.a[r][f], e.pivot);
        }
        for (const auto& y : m.apply(x)) {
            if (!y.is_zero()) {
                throw Error(ErrorKind::InternalMismatch, "nullspace vector check failed");
            }
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

std::size_t rank(const RatMatrix& m)
{
    return fraction_free_reduce(clear_denominators(m), m.cols()).pivot_cols.size();
}

// ---------------------------------------------------------------- polynomials

Rational Polynomial::operator()(const Rational& x) const
{
    mpq_class acc = 0;
    for (const auto& c : coeffs) {
        acc = acc * x.raw() + c.raw();
    }
    return Rational(acc);
}

std::string Polynomial::str() const
{
    std::ostringstream os;
    const std::size_t deg = degree();
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const Rational& c = coeffs[i];
        const std::size_t power = deg - i;
        if (c.is_zero() && !(coeffs.size() == 1)) {
            continue;
        }
        Rational mag = c.sign() < 0 ? -c : c;
        if (first) {
            if (c.sign() < 0) {
                os << "-";
            }
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        first = false;
        if (power == 0 || mag != Rational(1)) {
            os << mag;
        }
        if (power >= 1) {
            os << "x";
        }
        if (power >= 2) {
            os << "^" << power;
        }
    }
    return first ? "0" : os.str();
}

Polynomial char_poly(const RatMatrix& m)
{
    if (!m.square()) {
        throw Error(ErrorKind::DimensionMismatch, "characteristic polynomial of a non-square matrix");
    }
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
    const std::size_t n = m.rows();
    std::vector<Rational> c(n + 1);
    c[n] = 1;
    RatMatrix mk(n, n); // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        RatMatrix next = m * mk;
        for (std::size_t i = 0; i < n; ++i) {
            next(i, i) += c[n - k + 1];
        }
        mk = std::move(next);
        RatMatrix amk = m * mk;
        Rational trace = 0;
        for (std::size_t i = 0; i < n; ++i) {
            trace += amk(i, i);
        }
        c[n - k] = -trace / Rational(static_cast<long>(k));
    }
    Polynomial p;
    for (std::size_t i = n + 1; i-- > 0;) {
        p.coeffs.push_back(c[i]);
    }
    return p;
}

namespace {

// Ascending-order helpers; index = power.
using Asc = std::vector<Rational>;

void trim(Asc& p)
{
    while (p.size() > 1 && p.back().is_zero()) {
        p.pop_back();
    }
}

Asc to_asc(const Polynomial& p)
{
    Asc a(p.coeffs.rbegin(), p.coeffs.rend());
    if (a.empty()) {
        a.push_back(0);
    }
    trim(a);
    return a;
}

Polynomial from_asc(const Asc& a)
{
    return Polynomial{std::vector<Rational>(a.rbegin(), a.rend())};
}

bool is_zero_poly(const Asc& p) { return p.size() == 1 && p[0].is_zero(); }

// Returns remainder; quotient into q.
Asc poly_divmod(Asc num, const Asc& den, Asc* q)
{
    Asc quot(num.size() >= den.size() ? num.size() - den.size() + 1 : 1);
    while (!is_zero_poly(num) && num.size() >= den.size()) {
        const std::size_t shift = num.size() - den.size();
        Rational f = num.back() / den.back();
        quot[shift] = f;
        for (std::size_t i = 0; i < den.size(); ++i) {
            num[i + shift] -= f * den[i];
        }
        num.pop_back();
        if (num.empty()) {
            num.push_back(0);
        }
        trim(num);
    }
    if (q) {
        trim(quot);
        *q = std::move(quot);
    }
    return num;
}

Asc derivative(const Asc& p)
{
    if (p.size() == 1) {
        return {Rational(0)};
    }
    Asc d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) {
        d[i - 1] = p[i] * Rational(static_cast<long>(i));
    }
    return d;
}

Asc poly_gcd(Asc a, Asc b)
{
    while (!is_zero_poly(b)) {
        Asc r = poly_divmod(a, b, nullptr);
        a = std::move(b);
        b = std::move(r);
    }
    Rational lead = a.back();
    for (auto& x : a) {
        x /= lead;
    }
    return a;
}

Rational eval_asc(const Asc& p, const Rational& x)
{
    mpq_class acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = acc * x.raw() + p[i].raw();
    }
    return Rational(acc);
}

// Sturm polynomial scaled to integer coefficients by a positive factor, so
// its sign at any point is unchanged.
std::vector<BigInt> integer_scaled(const Asc& p)
{
    BigInt l = 1;
    for (const auto& c : p) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    }
    std::vector<BigInt> out;
    out.reserve(p.size());
    for (const auto& c : p) {
        out.push_back(c.num() * (l / c.den()));
    }
    return out;
}

// Sign of p((2a + 1) / 2): Horner on the homogenised form with denominator 2.
int sign_at_half(const std::vector<BigInt>& p, const BigInt& two_a_plus_one)
{
    BigInt acc = p.back();
    BigInt term;
    std::size_t power = 0;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        ++power;
        acc *= two_a_plus_one;
        mpz_mul_2exp(term.get_mpz_t(), p[i].get_mpz_t(), power);
        acc += term;
    }
    return sgn(acc);
}

int sign_changes(const std::vector<std::vector<BigInt>>& chain, const BigInt& two_a_plus_one)
{
    int changes = 0;
    int last = 0;
    for (const auto& p : chain) {
        int s = sign_at_half(p, two_a_plus_one);
        if (s == 0) {
            continue;
        }
        if (last != 0 && s != last) {
            ++changes;
        }
        last = s;
    }
    return changes;
}

} // namespace

IntegerRoots integer_roots(const Polynomial& poly)
{
    Asc p = to_asc(poly);
    if (p.back() != Rational(1)) {
        throw Error(ErrorKind::NonMonicOrNonIntegral, "polynomial is not monic: " + poly.str());
    }
    for (const auto& c : p) {
        if (!c.is_integer()) {
            throw Error(ErrorKind::NonMonicOrNonIntegral, "non-integer coefficient in " + poly.str());
        }
    }

    IntegerRoots out;
    while (p.size() > 1 && p[0].is_zero()) {
        out.roots.push_back(0);
        p.erase(p.begin());
    }

    if (p.size() > 1) {
        // Distinct roots of the square-free part are isolated with a Sturm
        // chain between half-integer endpoints, which are never roots.
        Asc sqfree;
        poly_divmod(p, poly_gcd(p, derivative(p)), &sqfree);
        std::vector<Asc> chain{sqfree, derivative(sqfree)};
        while (chain.back().size() > 1) {
            Asc r = poly_divmod(chain[chain.size() - 2], chain.back(), nullptr);
            if (is_zero_poly(r)) {
                break;
            }
            for (auto& x : r) {
                x = -x;
            }
            chain.push_back(std::move(r));
        }

        std::vector<std::vector<BigInt>> ichain;
        for (const auto& q : chain) {
            ichain.push_back(integer_scaled(q));
        }

        // Fujiwara: |z| <= 2 max_k |a_{n-k}|^{1/k} for monic p of degree n.
        const std::size_t n = p.size() - 1;
        BigInt bound = 1;
        for (std::size_t k = 1; k <= n; ++k) {
            BigInt a = abs(p[n - k].num());
            if (k == n) {
                a = a / 2 + 1;
            }
            BigInt r;
            mpz_root(r.get_mpz_t(), a.get_mpz_t(), k);
            r += 1;
            if (r > bound) {
                bound = r;
            }
        }
        bound *= 2;

        std::vector<BigInt> distinct;
        // Explicit stack of [lo, hi] integer ranges.
        std::vector<std::pair<BigInt, BigInt>> work{{-bound, bound}};
        while (!work.empty()) {
            auto [lo, hi] = work.back();
            work.pop_back();
            int count = sign_changes(ichain, 2 * lo - 1) - sign_changes(ichain, 2 * hi + 1);
            if (count == 0) {
                continue;
            }
            if (lo == hi) {
                if (eval_asc(sqfree, Rational(lo)).is_zero()) {
                    distinct.push_back(lo);
                }
                continue;
            }
            BigInt mid = lo + hi;
            mpz_fdiv_q_2exp(mid.get_mpz_t(), mid.get_mpz_t(), 1);
            work.emplace_back(lo, mid);
            work.emplace_back(mid + 1, hi);
        }

        for (const auto& r : distinct) {
            Asc linear{Rational(BigInt(-r)), Rational(1)};
            for (;;) {
                Asc q;
                Asc rem = poly_divmod(p, linear, &q);
                if (!is_zero_poly(rem)) {
                    break;
                }
                p = std::move(q);
                out.roots.push_back(r);
            }
        }
    }

    std::sort(out.roots.begin(), out.roots.end());
    out.residual = from_asc(p);
    return out;
}

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NonMonicOrNonIntegral: return "NonMonicOrNonIntegral";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::BadDiagonal: return "BadDiagonal";
    case ErrorKind::MissingClass: return "MissingClass";
    case ErrorKind::InconsistentTriple: return "InconsistentTriple";
    case ErrorKind::NonIntegralSpectrum: return "NonIntegralSpectrum";
    case ErrorKind::InvalidEigenmatrix: return "InvalidEigenmatrix";
    case ErrorKind::NoFusion: return "NoFusion";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::InternalMismatch: return "InternalMismatch";
    case ErrorKind::NotAnEdge: return "NotAnEdge";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InvalidSrgParams: return "InvalidSrgParams";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::HypothesisFails: return "HypothesisFails";
    case ErrorKind::TooManyClasses: return "TooManyClasses";
    case ErrorKind::BadSize: return "BadSize";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::BadT: return "BadT";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::PropertyViolation: return "PropertyViolation";
    }
    return "Unknown";
}

} // namespace amorph

std::size_t std::hash<amorph::Rational>::operator()(const amorph::Rational& r) const
{
    return std::hash<std::string>{}(r.str());
}
