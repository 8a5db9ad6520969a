#include "amorph/scheme.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "amorph/error.hpp"

namespace amorph {

RelationTable::RelationTable(std::size_t v, std::size_t d, std::vector<std::uint16_t> cells)
    : v_(v), d_(d), cells_(std::move(cells))
{
    if (v == 0 || d == 0) {
        throw Error(ErrorKind::BadSize, "a scheme needs v >= 1 and d >= 1");
    }
    if (cells_.size() != v * v) {
        throw Error(ErrorKind::DimensionMismatch,
                    "expected " + std::to_string(v * v) + " cells, got " + std::to_string(cells_.size()));
    }
    for (auto c : cells_) {
        if (c > d) {
            throw Error(ErrorKind::ParseError, "relation index " + std::to_string(c) + " exceeds d = " +
                                                   std::to_string(d));
        }
    }
}

SchemeCore::SchemeCore(std::size_t v, std::size_t d, std::vector<std::int64_t> p)
    : v_(v), d_(d), p_(std::move(p))
{
    if (p_.size() != (d + 1) * (d + 1) * (d + 1)) {
        throw Error(ErrorKind::DimensionMismatch, "intersection tensor has wrong size");
    }
}

RatMatrix SchemeCore::intersection_matrix(std::size_t i) const
{
    RatMatrix L(d_ + 1, d_ + 1);
    for (std::size_t j = 0; j <= d_; ++j) {
        for (std::size_t h = 0; h <= d_; ++h) {
            L(j, h) = Rational(static_cast<long>(p(h, i, j)));
        }
    }
    return L;
}

BigInt SpectralData::v() const
{
    BigInt total = 0;
    for (std::size_t i = 0; i < P.cols(); ++i) {
        total += P(0, i).num();
    }
    return total;
}

SchemeCore validate_table(const RelationTable& t)
{
    const std::size_t v = t.v();
    const std::size_t d = t.d();
    const std::size_t n = d + 1;

    std::vector<bool> seen(n, false);
    for (std::size_t x = 0; x < v; ++x) {
        if (t(x, x) != 0) {
            throw Error(ErrorKind::BadDiagonal, "cell(" + std::to_string(x) + "," + std::to_string(x) + ") != 0");
        }
        for (std::size_t y = 0; y < v; ++y) {
            if (t(x, y) != t(y, x)) {
                throw Error(ErrorKind::NotSymmetric,
                            "cell(" + std::to_string(x) + "," + std::to_string(y) + ") != cell(" +
                                std::to_string(y) + "," + std::to_string(x) + ")");
            }
            if (x != y && t(x, y) == 0) {
                throw Error(ErrorKind::BadDiagonal,
                            "off-diagonal cell(" + std::to_string(x) + "," + std::to_string(y) + ") is 0");
            }
            seen[t(x, y)] = true;
        }
    }
    for (std::size_t i = 1; i <= d; ++i) {
        if (!seen[i]) {
            throw Error(ErrorKind::MissingClass, "relation " + std::to_string(i) + " never occurs");
        }
    }

    // One O(v) sweep per unordered pair fills the full (i, j) count table for
    // that pair; the first pair seen in class h is the representative.
    std::vector<std::int64_t> p(n * n * n, 0);
    std::vector<bool> have(n, false);
    std::vector<std::pair<std::size_t, std::size_t>> rep(n);
    std::vector<std::int64_t> counts(n * n);
    for (std::size_t x = 0; x < v; ++x) {
        for (std::size_t y = x; y < v; ++y) {
            std::fill(counts.begin(), counts.end(), 0);
            const std::uint16_t* rx = &t.cells()[x * v];
            const std::uint16_t* ry = &t.cells()[y * v];
            for (std::size_t z = 0; z < v; ++z) {
                ++counts[rx[z] * n + ry[z]];
            }
            const std::size_t h = t(x, y);
            std::int64_t* slot = &p[h * n * n];
            if (!have[h]) {
                std::copy(counts.begin(), counts.end(), slot);
                have[h] = true;
                rep[h] = {x, y};
                continue;
            }
            if (!std::equal(counts.begin(), counts.end(), slot)) {
                std::size_t k = 0;
                while (counts[k] == slot[k]) {
                    ++k;
                }
                std::ostringstream os;
                os << "h=" << h << " i=" << k / n << " j=" << k % n << ": pair (" << rep[h].first << ","
                   << rep[h].second << ") counts " << slot[k] << " but (" << x << "," << y << ") counts "
                   << counts[k] << "; not an association scheme";
                throw Error(ErrorKind::InconsistentTriple, os.str());
            }
        }
    }

    SchemeCore core(v, d, std::move(p));
    std::int64_t total = 0;
    for (std::size_t i = 1; i <= d; ++i) {
        total += core.valency(i);
    }
    if (total != static_cast<std::int64_t>(v) - 1) {
        throw Error(ErrorKind::InternalMismatch, "valencies do not sum to v - 1");
    }
    for (std::size_t h = 0; h <= d; ++h) {
        for (std::size_t i = 0; i <= d; ++i) {
            for (std::size_t j = 0; j <= d; ++j) {
                if (core.p(h, i, j) != core.p(h, j, i) ||
                    core.valency(h) * core.p(h, i, j) != core.valency(i) * core.p(i, h, j)) {
                    throw Error(ErrorKind::InternalMismatch, "intersection number symmetry fails");
                }
            }
        }
    }
    return core;
}

std::vector<Rational> krein_parameters(const RatMatrix& P, const RatMatrix& Q)
{
    // Q^{-1} = P / v, so q^h_{ij} = (1/v) sum_l P[h][l] Q[l][i] Q[l][j].
    const std::size_t n = P.rows();
    Rational v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        v += P(0, i);
    }
    std::vector<Rational> q(n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            RatVector prod(n);
            for (std::size_t l = 0; l < n; ++l) {
                prod[l] = Q(l, i) * Q(l, j);
            }
            RatVector col = P.apply(prod);
            for (std::size_t h = 0; h < n; ++h) {
                q[(h * n + i) * n + j] = col[h] / v;
                q[(h * n + j) * n + i] = col[h] / v;
            }
        }
    }
    return q;
}

namespace {

void check_spectral(const SpectralData& s, ErrorKind kind)
{
    const std::size_t n = s.P.rows();
    const Rational v(s.v());
    if (s.P * s.Q != RatMatrix::identity(n).scaled(v)) {
        throw Error(kind, "PQ != vI");
    }
    for (std::size_t l = 0; l < n; ++l) {
        if (s.P(l, 0) != Rational(1) || s.Q(l, 0) != Rational(1)) {
            throw Error(kind, "column 0 of P or Q is not all ones");
        }
    }
    BigInt total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const Rational& m = s.Q(0, j);
        if (!m.is_integer() || m.sign() <= 0) {
            throw Error(kind, "multiplicity " + m.str() + " is not a positive integer");
        }
        total += m.num();
    }
    if (total != s.v()) {
        throw Error(kind, "multiplicities do not sum to v");
    }
    for (std::size_t h = 0; h < n; ++h) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (s.q(h, i, j).sign() < 0) {
                    throw Error(kind, "Krein condition fails at q^" + std::to_string(h) + "_" +
                                          std::to_string(i) + std::to_string(j));
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Rational expect = i == j ? s.Q(0, i) : Rational(0);
            if (s.q(0, i, j) != expect) {
                throw Error(kind, "q^0_{ij} != m_i delta_ij");
            }
        }
    }
}

SpectralData finish_spectral(RatMatrix P, ErrorKind kind)
{
    const std::size_t n = P.rows();
    Rational v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        v += P(0, i);
    }
    RatMatrix Q = inverse(P).scaled(v);
    std::vector<BigInt> mult;
    for (std::size_t j = 0; j < n; ++j) {
        mult.push_back(Q(0, j).num());
    }
    auto krein = krein_parameters(P, Q);
    SpectralData s{std::move(P), std::move(Q), std::move(mult), std::move(krein), true};
    check_spectral(s, kind);
    return s;
}

// One attempt at extracting P from a generic combination of the L_i.
std::optional<std::vector<RatVector>> eigen_rows(const SchemeCore& core,
                                                 const std::vector<RatMatrix>& L,
                                                 const BigInt& base)
{
    const std::size_t d = core.d();
    const std::size_t n = d + 1;
    RatMatrix B(n, n);
    BigInt c = 1;
    for (std::size_t i = 1; i <= d; ++i) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t col = 0; col < n; ++col) {
                B(r, col) += L[i](r, col) * Rational(c);
            }
        }
        c *= base;
    }
    Polynomial cp = char_poly(B);
    IntegerRoots roots = integer_roots(cp);
    if (!roots.splits()) {
        throw Error(ErrorKind::NonIntegralSpectrum, "residual factor " + roots.residual.str());
    }
    if (std::adjacent_find(roots.roots.begin(), roots.roots.end()) != roots.roots.end()) {
        return std::nullopt;
    }
    std::vector<RatVector> rows;
    for (const auto& theta : roots.roots) {
        RatMatrix shifted = B;
        for (std::size_t r = 0; r < n; ++r) {
            shifted(r, r) -= Rational(theta);
        }
        auto basis = nullspace(shifted);
        if (basis.size() != 1 || basis[0][0].is_zero()) {
            return std::nullopt;
        }
        RatVector u = basis[0];
        const Rational lead = u[0];
        for (auto& x : u) {
            x /= lead;
        }
        // u must be a common eigenvector: L_i u = u_i u.
        for (std::size_t i = 0; i <= d; ++i) {
            RatVector Lu = L[i].apply(u);
            for (std::size_t r = 0; r < n; ++r) {
                if (Lu[r] != u[i] * u[r]) {
                    return std::nullopt;
                }
            }
        }
        rows.push_back(std::move(u));
    }
    return rows;
}

} // namespace

SpectralData spectrum(const SchemeCore& core)
{
    const std::size_t d = core.d();
    std::vector<RatMatrix> L;
    for (std::size_t i = 0; i <= d; ++i) {
        L.push_back(core.intersection_matrix(i));
    }
    const BigInt v(static_cast<unsigned long>(core.v()));
    std::optional<std::vector<RatVector>> rows;
    for (const BigInt& base : {BigInt(v + 1), BigInt(2 * v + 1)}) {
        rows = eigen_rows(core, L, base);
        if (rows) {
            break;
        }
    }
    if (!rows) {
        throw Error(ErrorKind::NonIntegralSpectrum, "could not separate common eigenspaces");
    }

    RatVector valencies;
    for (std::size_t i = 0; i <= d; ++i) {
        valencies.push_back(Rational(static_cast<long>(core.valency(i))));
    }
    auto first = std::find(rows->begin(), rows->end(), valencies);
    if (first == rows->end()) {
        throw Error(ErrorKind::InternalMismatch, "valency row missing from the spectrum");
    }
    std::iter_swap(rows->begin(), first);
    std::sort(rows->begin() + 1, rows->end());
    return finish_spectral(RatMatrix::from_rows(*rows), ErrorKind::InternalMismatch);
}

SpectralData spectral_from_eigenmatrix(const RatMatrix& P)
{
    if (!P.square() || P.rows() < 2) {
        throw Error(ErrorKind::InvalidEigenmatrix, "eigenmatrix must be square with d >= 1");
    }
    for (std::size_t i = 0; i < P.cols(); ++i) {
        if (!P(0, i).is_integer() || P(0, i).sign() <= 0) {
            throw Error(ErrorKind::InvalidEigenmatrix, "row 0 must hold positive integer valencies");
        }
    }
    if (P(0, 0) != Rational(1)) {
        throw Error(ErrorKind::InvalidEigenmatrix, "P[0][0] must be 1");
    }
    try {
        return finish_spectral(P, ErrorKind::InvalidEigenmatrix);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularMatrix) {
            throw Error(ErrorKind::InvalidEigenmatrix, "eigenmatrix is singular");
        }
        throw;
    }
}

std::optional<std::vector<std::size_t>> rowcol_check(const RatMatrix& M)
{
    const std::size_t d = M.rows() - 1;
    if (d > 10) {
        throw Error(ErrorKind::TooLarge, "row/column check enumerates subsets only up to d = 10");
    }
    for (std::size_t t = 2; t <= d; ++t) {
        std::vector<bool> mask(d, false);
        std::fill(mask.begin(), mask.begin() + static_cast<long>(t), true);
        do {
            std::vector<std::size_t> rows;
            for (std::size_t r = 0; r < d; ++r) {
                if (mask[r]) {
                    rows.push_back(r + 1);
                }
            }
            std::size_t nonconstant = 0;
            for (std::size_t c = 1; c <= d; ++c) {
                for (std::size_t k = 1; k < rows.size(); ++k) {
                    if (M(rows[k], c) != M(rows[0], c)) {
                        ++nonconstant;
                        break;
                    }
                }
            }
            if (nonconstant < t) {
                return rows;
            }
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    return std::nullopt;
}

Scheme Scheme::from_table(RelationTable table)
{
    SchemeCore core = validate_table(table);
    SpectralData s = spectrum(core);
    return Scheme{std::move(table), std::move(core), std::move(s)};
}

Scheme Scheme::from_eigenmatrix(const RatMatrix& P)
{
    return Scheme{std::nullopt, std::nullopt, spectral_from_eigenmatrix(P)};
}

// ---------------------------------------------------------------- text formats

namespace {

std::vector<std::string> content_lines(std::string_view text)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> tokens(const std::string& line)
{
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

std::size_t parse_count(const std::string& tok, const char* what)
{
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }) ||
        tok.size() > 6) {
        throw Error(ErrorKind::ParseError, std::string("bad ") + what + ": '" + tok + "'");
    }
    return std::stoul(tok);
}

} // namespace

RelationTable parse_scheme_text(std::string_view text)
{
    auto lines = content_lines(text);
    if (lines.empty()) {
        throw Error(ErrorKind::ParseError, "empty scheme file");
    }
    auto head = tokens(lines[0]);
    if (head.size() != 2) {
        throw Error(ErrorKind::ParseError, "header must be `v d`");
    }
    const std::size_t v = parse_count(head[0], "v");
    const std::size_t d = parse_count(head[1], "d");
    if (v == 0 || d == 0 || d > 65535) {
        throw Error(ErrorKind::ParseError, "header values out of range");
    }
    if (lines.size() != v + 1) {
        throw Error(ErrorKind::ParseError,
                    "expected " + std::to_string(v) + " rows, got " + std::to_string(lines.size() - 1));
    }
    std::vector<std::uint16_t> cells;
    cells.reserve(v * v);
    for (std::size_t r = 0; r < v; ++r) {
        auto row = tokens(lines[r + 1]);
        if (row.size() != v) {
            throw Error(ErrorKind::ParseError, "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                                   " entries, expected " + std::to_string(v));
        }
        for (const auto& tok : row) {
            auto c = parse_count(tok, "relation index");
            if (c > d) {
                throw Error(ErrorKind::ParseError, "relation index " + tok + " exceeds d");
            }
            cells.push_back(static_cast<std::uint16_t>(c));
        }
    }
    return RelationTable(v, d, std::move(cells));
}

std::string write_scheme_text(const RelationTable& table)
{
    std::string out = std::to_string(table.v()) + " " + std::to_string(table.d()) + "\n";
    for (std::size_t x = 0; x < table.v(); ++x) {
        for (std::size_t y = 0; y < table.v(); ++y) {
            if (y) {
                out += ' ';
            }
            out += std::to_string(table(x, y));
        }
        out += '\n';
    }
    return out;
}

RatMatrix parse_eigen_text(std::string_view text)
{
    auto lines = content_lines(text);
    if (lines.empty()) {
        throw Error(ErrorKind::ParseError, "empty eigenmatrix file");
    }
    auto head = tokens(lines[0]);
    if (head.size() != 1) {
        throw Error(ErrorKind::ParseError, "header must be `d`");
    }
    const std::size_t d = parse_count(head[0], "d");
    if (d == 0) {
        throw Error(ErrorKind::ParseError, "d must be positive");
    }
    if (lines.size() != d + 2) {
        throw Error(ErrorKind::ParseError, "expected " + std::to_string(d + 1) + " rows");
    }
    RatMatrix P(d + 1, d + 1);
    for (std::size_t r = 0; r <= d; ++r) {
        auto row = tokens(lines[r + 1]);
        if (row.size() != d + 1) {
            throw Error(ErrorKind::ParseError, "row " + std::to_string(r) + " must have d+1 entries");
        }
        for (std::size_t c = 0; c <= d; ++c) {
            P(r, c) = Rational::parse(row[c]);
        }
    }
    return P;
}

std::string write_eigen_text(const RatMatrix& P)
{
    std::string out = std::to_string(P.rows() - 1) + "\n";
    for (std::size_t r = 0; r < P.rows(); ++r) {
        for (std::size_t c = 0; c < P.cols(); ++c) {
            if (c) {
                out += ' ';
            }
            out += P(r, c).str();
        }
        out += '\n';
    }
    return out;
}

} // namespace amorph
