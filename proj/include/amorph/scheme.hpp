#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amorph/exact.hpp"

namespace amorph {

/// A symmetric d-class association scheme encoded as one labeled v x v table:
/// cell(x, y) is the index of the relation containing (x, y).
class RelationTable {
public:
    /// `cells` is row-major v*v; entries must lie in 0..d. The scheme axioms
    /// themselves are checked by validate_table, not here.
    RelationTable(std::size_t v, std::size_t d, std::vector<std::uint16_t> cells);

    std::size_t v() const { return v_; }
    std::size_t d() const { return d_; }
    std::uint16_t operator()(std::size_t x, std::size_t y) const { return cells_[x * v_ + y]; }
    const std::vector<std::uint16_t>& cells() const { return cells_; }

    friend bool operator==(const RelationTable&, const RelationTable&) = default;

private:
    std::size_t v_;
    std::size_t d_;
    std::vector<std::uint16_t> cells_;
};

/// Validated combinatorial data: valencies and intersection numbers.
class SchemeCore {
public:
    SchemeCore(std::size_t v, std::size_t d, std::vector<std::int64_t> p);

    std::size_t v() const { return v_; }
    std::size_t d() const { return d_; }
    /// k_i = p^0_{ii}; k_0 = 1.
    std::int64_t valency(std::size_t i) const { return p(0, i, i); }
    /// p^h_{ij}
    std::int64_t p(std::size_t h, std::size_t i, std::size_t j) const
    {
        return p_[(h * (d_ + 1) + i) * (d_ + 1) + j];
    }

    /// Intersection matrix L_i with (L_i)_{jh} = p^h_{ij}; row l of P is a
    /// right eigenvector of every L_i with eigenvalue P_{li}.
    RatMatrix intersection_matrix(std::size_t i) const;

private:
    std::size_t v_;
    std::size_t d_;
    std::vector<std::int64_t> p_;
};

/// Exact eigenmatrices and derived parameters.
struct SpectralData {
    RatMatrix P;
    RatMatrix Q;
    std::vector<BigInt> multiplicities;
    std::vector<Rational> krein; // q^h_{ij} at (h*(d+1)+i)*(d+1)+j
    bool integral = true;

    std::size_t d() const { return P.rows() - 1; }
    BigInt v() const;
    const Rational& q(std::size_t h, std::size_t i, std::size_t j) const
    {
        const std::size_t n = d() + 1;
        return krein[(h * n + i) * n + j];
    }
};

/// Counts every triple over every pair and stores the common value; throws
/// NotSymmetric, BadDiagonal, MissingClass or InconsistentTriple.
SchemeCore validate_table(const RelationTable& table);

/// Exact P, Q, multiplicities and Krein parameters. Rows of P after row 0 are
/// sorted lexicographically ascending. Throws NonIntegralSpectrum.
SpectralData spectrum(const SchemeCore& core);

/// Builds and checks spectral data from a user-supplied first eigenmatrix,
/// keeping its row order. Throws InvalidEigenmatrix.
SpectralData spectral_from_eigenmatrix(const RatMatrix& P);

/// Krein parameters from Q: solves sum_h Q[l][h] q^h_{ij} = Q[l][i] Q[l][j].
std::vector<Rational> krein_parameters(const RatMatrix& P, const RatMatrix& Q);

/// For every t in 2..d and every t-subset of principal rows, at least t
/// principal columns must be non-constant on those rows. Returns the first
/// violating subset (row indices), or nullopt. Throws TooLarge for d > 10.
std::optional<std::vector<std::size_t>> rowcol_check(const RatMatrix& M);

/// A scheme as seen by the analysis layers: always has spectral data; the
/// relation table and intersection numbers are present only when the input
/// was a table.
struct Scheme {
    std::optional<RelationTable> table;
    std::optional<SchemeCore> core;
    SpectralData spectral;

    static Scheme from_table(RelationTable table);
    static Scheme from_eigenmatrix(const RatMatrix& P);

    std::size_t d() const { return spectral.d(); }
    const RatMatrix& P() const { return spectral.P; }
    const RatMatrix& Q() const { return spectral.Q; }
};

// Text formats.
//   scheme: `v d`, then v rows of v integers in 0..d; lines starting with '#'
//           are comments.
//   eigen:  `d`, then d+1 rows of d+1 entries `a` or `a/b`.
RelationTable parse_scheme_text(std::string_view text);
std::string write_scheme_text(const RelationTable& table);
RatMatrix parse_eigen_text(std::string_view text);
std::string write_eigen_text(const RatMatrix& P);

} // namespace amorph
