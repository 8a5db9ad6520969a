#pragma once

#include <cstddef>
#include <vector>

#include "amorph/exact.hpp"
#include "amorph/scheme.hpp"

namespace amorph::gen {

/// 1-class scheme on n vertices. Throws BadSize for n < 2.
RelationTable complete(std::size_t n);

/// m copies of `inner` joined by one all-across relation labelled d_inner + 1.
RelationTable wreath(std::size_t m, const RelationTable& inner);

struct ChainScheme {
    RelationTable table;
    RatMatrix predicted_P;
};

/// Iterated wreath product K_{n1} wr K_{n2} wr ... wr K_{nr}. Vertices are
/// digit tuples with n1 most significant; relation i means the first
/// differing digit is digit i, so relation 1 is the coarsest. Also returns
/// the closed-form first eigenmatrix.
ChainScheme wreath_chain(const std::vector<std::size_t>& ns);

/// Affine-plane scheme on Z_n^2 (n prime): relations 1..t are "differ along
/// direction i" for the first t directions (same first coordinate, same
/// second coordinate, then slopes 1..n-1), relation t+1 is the rest.
/// Throws NotPrime or BadT (need 2 <= t <= n).
RelationTable latin_scheme(std::size_t n, std::size_t t);

/// Johnson scheme on 3-subsets of an n-set; cell = 3 - |intersection|.
/// Throws BadSize outside 7 <= n <= 32.
RelationTable johnson3(std::size_t n);

bool is_prime(std::size_t n);

} // namespace amorph::gen
