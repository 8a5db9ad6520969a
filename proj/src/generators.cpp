#include "amorph/generators.hpp"

#include <bit>
#include <string>

#include "amorph/error.hpp"

namespace amorph::gen {

RelationTable complete(std::size_t n)
{
    if (n < 2) {
        throw Error(ErrorKind::BadSize, "complete scheme needs n >= 2, got " + std::to_string(n));
    }
    std::vector<std::uint16_t> cells(n * n, 1);
    for (std::size_t x = 0; x < n; ++x) {
        cells[x * n + x] = 0;
    }
    return RelationTable(n, 1, std::move(cells));
}

RelationTable wreath(std::size_t m, const RelationTable& inner)
{
    if (m < 2) {
        throw Error(ErrorKind::BadSize, "wreath product needs m >= 2");
    }
    const std::size_t w = inner.v();
    const std::size_t v = m * w;
    const auto across = static_cast<std::uint16_t>(inner.d() + 1);
    std::vector<std::uint16_t> cells(v * v, across);
    for (std::size_t copy = 0; copy < m; ++copy) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t y = 0; y < w; ++y) {
                cells[(copy * w + x) * v + copy * w + y] = inner(x, y);
            }
        }
    }
    return RelationTable(v, inner.d() + 1, std::move(cells));
}

ChainScheme wreath_chain(const std::vector<std::size_t>& ns)
{
    if (ns.size() < 2) {
        throw Error(ErrorKind::BadSize, "a wreath chain needs at least two factors");
    }
    std::size_t v = 1;
    for (auto n : ns) {
        if (n < 2) {
            throw Error(ErrorKind::BadSize, "every chain factor must be >= 2");
        }
        v *= n;
    }
    const std::size_t r = ns.size();
    // below[i] = n_{i+1} * ... * n_r (0-based i)
    std::vector<std::size_t> below(r, 1);
    for (std::size_t i = r - 1; i-- > 0;) {
        below[i] = below[i + 1] * ns[i + 1];
    }

    std::vector<std::uint16_t> cells(v * v, 0);
    for (std::size_t x = 0; x < v; ++x) {
        for (std::size_t y = 0; y < v; ++y) {
            if (x == y) {
                continue;
            }
            std::size_t i = 0;
            while ((x / below[i]) % ns[i] == (y / below[i]) % ns[i]) {
                ++i;
            }
            cells[x * v + y] = static_cast<std::uint16_t>(i + 1);
        }
    }

    RatMatrix P(r + 1, r + 1);
    auto big = [](std::size_t x) { return Rational(static_cast<long>(x)); };
    for (std::size_t l = 0; l <= r; ++l) {
        P(l, 0) = 1;
        for (std::size_t i = 1; i <= r; ++i) {
            const Rational k = big((ns[i - 1] - 1) * below[i - 1]);
            if (l == 0 || i > l) {
                P(l, i) = k;
            } else if (i == l) {
                P(l, i) = -big(below[i - 1]);
            }
        }
    }
    return {RelationTable(v, r, std::move(cells)), std::move(P)};
}

bool is_prime(std::size_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::size_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            return false;
        }
    }
    return true;
}

RelationTable latin_scheme(std::size_t n, std::size_t t)
{
    if (!is_prime(n)) {
        throw Error(ErrorKind::NotPrime, std::to_string(n) + " is not prime");
    }
    if (t < 2 || t > n) {
        throw Error(ErrorKind::BadT, "need 2 <= t <= n, got t = " + std::to_string(t));
    }
    std::vector<std::size_t> inverse(n, 0);
    for (std::size_t a = 1; a < n; ++a) {
        for (std::size_t b = 1; b < n; ++b) {
            if (a * b % n == 1) {
                inverse[a] = b;
            }
        }
    }
    const std::size_t v = n * n;
    std::vector<std::uint16_t> cells(v * v, 0);
    for (std::size_t p = 0; p < v; ++p) {
        for (std::size_t q = 0; q < v; ++q) {
            if (p == q) {
                continue;
            }
            const std::size_t dx = (q / n + n - p / n) % n;
            const std::size_t dy = (q % n + n - p % n) % n;
            std::size_t direction = 0;
            if (dx == 0) {
                direction = 0;
            } else if (dy == 0) {
                direction = 1;
            } else {
                direction = 1 + dy * inverse[dx] % n;
            }
            cells[p * v + q] = static_cast<std::uint16_t>(direction < t ? direction + 1 : t + 1);
        }
    }
    return RelationTable(v, t + 1, std::move(cells));
}

RelationTable johnson3(std::size_t n)
{
    if (n < 7 || n > 32) {
        throw Error(ErrorKind::BadSize, "johnson3 needs 7 <= n <= 32");
    }
    std::vector<unsigned> subsets;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t c = b + 1; c < n; ++c) {
                subsets.push_back((1u << a) | (1u << b) | (1u << c));
            }
        }
    }
    const std::size_t v = subsets.size();
    std::vector<std::uint16_t> cells(v * v);
    for (std::size_t x = 0; x < v; ++x) {
        for (std::size_t y = 0; y < v; ++y) {
            cells[x * v + y] = static_cast<std::uint16_t>(3 - std::popcount(subsets[x] & subsets[y]));
        }
    }
    return RelationTable(v, 3, std::move(cells));
}

} // namespace amorph::gen
