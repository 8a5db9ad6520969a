#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amorph/exact.hpp"
#include "amorph/fusegraph.hpp"
#include "amorph/fusion.hpp"
#include "amorph/scheme.hpp"
#include "amorph/srg.hpp"

namespace amorph {

struct CanonicalForm {
    bool amorphic = false;
    /// column_row[c] is the principal row (1-based) holding the unique value
    /// of principal column c + 1; empty when not canonical or d <= 2.
    std::vector<std::size_t> column_row;
    std::string reason;
};

/// Principal part has canonical form: every column two-valued, one value in
/// exactly one row, and the column -> row map a bijection. d <= 2 is amorphic.
CanonicalForm canonical_check(const RatMatrix& P);

inline constexpr std::size_t kOracleMaxClasses = 8;

struct OracleResult {
    bool amorphic = true;
    std::optional<IndexPartition> first_failure;
    std::size_t partitions_checked = 0;
};

/// Runs bm_check on every set partition of 1..d, in restricted-growth-string
/// lexicographic order. Throws TooManyClasses for d > 8.
OracleResult brute_force_amorphic(const RatMatrix& P);
OracleResult brute_force_amorphic(const RelationTable& table);

/// Visits every restricted growth string of length n (lexicographic).
void for_each_rgs(std::size_t n, const std::function<void(std::span<const std::size_t>)>& visit);

/// Looks for a relabelling sigma of idempotents (sigma(0) = 0) with
/// P[sigma(j)][i] = Q[j][sigma(i)]; returns sigma or nullopt.
std::optional<std::vector<std::size_t>> self_duality_check(const RatMatrix& P, const RatMatrix& Q);

/// Classification of one principal column (relation of P, idempotent of Q).
struct ColumnClass {
    std::size_t index = 0;
    bool strongly_regular = false;
    std::vector<TypeTag> tags;

    bool latin_or_negative() const;
};

std::vector<ColumnClass> classify_columns(const RatMatrix& M, SrKind kind);

struct TheoremRow {
    std::string name;
    bool applicable = true; // false when the statement's d-range excludes the scheme
    bool hypothesis = false;
    bool conclusion = false;
    bool consistent = true;
    /// Inconsistent because the statement itself fails on this scheme (the
    /// edge bound at d = 3 admits a path), not because of a computation.
    bool counterexample = false;
};

struct AmorphicVerdict {
    bool canonical = false;
    std::vector<std::size_t> canonical_rows;
    std::optional<bool> oracle; // nullopt when skipped (d > 8)
    std::size_t oracle_checks = 0;
    std::optional<bool> self_dual; // evaluated for amorphic schemes
    std::vector<TheoremRow> per_theorem;

    bool amorphic() const { return canonical; }
    bool consistent() const;
};

/// Evaluates both deciders, self-duality and every audited implication.
AmorphicVerdict theorem_audit(const RatMatrix& P, const RatMatrix& Q);

} // namespace amorph
