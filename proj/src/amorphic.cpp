#include "amorph/amorphic.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "amorph/error.hpp"

namespace amorph {

CanonicalForm canonical_check(const RatMatrix& P)
{
    const std::size_t d = P.rows() - 1;
    CanonicalForm out;
    if (d <= 2) {
        out.amorphic = true;
        return out;
    }
    std::vector<std::size_t> column_row;
    std::vector<bool> row_used(d + 1, false);
    for (std::size_t c = 1; c <= d; ++c) {
        std::map<Rational, std::vector<std::size_t>> rows_by_value;
        for (std::size_t r = 1; r <= d; ++r) {
            rows_by_value[P(r, c)].push_back(r);
        }
        if (rows_by_value.size() != 2) {
            out.reason = "column " + std::to_string(c) + " takes " + std::to_string(rows_by_value.size()) +
                         " distinct values";
            return out;
        }
        std::optional<std::size_t> unique_row;
        for (const auto& [value, rows] : rows_by_value) {
            if (rows.size() == 1) {
                unique_row = rows[0];
            }
        }
        if (!unique_row) {
            out.reason = "column " + std::to_string(c) + " has no value occurring in exactly one row";
            return out;
        }
        if (row_used[*unique_row]) {
            out.reason = "row " + std::to_string(*unique_row) + " is the unique row of two columns";
            return out;
        }
        row_used[*unique_row] = true;
        column_row.push_back(*unique_row);
    }
    out.amorphic = true;
    out.column_row = std::move(column_row);
    return out;
}

void for_each_rgs(std::size_t n, const std::function<void(std::span<const std::size_t>)>& visit)
{
    if (n == 0) {
        return;
    }
    std::vector<std::size_t> a(n, 0);
    std::vector<std::size_t> prefix_max(n, 0); // max of a[0..k]
    for (;;) {
        visit(a);
        // Rightmost position that can be incremented.
        std::size_t k = n - 1;
        while (k > 0 && a[k] > prefix_max[k - 1]) {
            --k;
        }
        if (k == 0) {
            return;
        }
        ++a[k];
        prefix_max[k] = std::max(prefix_max[k - 1], a[k]);
        for (std::size_t j = k + 1; j < n; ++j) {
            a[j] = 0;
            prefix_max[j] = prefix_max[k];
        }
    }
}

OracleResult brute_force_amorphic(const RatMatrix& P)
{
    const std::size_t d = P.rows() - 1;
    if (d > kOracleMaxClasses) {
        throw Error(ErrorKind::TooManyClasses, "oracle enumerates partitions only up to d = 8");
    }
    OracleResult out;
    for_each_rgs(d, [&](std::span<const std::size_t> rgs) {
        IndexPartition pi = IndexPartition::from_rgs(rgs);
        ++out.partitions_checked;
        if (!try_fuse(P, pi) && out.amorphic) {
            out.amorphic = false;
            out.first_failure = std::move(pi);
        }
    });
    return out;
}

OracleResult brute_force_amorphic(const RelationTable& table)
{
    if (table.d() > kOracleMaxClasses) {
        throw Error(ErrorKind::TooManyClasses, "oracle enumerates partitions only up to d = 8");
    }
    return brute_force_amorphic(Scheme::from_table(table).P());
}

std::optional<std::vector<std::size_t>> self_duality_check(const RatMatrix& P, const RatMatrix& Q)
{
    const std::size_t n = P.rows();
    std::vector<std::size_t> sigma(n, 0);
    std::vector<bool> used(n, false);
    used[0] = true;
    // Position j is assigned; check every constraint touching 0..j.
    auto consistent = [&](std::size_t j) {
        for (std::size_t i = 0; i <= j; ++i) {
            if (P(sigma[j], i) != Q(j, sigma[i]) || P(sigma[i], j) != Q(i, sigma[j])) {
                return false;
            }
        }
        return true;
    };
    std::function<bool(std::size_t)> assign = [&](std::size_t j) {
        if (j == n) {
            return true;
        }
        for (std::size_t cand = 1; cand < n; ++cand) {
            if (used[cand]) {
                continue;
            }
            sigma[j] = cand;
            used[cand] = true;
            if (consistent(j) && assign(j + 1)) {
                return true;
            }
            used[cand] = false;
        }
        return false;
    };
    if (!consistent(0) || !assign(1)) {
        return std::nullopt;
    }
    return sigma;
}

bool ColumnClass::latin_or_negative() const
{
    return strongly_regular &&
           (has_type(tags, SrgType::LatinSquare) || has_type(tags, SrgType::NegativeLatinSquare));
}

std::vector<ColumnClass> classify_columns(const RatMatrix& M, SrKind kind)
{
    const std::size_t d = M.rows() - 1;
    Rational v = 0;
    for (std::size_t c = 0; c <= d; ++c) {
        v += M(0, c);
    }
    const auto sr = sr_detect(M);
    std::vector<ColumnClass> out;
    for (std::size_t c = 1; c <= d; ++c) {
        ColumnClass cc;
        cc.index = c;
        if (std::find(sr.begin(), sr.end(), c) != sr.end()) {
            auto [r, s] = two_values(M, c);
            // A two-valued column always satisfies the parameter identities.
            cc.strongly_regular = true;
            cc.tags = classify_srg(v.to_int64(), M(0, c).to_int64(), r, s, kind);
        }
        out.push_back(std::move(cc));
    }
    return out;
}

bool AmorphicVerdict::consistent() const
{
    return std::all_of(per_theorem.begin(), per_theorem.end(), [](const TheoremRow& r) { return r.consistent; });
}

namespace {

struct SideFacts {
    FusingGraph graph;
    GraphProfile profile;
    std::vector<ColumnClass> columns;

    bool complete() const
    {
        const auto n = graph.order();
        return profile.edge_count == n * (n - 1) / 2;
    }
    std::size_t non_latin() const
    {
        return static_cast<std::size_t>(std::count_if(columns.begin(), columns.end(),
                                                       [](const ColumnClass& c) { return !c.latin_or_negative(); }));
    }
    bool same_type() const
    {
        for (SrgType t : {SrgType::LatinSquare, SrgType::NegativeLatinSquare}) {
            if (std::all_of(columns.begin(), columns.end(),
                            [&](const ColumnClass& c) { return c.strongly_regular && has_type(c.tags, t); })) {
                return true;
            }
        }
        return false;
    }
};

SideFacts side_facts(const RatMatrix& M, SrKind kind)
{
    FusingGraph g = fusing_graph(M);
    GraphProfile profile = graph_profile(g);
    return {std::move(g), profile, classify_columns(M, kind)};
}

} // namespace

AmorphicVerdict theorem_audit(const RatMatrix& P, const RatMatrix& Q)
{
    const std::size_t d = P.rows() - 1;
    AmorphicVerdict verdict;
    CanonicalForm cf = canonical_check(P);
    verdict.canonical = cf.amorphic;
    verdict.canonical_rows = cf.column_row;
    if (d <= kOracleMaxClasses) {
        OracleResult oracle = brute_force_amorphic(P);
        verdict.oracle = oracle.amorphic;
        verdict.oracle_checks = oracle.partitions_checked;
    }
    const bool amorphic = verdict.canonical;
    if (amorphic) {
        verdict.self_dual = self_duality_check(P, Q).has_value();
    }

    const SideFacts rel = side_facts(P, SrKind::Relation);
    const SideFacts ide = side_facts(Q, SrKind::Idempotent);

    auto add = [&](std::string name, bool applicable, bool hyp, bool concl) {
        verdict.per_theorem.push_back({std::move(name), applicable, hyp, concl, !applicable || !hyp || concl});
    };
    auto connected_not_path = [](const SideFacts& s) { return s.profile.connected && !s.profile.is_path; };
    const std::size_t pair_bound = d >= 3 ? (d - 1) * (d - 2) / 2 : 0;

    add("all-relation-pairs-fuse", true, rel.complete(), amorphic);
    add("at-most-one-non-latin-relation", true, rel.non_latin() <= 1, amorphic);
    add("hamiltonian-relations-graph", d >= 3, rel.profile.hamiltonian.value_or(false), amorphic);
    add("claw-in-four-class-relations-graph", d == 4, rel.profile.has_claw, amorphic);
    add("connected-non-path-relations-graph", d >= 3, connected_not_path(rel), amorphic);
    add("many-fusing-relation-pairs", d >= 3, rel.profile.edge_count > pair_bound, amorphic);
    // At d = 3 the bound admits the path on three vertices.
    if (d == 3 && rel.profile.is_path && !verdict.per_theorem.back().consistent) {
        verdict.per_theorem.back().counterexample = true;
    }
    add("all-idempotent-pairs-fuse", true, ide.complete(), amorphic);
    add("at-most-one-non-latin-idempotent", true, ide.non_latin() <= 1, amorphic);
    add("connected-non-path-idempotents-graph", d >= 3, connected_not_path(ide), amorphic);

    add("amorphic-implies-complete-graphs", true, amorphic, rel.complete() && ide.complete());
    add("amorphic-implies-same-type-relations", d >= 3, amorphic, rel.same_type());
    add("amorphic-implies-same-type-idempotents", d >= 3, amorphic, ide.same_type());
    add("amorphic-implies-self-dual", d >= 3, amorphic, verdict.self_dual.value_or(false));
    add("equal-fusing-pair-counts", true, true, rel.profile.edge_count == ide.profile.edge_count);
    if (verdict.oracle) {
        add("canonical-form-agrees-with-oracle", true, true, *verdict.oracle == verdict.canonical);
    }
    return verdict;
}

} // namespace amorph
