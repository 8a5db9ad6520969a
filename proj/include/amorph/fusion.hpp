#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amorph/exact.hpp"
#include "amorph/scheme.hpp"

namespace amorph {

using IndexSet = std::vector<std::size_t>;

/// A partition of {1..d}; index 0 is always an implicit singleton part.
/// Parts are kept sorted internally and ordered by their smallest index.
class IndexPartition {
public:
    /// Throws BadPartition unless `parts` cover 1..d disjointly with no empty part.
    IndexPartition(std::size_t d, std::vector<IndexSet> parts);

    static IndexPartition singletons(std::size_t d);
    static IndexPartition coarsest(std::size_t d);
    /// {i, j} fused, everything else singleton.
    static IndexPartition pair(std::size_t d, std::size_t i, std::size_t j);
    /// Restricted-growth string over 1..d: rgs[k] is the block of index k+1.
    static IndexPartition from_rgs(std::span<const std::size_t> rgs);
    /// `1,2|3` syntax.
    static IndexPartition parse(std::size_t d, std::string_view text);

    std::size_t d() const { return d_; }
    std::size_t size() const { return parts_.size(); }
    const std::vector<IndexSet>& parts() const { return parts_; }
    /// Part number (0-based) holding index i in 1..d.
    std::size_t part_of(std::size_t i) const { return owner_[i]; }
    bool all_singletons() const { return parts_.size() == d_; }

    std::string str() const;

    friend bool operator==(const IndexPartition& a, const IndexPartition& b) { return a.parts_ == b.parts_; }

private:
    std::size_t d_;
    std::vector<IndexSet> parts_;
    std::vector<std::size_t> owner_;
};

struct FusionOutcome {
    IndexPartition pi;  // columns of the source matrix
    IndexPartition rho; // rows of the source matrix
    /// Block row sums: row 0 first, then one row per part of rho (in part
    /// order); column 0 first, then one column per part of pi.
    RatMatrix fused;
};

/// Bannai-Muzychuk: fuses iff grouping rows by their block-sum vectors yields
/// |pi| + 1 groups with row 0 alone. Works identically on P or Q.
/// Returns nullopt when the partition does not fuse; `groups` receives the
/// number of distinct block-sum vectors either way.
std::optional<FusionOutcome> try_fuse(const RatMatrix& M, const IndexPartition& pi,
                                      std::size_t* groups = nullptr);

/// As try_fuse but throws NoFusion.
FusionOutcome bm_check(const RatMatrix& M, const IndexPartition& pi);

/// Relabels every cell by its part number (+1) and re-validates. Throws
/// NoFusion, or InternalMismatch if the fused spectrum disagrees with the
/// block-sum matrix.
RelationTable fuse_relations(const RelationTable& table, const IndexPartition& pi);

struct FusingPair {
    std::pair<std::size_t, std::size_t> pair;
    std::pair<std::size_t, std::size_t> dual;

    friend bool operator==(const FusingPair&, const FusingPair&) = default;
    friend auto operator<=>(const FusingPair&, const FusingPair&) = default;
};

/// Every 2-subset of columns that fuses, with the matching pair of rows.
std::vector<FusingPair> fusing_pairs(const RatMatrix& M);

/// Pairs of relations and pairs of idempotents must correspond one-to-one.
/// Returns a description of the first violation, or nullopt.
std::optional<std::string> pair_bijection_check(const RatMatrix& P, const RatMatrix& Q);

/// Sorts rows 1..d of an eigenmatrix ascending, as spectrum() does.
RatMatrix canonical_row_order(const RatMatrix& M);

} // namespace amorph
