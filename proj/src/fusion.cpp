#include "amorph/fusion.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "amorph/error.hpp"

namespace amorph {

IndexPartition::IndexPartition(std::size_t d, std::vector<IndexSet> parts)
    : d_(d), parts_(std::move(parts)), owner_(d + 1, 0)
{
    std::vector<bool> seen(d + 1, false);
    for (auto& part : parts_) {
        if (part.empty()) {
            throw Error(ErrorKind::BadPartition, "empty part");
        }
        std::sort(part.begin(), part.end());
        for (auto i : part) {
            if (i == 0 || i > d) {
                throw Error(ErrorKind::BadPartition, "index " + std::to_string(i) + " outside 1.." + std::to_string(d));
            }
            if (seen[i]) {
                throw Error(ErrorKind::BadPartition, "index " + std::to_string(i) + " appears twice");
            }
            seen[i] = true;
        }
    }
    for (std::size_t i = 1; i <= d; ++i) {
        if (!seen[i]) {
            throw Error(ErrorKind::BadPartition, "index " + std::to_string(i) + " missing");
        }
    }
    std::sort(parts_.begin(), parts_.end(), [](const IndexSet& a, const IndexSet& b) { return a[0] < b[0]; });
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        for (auto i : parts_[k]) {
            owner_[i] = k;
        }
    }
}

IndexPartition IndexPartition::singletons(std::size_t d)
{
    std::vector<IndexSet> parts;
    for (std::size_t i = 1; i <= d; ++i) {
        parts.push_back({i});
    }
    return IndexPartition(d, std::move(parts));
}

IndexPartition IndexPartition::coarsest(std::size_t d)
{
    IndexSet all;
    for (std::size_t i = 1; i <= d; ++i) {
        all.push_back(i);
    }
    return IndexPartition(d, {all});
}

IndexPartition IndexPartition::pair(std::size_t d, std::size_t i, std::size_t j)
{
    std::vector<IndexSet> parts{{i, j}};
    for (std::size_t k = 1; k <= d; ++k) {
        if (k != i && k != j) {
            parts.push_back({k});
        }
    }
    return IndexPartition(d, std::move(parts));
}

IndexPartition IndexPartition::from_rgs(std::span<const std::size_t> rgs)
{
    std::size_t blocks = 0;
    for (auto b : rgs) {
        blocks = std::max(blocks, b + 1);
    }
    std::vector<IndexSet> parts(blocks);
    for (std::size_t k = 0; k < rgs.size(); ++k) {
        parts[rgs[k]].push_back(k + 1);
    }
    return IndexPartition(rgs.size(), std::move(parts));
}

IndexPartition IndexPartition::parse(std::size_t d, std::string_view text)
{
    std::vector<IndexSet> parts;
    std::string s(text);
    std::istringstream blocks(s);
    std::string block;
    while (std::getline(blocks, block, '|')) {
        IndexSet part;
        std::istringstream items(block);
        std::string item;
        while (std::getline(items, item, ',')) {
            auto first = item.find_first_not_of(' ');
            auto last = item.find_last_not_of(' ');
            if (first == std::string::npos) {
                throw Error(ErrorKind::BadPartition, "empty index in '" + s + "'");
            }
            item = item.substr(first, last - first + 1);
            if (!std::all_of(item.begin(), item.end(), [](unsigned char c) { return std::isdigit(c); }) ||
                item.size() > 6) {
                throw Error(ErrorKind::BadPartition, "bad index '" + item + "'");
            }
            part.push_back(std::stoul(item));
        }
        parts.push_back(std::move(part));
    }
    return IndexPartition(d, std::move(parts));
}

std::string IndexPartition::str() const
{
    std::string out;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        if (k) {
            out += '|';
        }
        for (std::size_t m = 0; m < parts_[k].size(); ++m) {
            if (m) {
                out += ',';
            }
            out += std::to_string(parts_[k][m]);
        }
    }
    return out;
}

namespace {

struct VectorHash {
    std::size_t operator()(const RatVector& v) const { return hash_value(v); }
};

} // namespace

std::optional<FusionOutcome> try_fuse(const RatMatrix& M, const IndexPartition& pi, std::size_t* groups)
{
    const std::size_t d = M.rows() - 1;
    if (!M.square() || pi.d() != d) {
        throw Error(ErrorKind::BadPartition, "partition is over 1.." + std::to_string(pi.d()) +
                                                 " but the matrix has d = " + std::to_string(d));
    }
    const std::size_t width = pi.size() + 1;
    std::vector<RatVector> sums(d + 1, RatVector(width));
    for (std::size_t l = 0; l <= d; ++l) {
        sums[l][0] = M(l, 0);
        for (std::size_t i = 1; i <= d; ++i) {
            sums[l][pi.part_of(i) + 1] += M(l, i);
        }
    }
    std::unordered_map<RatVector, std::size_t, VectorHash> group_of;
    std::vector<IndexSet> row_groups;
    std::vector<std::size_t> group_row; // representative row
    for (std::size_t l = 0; l <= d; ++l) {
        auto [it, inserted] = group_of.try_emplace(sums[l], row_groups.size());
        if (inserted) {
            row_groups.emplace_back();
            group_row.push_back(l);
        }
        row_groups[it->second].push_back(l);
    }
    if (groups) {
        *groups = row_groups.size();
    }
    if (row_groups.size() != width || row_groups[0].size() != 1) {
        return std::nullopt;
    }
    std::vector<IndexSet> rho_parts(row_groups.begin() + 1, row_groups.end());
    IndexPartition rho(d, rho_parts);
    RatMatrix fused(width, width);
    for (std::size_t c = 0; c < width; ++c) {
        fused(0, c) = sums[0][c];
    }
    for (std::size_t k = 0; k < rho.size(); ++k) {
        const auto& row = sums[rho.parts()[k][0]];
        for (std::size_t c = 0; c < width; ++c) {
            fused(k + 1, c) = row[c];
        }
    }
    return FusionOutcome{pi, std::move(rho), std::move(fused)};
}

FusionOutcome bm_check(const RatMatrix& M, const IndexPartition& pi)
{
    std::size_t groups = 0;
    auto out = try_fuse(M, pi, &groups);
    if (!out) {
        throw Error(ErrorKind::NoFusion, "partition " + pi.str() + " gives " + std::to_string(groups) +
                                             " distinct block-sum rows, need " + std::to_string(pi.size() + 1));
    }
    return std::move(*out);
}

RatMatrix canonical_row_order(const RatMatrix& M)
{
    std::vector<RatVector> rows;
    for (std::size_t r = 0; r < M.rows(); ++r) {
        rows.emplace_back(M.row(r).begin(), M.row(r).end());
    }
    std::sort(rows.begin() + 1, rows.end());
    return RatMatrix::from_rows(rows);
}

RelationTable fuse_relations(const RelationTable& table, const IndexPartition& pi)
{
    const Scheme source = Scheme::from_table(table);
    FusionOutcome outcome = bm_check(source.P(), pi);

    std::vector<std::uint16_t> cells(table.cells().size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const auto c = table.cells()[k];
        cells[k] = c == 0 ? 0 : static_cast<std::uint16_t>(pi.part_of(c) + 1);
    }
    RelationTable fused(table.v(), pi.size(), std::move(cells));
    SpectralData s;
    try {
        s = spectrum(validate_table(fused));
    } catch (const Error& e) {
        throw Error(ErrorKind::InternalMismatch, std::string("fused table rejected: ") + e.what());
    }
    if (s.P != canonical_row_order(outcome.fused)) {
        throw Error(ErrorKind::InternalMismatch, "fused spectrum differs from the block-sum matrix");
    }
    return fused;
}

std::vector<FusingPair> fusing_pairs(const RatMatrix& M)
{
    const std::size_t d = M.rows() - 1;
    std::vector<FusingPair> out;
    for (std::size_t i = 1; i <= d; ++i) {
        for (std::size_t j = i + 1; j <= d; ++j) {
            auto f = try_fuse(M, IndexPartition::pair(d, i, j));
            if (!f) {
                continue;
            }
            for (const auto& part : f->rho.parts()) {
                if (part.size() == 2) {
                    out.push_back({{i, j}, {part[0], part[1]}});
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::string> pair_bijection_check(const RatMatrix& P, const RatMatrix& Q)
{
    auto primal = fusing_pairs(P);
    auto dual = fusing_pairs(Q);
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> dual_map;
    for (const auto& fp : dual) {
        dual_map[fp.pair] = fp.dual;
    }
    std::set<std::pair<std::size_t, std::size_t>> images;
    for (const auto& fp : primal) {
        auto pr = [](auto p) { return "{" + std::to_string(p.first) + "," + std::to_string(p.second) + "}"; };
        if (!images.insert(fp.dual).second) {
            return "two relation pairs map to idempotent pair " + pr(fp.dual);
        }
        auto it = dual_map.find(fp.dual);
        if (it == dual_map.end()) {
            return "relation pair " + pr(fp.pair) + " maps to " + pr(fp.dual) + ", which does not fuse in Q";
        }
        if (it->second != fp.pair) {
            return "idempotent pair " + pr(fp.dual) + " maps back to " + pr(it->second) + " instead of " +
                   pr(fp.pair);
        }
    }
    if (images.size() != dual.size()) {
        return "Q has " + std::to_string(dual.size()) + " fusing pairs but P has " + std::to_string(primal.size());
    }
    return std::nullopt;
}

} // namespace amorph
