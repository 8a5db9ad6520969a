#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amorph/exact.hpp"
#include "amorph/fusion.hpp"
#include "amorph/scheme.hpp"

namespace amorph {

/// Simple graph whose vertices are labelled by disjoint sets of original
/// indices; a merged vertex {i, j} stands for the fused relation A_i + A_j.
class FusingGraph {
public:
    using Label = IndexSet;

    FusingGraph(std::vector<Label> labels, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    std::size_t order() const { return labels_.size(); }
    const std::vector<Label>& labels() const { return labels_; }
    bool adjacent(std::size_t a, std::size_t b) const { return adj_[a][b]; }
    std::size_t degree(std::size_t a) const;
    std::size_t edge_count() const;
    /// Edges as vertex-position pairs (a < b), sorted.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

    /// Position of the vertex whose label contains index i, or nullopt.
    std::optional<std::size_t> find(std::size_t index) const;

    friend bool operator==(const FusingGraph&, const FusingGraph&) = default;

private:
    std::vector<Label> labels_;
    std::vector<std::vector<bool>> adj_;
};

/// Vertices {1}..{d}; an edge for every fusing pair of columns of M.
FusingGraph fusing_graph(const RatMatrix& M);

/// Replaces the endpoints of edge {a, b} (vertex positions) with their union.
/// Throws NotAnEdge.
FusingGraph contract(const FusingGraph& g, std::size_t a, std::size_t b);
/// Same, addressing the vertices by labels.
FusingGraph contract(const FusingGraph& g, const FusingGraph::Label& a, const FusingGraph::Label& b);

struct GraphProfile {
    bool connected = false;
    bool is_path = false;
    std::size_t max_degree = 0;
    bool has_claw = false;
    /// nullopt when the graph is too large for exhaustive search.
    std::optional<bool> hamiltonian;
    std::size_t edge_count = 0;
};

inline constexpr std::size_t kHamiltonianLimit = 12;

GraphProfile graph_profile(const FusingGraph& g);

/// Naive search for K_{1,3} as a (not necessarily induced) subgraph.
bool contains_claw_naive(const FusingGraph& g);

struct Lemma4Result {
    bool pass = true;
    bool strict = false; // fused graph has edges beyond the contraction
    std::string witness; // first missing edge when !pass
};

/// Fuses the edge {i, j} of the fusing-relations graph and checks that the
/// contraction appears in the fused scheme's graph. The table overload
/// re-derives the fused scheme from the relabelled table. Throws NotAnEdge when
/// {i, j} does not fuse.
Lemma4Result lemma4_check(const RatMatrix& M, std::size_t i, std::size_t j);
Lemma4Result lemma4_check(const RelationTable& table, std::size_t i, std::size_t j);

/// Undirected DOT, vertices sorted by smallest index, labels comma-joined.
std::string to_dot(const FusingGraph& g, const std::string& name = "G");

} // namespace amorph
