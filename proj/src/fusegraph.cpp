#include "amorph/fusegraph.hpp"

#include <algorithm>
#include <functional>

#include "amorph/error.hpp"

namespace amorph {

FusingGraph::FusingGraph(std::vector<Label> labels, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : labels_(std::move(labels))
{
    for (auto& l : labels_) {
        std::sort(l.begin(), l.end());
    }
    // Vertices are kept ordered by smallest index.
    std::vector<std::size_t> order(labels_.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        order[k] = k;
    }
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return labels_[a][0] < labels_[b][0]; });
    std::vector<std::size_t> pos(order.size());
    std::vector<Label> sorted;
    for (std::size_t k = 0; k < order.size(); ++k) {
        pos[order[k]] = k;
        sorted.push_back(labels_[order[k]]);
    }
    labels_ = std::move(sorted);
    adj_.assign(labels_.size(), std::vector<bool>(labels_.size(), false));
    for (auto [a, b] : edges) {
        if (a == b) {
            continue;
        }
        adj_[pos[a]][pos[b]] = adj_[pos[b]][pos[a]] = true;
    }
}

std::size_t FusingGraph::degree(std::size_t a) const
{
    return static_cast<std::size_t>(std::count(adj_[a].begin(), adj_[a].end(), true));
}

std::size_t FusingGraph::edge_count() const
{
    std::size_t twice = 0;
    for (std::size_t a = 0; a < order(); ++a) {
        twice += degree(a);
    }
    return twice / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> FusingGraph::edges() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < order(); ++a) {
        for (std::size_t b = a + 1; b < order(); ++b) {
            if (adj_[a][b]) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

std::optional<std::size_t> FusingGraph::find(std::size_t index) const
{
    for (std::size_t a = 0; a < order(); ++a) {
        if (std::binary_search(labels_[a].begin(), labels_[a].end(), index)) {
            return a;
        }
    }
    return std::nullopt;
}

FusingGraph fusing_graph(const RatMatrix& M)
{
    const std::size_t d = M.rows() - 1;
    std::vector<FusingGraph::Label> labels;
    for (std::size_t i = 1; i <= d; ++i) {
        labels.push_back({i});
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& fp : fusing_pairs(M)) {
        edges.emplace_back(fp.pair.first - 1, fp.pair.second - 1);
    }
    return FusingGraph(std::move(labels), edges);
}

FusingGraph contract(const FusingGraph& g, std::size_t a, std::size_t b)
{
    if (a >= g.order() || b >= g.order() || a == b || !g.adjacent(a, b)) {
        throw Error(ErrorKind::NotAnEdge, "contracted pair is not an edge");
    }
    std::vector<FusingGraph::Label> labels;
    std::vector<std::size_t> map(g.order());
    for (std::size_t x = 0; x < g.order(); ++x) {
        if (x == b) {
            continue;
        }
        map[x] = labels.size();
        labels.push_back(g.labels()[x]);
    }
    map[b] = map[a];
    auto& merged = labels[map[a]];
    merged.insert(merged.end(), g.labels()[b].begin(), g.labels()[b].end());
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (auto [x, y] : g.edges()) {
        if (map[x] != map[y]) {
            edges.emplace_back(map[x], map[y]);
        }
    }
    return FusingGraph(std::move(labels), edges);
}

FusingGraph contract(const FusingGraph& g, const FusingGraph::Label& a, const FusingGraph::Label& b)
{
    auto locate = [&](const FusingGraph::Label& l) {
        FusingGraph::Label sorted = l;
        std::sort(sorted.begin(), sorted.end());
        auto it = std::find(g.labels().begin(), g.labels().end(), sorted);
        if (it == g.labels().end()) {
            throw Error(ErrorKind::NotAnEdge, "no vertex with the given label");
        }
        return static_cast<std::size_t>(it - g.labels().begin());
    };
    return contract(g, locate(a), locate(b));
}

namespace {

bool hamiltonian_cycle(const FusingGraph& g)
{
    const std::size_t n = g.order();
    if (n <= 2) {
        return false;
    }
    std::vector<std::size_t> path{0};
    std::vector<bool> used(n, false);
    used[0] = true;
    std::function<bool()> extend = [&]() {
        if (path.size() == n) {
            return g.adjacent(path.back(), 0);
        }
        for (std::size_t next = 1; next < n; ++next) {
            if (used[next] || !g.adjacent(path.back(), next)) {
                continue;
            }
            used[next] = true;
            path.push_back(next);
            if (extend()) {
                return true;
            }
            path.pop_back();
            used[next] = false;
        }
        return false;
    };
    return extend();
}

} // namespace

GraphProfile graph_profile(const FusingGraph& g)
{
    GraphProfile out;
    const std::size_t n = g.order();
    out.edge_count = g.edge_count();

    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (std::size_t y = 0; y < n; ++y) {
            if (g.adjacent(x, y) && !seen[y]) {
                seen[y] = true;
                ++reached;
                stack.push_back(y);
            }
        }
    }
    out.connected = reached == n;

    std::size_t leaves = 0;
    for (std::size_t x = 0; x < n; ++x) {
        const auto deg = g.degree(x);
        out.max_degree = std::max(out.max_degree, deg);
        leaves += deg == 1;
    }
    out.is_path = out.connected && out.max_degree <= 2 && (n == 1 || leaves == 2);
    out.has_claw = out.max_degree >= 3;
    if (n <= kHamiltonianLimit) {
        out.hamiltonian = hamiltonian_cycle(g);
    }
    return out;
}

bool contains_claw_naive(const FusingGraph& g)
{
    const std::size_t n = g.order();
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                for (std::size_t e = b + 1; e < n; ++e) {
                    if (a != c && b != c && e != c && g.adjacent(c, a) && g.adjacent(c, b) && g.adjacent(c, e)) {
                        return true;
                    }
                }
            }
        }
    }
    return false;
}

namespace {

Lemma4Result compare_with_contraction(const RatMatrix& M, std::size_t i, std::size_t j,
                                      const FusingGraph& fused_graph, const IndexPartition& pi)
{
    const FusingGraph gamma = fusing_graph(M);
    auto a = gamma.find(i);
    auto b = gamma.find(j);
    if (!a || !b || !gamma.adjacent(*a, *b)) {
        throw Error(ErrorKind::NotAnEdge, "{" + std::to_string(i) + "," + std::to_string(j) +
                                              "} is not an edge of the fusing graph");
    }
    const FusingGraph contracted = contract(gamma, *a, *b);
    Lemma4Result out;
    // Fused index of a contracted vertex: part number + 1 of any member.
    auto fused_vertex = [&](std::size_t pos) {
        return *fused_graph.find(pi.part_of(contracted.labels()[pos][0]) + 1);
    };
    for (auto [x, y] : contracted.edges()) {
        if (!fused_graph.adjacent(fused_vertex(x), fused_vertex(y))) {
            out.pass = false;
            auto fmt = [](const FusingGraph::Label& l) {
                std::string s;
                for (auto k : l) {
                    s += std::to_string(k);
                }
                return s;
            };
            out.witness = "contracted edge {" + fmt(contracted.labels()[x]) + "," + fmt(contracted.labels()[y]) +
                          "} missing after fusing {" + std::to_string(i) + "," + std::to_string(j) + "}";
            return out;
        }
    }
    out.strict = fused_graph.edge_count() > contracted.edge_count();
    return out;
}

} // namespace

Lemma4Result lemma4_check(const RatMatrix& M, std::size_t i, std::size_t j)
{
    const std::size_t d = M.rows() - 1;
    const IndexPartition pi = IndexPartition::pair(d, std::min(i, j), std::max(i, j));
    auto f = try_fuse(M, pi);
    if (!f) {
        throw Error(ErrorKind::NotAnEdge, "{" + std::to_string(i) + "," + std::to_string(j) + "} does not fuse");
    }
    return compare_with_contraction(M, i, j, fusing_graph(f->fused), pi);
}

Lemma4Result lemma4_check(const RelationTable& table, std::size_t i, std::size_t j)
{
    const Scheme source = Scheme::from_table(table);
    const IndexPartition pi = IndexPartition::pair(table.d(), std::min(i, j), std::max(i, j));
    if (!try_fuse(source.P(), pi)) {
        throw Error(ErrorKind::NotAnEdge, "{" + std::to_string(i) + "," + std::to_string(j) + "} does not fuse");
    }
    const Scheme fused = Scheme::from_table(fuse_relations(table, pi));
    return compare_with_contraction(source.P(), i, j, fusing_graph(fused.P()), pi);
}

std::string to_dot(const FusingGraph& g, const std::string& name)
{
    auto label = [&](std::size_t a) {
        std::string s;
        for (std::size_t k = 0; k < g.labels()[a].size(); ++k) {
            s += (k ? "," : "") + std::to_string(g.labels()[a][k]);
        }
        return s;
    };
    std::string out = "graph " + name + " {\n";
    for (std::size_t a = 0; a < g.order(); ++a) {
        out += "  v" + std::to_string(a) + " [label=\"" + label(a) + "\"];\n";
    }
    for (auto [a, b] : g.edges()) {
        out += "  v" + std::to_string(a) + " -- v" + std::to_string(b) + ";\n";
    }
    out += "}\n";
    return out;
}

} // namespace amorph
