#include "netstress/graph.hpp"

#include <algorithm>
#include <numeric>

namespace netstress {

namespace {

std::string vertex_name(VertexId v) { return std::to_string(v); }

// Union-find with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), count_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void merge(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --count_;
    }

    std::size_t count() const { return count_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t count_;
};

} // namespace

void MultiGraph::add_vertex(VertexId v, std::string label) {
    auto [it, inserted] = adj_.try_emplace(v);
    if (!inserted) throw GraphError("duplicate vertex " + vertex_name(v));
    if (!label.empty()) labels_.emplace(v, std::move(label));
}

void MultiGraph::add_edge(VertexId u, VertexId v, std::uint32_t multiplicity) {
    if (u == v) throw GraphError("self-loop at vertex " + vertex_name(u));
    if (multiplicity == 0) throw GraphError("zero multiplicity on edge " + vertex_name(u) + "-" + vertex_name(v));
    auto iu = adj_.find(u);
    auto iv = adj_.find(v);
    if (iu == adj_.end()) throw GraphError("unknown vertex " + vertex_name(u));
    if (iv == adj_.end()) throw GraphError("unknown vertex " + vertex_name(v));
    iu->second[v] += multiplicity;
    iv->second[u] += multiplicity;
}

std::size_t MultiGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& [v, nbrs] : adj_)
        for (const auto& [w, m] : nbrs) twice += m;
    return twice / 2;
}

std::uint32_t MultiGraph::multiplicity(VertexId u, VertexId v) const {
    auto it = adj_.find(u);
    if (it == adj_.end()) return 0;
    auto jt = it->second.find(v);
    return jt == it->second.end() ? 0 : jt->second;
}

std::size_t MultiGraph::degree(VertexId v) const {
    std::size_t d = 0;
    for (const auto& [w, m] : adj_of(v)) d += m;
    return d;
}

std::vector<VertexId> MultiGraph::vertices() const {
    std::vector<VertexId> out;
    out.reserve(adj_.size());
    for (const auto& [v, nbrs] : adj_) out.push_back(v);
    return out;
}

const std::map<VertexId, std::uint32_t>& MultiGraph::neighbors(VertexId v) const {
    return adj_of(v);
}

const std::string* MultiGraph::label(VertexId v) const {
    auto it = labels_.find(v);
    return it == labels_.end() ? nullptr : &it->second;
}

std::vector<std::tuple<VertexId, VertexId, std::uint32_t>> MultiGraph::edge_list() const {
    std::vector<std::tuple<VertexId, VertexId, std::uint32_t>> out;
    for (const auto& [v, nbrs] : adj_)
        for (const auto& [w, m] : nbrs)
            if (v < w) out.emplace_back(v, w, m);
    return out;
}

const std::map<VertexId, std::uint32_t>& MultiGraph::adj_of(VertexId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw GraphError("unknown vertex " + vertex_name(v));
    return it->second;
}

ComponentPartition connected_components(const MultiGraph& g) {
    const std::vector<VertexId> verts = g.vertices();
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);

    UnionFind uf(verts.size());
    for (const auto& [u, v, m] : g.edge_list()) uf.merge(index[u], index[v]);

    ComponentPartition part;
    part.count = uf.count();
    std::map<std::size_t, std::size_t> root_to_component;
    for (const VertexId v : verts) {
        const std::size_t root = uf.find(index[v]);
        auto [it, inserted] = root_to_component.try_emplace(root, root_to_component.size());
        part.assignment.emplace(v, it->second);
    }
    return part;
}

MultiGraph delete_vertex(const MultiGraph& g, VertexId v) {
    if (!g.has_vertex(v)) throw GraphError("unknown vertex " + std::to_string(v));
    MultiGraph out;
    for (const VertexId w : g.vertices()) {
        if (w == v) continue;
        const std::string* lbl = g.label(w);
        out.add_vertex(w, lbl ? *lbl : std::string{});
    }
    for (const auto& [a, b, m] : g.edge_list())
        if (a != v && b != v) out.add_edge(a, b, m);
    return out;
}

MultiGraph delete_incident_edges(const MultiGraph& g, VertexId v) {
    if (!g.has_vertex(v)) throw GraphError("unknown vertex " + std::to_string(v));
    MultiGraph out;
    for (const VertexId w : g.vertices()) {
        const std::string* lbl = g.label(w);
        out.add_vertex(w, lbl ? *lbl : std::string{});
    }
    for (const auto& [a, b, m] : g.edge_list())
        if (a != v && b != v) out.add_edge(a, b, m);
    return out;
}

MultiGraph contract_edge(const MultiGraph& g, VertexId u, VertexId v) {
    if (g.multiplicity(u, v) == 0)
        throw GraphError("unknown edge " + std::to_string(u) + "-" + std::to_string(v));
    const VertexId keep = std::min(u, v);
    const VertexId gone = std::max(u, v);

    MultiGraph out;
    for (const VertexId w : g.vertices()) {
        if (w == gone) continue;
        const std::string* lbl = g.label(w);
        out.add_vertex(w, lbl ? *lbl : std::string{});
    }
    for (const auto& [a, b, m] : g.edge_list()) {
        // all copies of {keep, gone} become self-loops and are dropped
        if ((a == keep && b == gone) || (a == gone && b == keep)) continue;
        const VertexId a2 = a == gone ? keep : a;
        const VertexId b2 = b == gone ? keep : b;
        out.add_edge(a2, b2, m);
    }
    return out;
}

DegreeDistribution degree_distribution(const MultiGraph& g) {
    if (g.vertex_count() == 0)
        throw GraphError("degree distribution undefined for the empty graph");
    std::map<std::size_t, std::size_t> counts;
    for (const VertexId v : g.vertices()) ++counts[g.degree(v)];
    const double n = static_cast<double>(g.vertex_count());
    DegreeDistribution dist;
    dist.entries.reserve(counts.size());
    for (const auto& [k, c] : counts)
        dist.entries.emplace_back(k, static_cast<double>(c) / n);
    return dist;
}

namespace {

// Fraction-free (Bareiss) determinant over exact integers. Destroys m.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && m[pivot][k] == 0) ++pivot;
            if (pivot == n) return 0;
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev; // exact division
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

} // namespace

BigInt spanning_tree_count(const MultiGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n <= 1) return 1;
    if (connected_components(g).count != 1) return 0;

    const std::vector<VertexId> verts = g.vertices();
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(verts[i], i);

    // Laplacian minor: drop the last row and column.
    std::vector<std::vector<BigInt>> m(n - 1, std::vector<BigInt>(n - 1, 0));
    for (std::size_t i = 0; i + 1 < n; ++i) m[i][i] = g.degree(verts[i]);
    for (const auto& [u, v, mult] : g.edge_list()) {
        const std::size_t i = index[u];
        const std::size_t j = index[v];
        if (i + 1 < n && j + 1 < n) {
            m[i][j] -= mult;
            m[j][i] -= mult;
        }
    }
    return bareiss_determinant(m);
}

} // namespace netstress
