#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "netstress/errors.hpp"

namespace netstress {

using BigInt = boost::multiprecision::cpp_int;

/// Vertex identifier. Unique within one graph, survives edge mutations.
using VertexId = std::uint32_t;

/// Undirected multigraph: parallel edges allowed, self-loops never stored.
///
/// add_vertex/add_edge are the construction builder; everything after
/// construction treats the graph as an immutable value. Mutating operations
/// (delete_vertex, contract_edge, ...) are free functions returning a new
/// graph, so values can be shared read-only across threads.
class MultiGraph {
public:
    MultiGraph() = default;

    void add_vertex(VertexId v, std::string label = {});
    /// Adds `multiplicity` parallel copies of edge {u, v}. Endpoints must
    /// already exist and differ.
    void add_edge(VertexId u, VertexId v, std::uint32_t multiplicity = 1);

    bool has_vertex(VertexId v) const { return adj_.count(v) != 0; }
    std::size_t vertex_count() const { return adj_.size(); }
    /// Total number of edges, parallel copies counted.
    std::size_t edge_count() const;
    std::uint32_t multiplicity(VertexId u, VertexId v) const;
    /// Sum of incident edge multiplicities.
    std::size_t degree(VertexId v) const;

    std::vector<VertexId> vertices() const;
    /// Neighbors of v with edge multiplicities, ascending by neighbor id.
    const std::map<VertexId, std::uint32_t>& neighbors(VertexId v) const;
    /// nullptr when the vertex has no label.
    const std::string* label(VertexId v) const;
    /// (u, v, multiplicity) with u < v, ascending.
    std::vector<std::tuple<VertexId, VertexId, std::uint32_t>> edge_list() const;

    friend bool operator==(const MultiGraph&, const MultiGraph&) = default;

private:
    const std::map<VertexId, std::uint32_t>& adj_of(VertexId v) const;

    // adj_ holds one entry per vertex (possibly empty), kept symmetric.
    std::map<VertexId, std::map<VertexId, std::uint32_t>> adj_;
    std::map<VertexId, std::string> labels_; // only labeled vertices
};

/// Partition of the vertex set into connected components. Component indices
/// are 0-based, ordered by the smallest vertex id each component contains.
struct ComponentPartition {
    std::size_t count = 0;
    std::map<VertexId, std::size_t> assignment;
};

/// Sparse degree distribution: p_k per degree k, zero-mass degrees omitted.
struct DegreeDistribution {
    std::vector<std::pair<std::size_t, double>> entries; // (degree, mass), ascending

    friend bool operator==(const DegreeDistribution&, const DegreeDistribution&) = default;
};

ComponentPartition connected_components(const MultiGraph& g);

/// Removes v and every incident edge (all parallel copies).
MultiGraph delete_vertex(const MultiGraph& g, VertexId v);

/// Removes every edge incident to v, keeping the vertex.
MultiGraph delete_incident_edges(const MultiGraph& g, VertexId v);

/// Contracts one copy of edge {u, v}: endpoints merge into the smaller id,
/// remaining parallel copies become self-loops and are dropped, edges to
/// third vertices are kept (stacking into parallel edges where both
/// endpoints reached the same third vertex).
MultiGraph contract_edge(const MultiGraph& g, VertexId u, VertexId v);

/// Degrees count parallel edges with multiplicity. Throws on an empty graph.
DegreeDistribution degree_distribution(const MultiGraph& g);

/// Exact number of spanning trees via the Matrix-Tree theorem: determinant
/// of an (n-1)x(n-1) principal minor of the multigraph Laplacian, computed
/// with fraction-free integer elimination. 0 for disconnected graphs, 1 for
/// a single vertex and for the empty graph (0x0 determinant convention).
BigInt spanning_tree_count(const MultiGraph& g);

} // namespace netstress
