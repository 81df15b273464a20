#ifndef TCR_SPARSE_SPACE_HPP
#define TCR_SPARSE_SPACE_HPP

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "tcr/types.hpp"

namespace tcr {

struct WeightedEdge {
    VertexId u, v;
    double d;
};

/// Vertices plus finite weighted edges. Absent pairs have distance +inf and
/// never enter the complex. Immutable after construction.
class SparseMetricSpace {
public:
    SparseMetricSpace() = default;

    /// Validates and indexes an edge list: u < v, 0 < d <= tau, d finite, no duplicates.
    static SparseMetricSpace from_edges(std::int64_t n_vertices, double tau,
                                        std::vector<WeightedEdge> edges);

    /// Complete-within-tau space over embedded points (Euclidean distances).
    static SparseMetricSpace from_points(const std::vector<std::array<double, 3>>& pts,
                                         double tau);

    std::int64_t n_vertices() const { return n_vertices_; }
    double tau() const { return tau_; }
    std::int64_t n_edges() const { return static_cast<std::int64_t>(edges_.size()); }

    /// Edges in lexicographic (u, v) order; ordinal = position in this list.
    const std::vector<WeightedEdge>& edges() const { return edges_; }

    /// Stored distance, or +inf when the pair is absent.
    double distance(VertexId u, VertexId v) const;

    bool has_edge(VertexId u, VertexId v) const {
        return edge_ordinal(u, v) >= 0;
    }

    /// Position of (u, v) in the lex-sorted edge list, or -1.
    std::int64_t edge_ordinal(VertexId u, VertexId v) const;

    struct Neighbor {
        VertexId id;
        double d;
    };

    /// Neighbors of u sorted by id.
    std::span<const Neighbor> neighbors(VertexId u) const {
        return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
    }

private:
    std::int64_t n_vertices_ = 0;
    double tau_ = std::numeric_limits<double>::infinity();
    std::vector<WeightedEdge> edges_;
    std::vector<std::int64_t> offsets_;
    std::vector<Neighbor> adj_;
    std::vector<std::int64_t> adj_edge_ordinal_;

    void build_adjacency();
};

}  // namespace tcr

#endif
