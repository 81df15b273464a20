#include "tcr/sparse_space.hpp"

#include <algorithm>
#include <cmath>

namespace tcr {

SparseMetricSpace SparseMetricSpace::from_edges(std::int64_t n_vertices, double tau,
                                                std::vector<WeightedEdge> edges) {
    if (n_vertices < 0) throw InvalidInput("negative vertex count");
    if (!(tau > 0)) throw InvalidInput("threshold tau must be positive");
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const WeightedEdge& e = edges[i];
        if (e.u >= e.v)
            throw InvalidInput("edge endpoints must satisfy u < v: (" + std::to_string(e.u) +
                               ", " + std::to_string(e.v) + ")");
        if (e.v >= static_cast<VertexId>(n_vertices))
            throw InvalidInput("edge endpoint out of range: " + std::to_string(e.v));
        if (!std::isfinite(e.d) || e.d <= 0)
            throw InvalidInput("edge length must be finite and positive");
        if (e.d > tau) throw InvalidInput("edge length exceeds threshold tau");
        if (i > 0 && edges[i - 1].u == e.u && edges[i - 1].v == e.v)
            throw InvalidInput("duplicate edge (" + std::to_string(e.u) + ", " +
                               std::to_string(e.v) + ")");
    }
    SparseMetricSpace s;
    s.n_vertices_ = n_vertices;
    s.tau_ = tau;
    s.edges_ = std::move(edges);
    s.build_adjacency();
    return s;
}

SparseMetricSpace SparseMetricSpace::from_points(const std::vector<std::array<double, 3>>& pts,
                                                 double tau) {
    std::vector<WeightedEdge> edges;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = pts[i][0] - pts[j][0];
            double dy = pts[i][1] - pts[j][1];
            double dz = pts[i][2] - pts[j][2];
            double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (d > 0 && d <= tau)
                edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), d});
        }
    }
    return from_edges(static_cast<std::int64_t>(n), tau, std::move(edges));
}

void SparseMetricSpace::build_adjacency() {
    offsets_.assign(static_cast<std::size_t>(n_vertices_) + 1, 0);
    for (const WeightedEdge& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    for (std::int64_t i = 0; i < n_vertices_; ++i) offsets_[i + 1] += offsets_[i];
    adj_.resize(edges_.size() * 2);
    adj_edge_ordinal_.resize(edges_.size() * 2);
    std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const WeightedEdge& e = edges_[k];
        adj_[cursor[e.u]] = {e.v, e.d};
        adj_edge_ordinal_[cursor[e.u]++] = static_cast<std::int64_t>(k);
        adj_[cursor[e.v]] = {e.u, e.d};
        adj_edge_ordinal_[cursor[e.v]++] = static_cast<std::int64_t>(k);
    }
    // neighbor lists come out id-sorted because the edge list is lex sorted,
    // except for the v side; sort each bucket to be safe
    for (std::int64_t u = 0; u < n_vertices_; ++u) {
        std::int64_t lo = offsets_[u], hi = offsets_[u + 1];
        std::vector<std::pair<Neighbor, std::int64_t>> tmp;
        tmp.reserve(hi - lo);
        for (std::int64_t i = lo; i < hi; ++i) tmp.push_back({adj_[i], adj_edge_ordinal_[i]});
        std::sort(tmp.begin(), tmp.end(),
                  [](const auto& a, const auto& b) { return a.first.id < b.first.id; });
        for (std::int64_t i = lo; i < hi; ++i) {
            adj_[i] = tmp[i - lo].first;
            adj_edge_ordinal_[i] = tmp[i - lo].second;
        }
    }
}

double SparseMetricSpace::distance(VertexId u, VertexId v) const {
    if (u == v) return 0.0;
    std::int64_t k = edge_ordinal(u, v);
    return k < 0 ? std::numeric_limits<double>::infinity() : edges_[k].d;
}

std::int64_t SparseMetricSpace::edge_ordinal(VertexId u, VertexId v) const {
    if (u > v) std::swap(u, v);
    if (v >= static_cast<VertexId>(n_vertices_)) return -1;
    std::int64_t lo = offsets_[u], hi = offsets_[u + 1];
    while (lo < hi) {
        std::int64_t mid = (lo + hi) / 2;
        if (adj_[mid].id < v)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < offsets_[u + 1] && adj_[lo].id == v) return adj_edge_ordinal_[lo];
    return -1;
}

}  // namespace tcr
