#ifndef TCR_COVERS_HPP
#define TCR_COVERS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tcr/persistence.hpp"
#include "tcr/sparse_space.hpp"

namespace tcr {

struct Embedding {
    int dim = 3;  // 2 or 3; planar data stores z = 0
    std::vector<std::array<double, 3>> points;

    double dist(VertexId a, VertexId b) const {
        double dx = points[a][0] - points[b][0];
        double dy = points[a][1] - points[b][1];
        double dz = points[a][2] - points[b][2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }
};

/// Cycle as explicit vertex tuples (sorted within each tuple).
struct TupleCycle {
    int dim = 1;
    std::vector<std::array<VertexId, 4>> simplices;

    std::vector<VertexId> vertex_set() const;
    /// Longest constituent edge; pairwise over each tuple.
    double longest_edge(const SparseMetricSpace& space) const;
};

struct SignificanceParams {
    double tau_u = 0;
    double epsilon = 0;
    std::vector<int> dims{1};

    double tau() const { return tau_u + epsilon; }
};

struct CoverBox {
    std::array<double, 3> lo{}, hi{};

    bool contains(const std::array<double, 3>& p) const {
        return p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1] &&
               p[2] >= lo[2] && p[2] <= hi[2];
    }
    std::array<double, 3> center() const {
        return {(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2};
    }
    std::array<double, 3> extents() const {
        return {hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
    }
};

struct Cover {
    CoverBox box;
    std::vector<VertexId> members;  // sorted, inclusive of box faces
    std::int64_t n_sig = 0;
};

/// Theoretically maximum persistence of a feature wrapped by the cycle:
/// (max pairwise distance over cycle points) - (longest edge in the cycle).
/// Pairs absent from the space fall back to the embedding, else +inf.
double max_persistence_estimate(const TupleCycle& cycle, const SparseMetricSpace& space,
                                const Embedding* embedding = nullptr);

/// Smallest axis-aligned box over the cycle's embedded points plus every
/// dataset point inside or on it.
Cover cover_of(const std::vector<VertexId>& cycle_vertices, const Embedding& embedding);

/// Number of significant features (birth <= tau_u, persistence >= epsilon,
/// essential classes counted via tau - birth) in the members' induced
/// Euclidean space, summed over params.dims.
std::int64_t count_significant(const std::vector<VertexId>& members, const Embedding& embedding,
                               const SignificanceParams& params, const EngineOptions& opt = {});

/// Subset and intersection rewriting of the cover set, per connected component
/// of the proper-overlap graph, to fixpoint. All inputs must have n_sig > 0.
std::vector<Cover> contract_covers(std::vector<Cover> covers, const Embedding& embedding,
                                   const SignificanceParams& params,
                                   const EngineOptions& opt = {},
                                   std::vector<std::string>* log = nullptr);

/// Edges (i, j) with nonempty member intersection.
std::vector<std::pair<int, int>> cover_intersection_graph(const std::vector<Cover>& covers);

}  // namespace tcr

#endif
