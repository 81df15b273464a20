#ifndef TCR_REFINE_HPP
#define TCR_REFINE_HPP

#include <array>
#include <vector>

#include "tcr/filtration.hpp"
#include "tcr/types.hpp"

namespace tcr {

struct ShortenParams {
    int threads = 1;
    int init_chunk = 1000;
    int iter_chunk = 50;
};

struct ShortenStats {
    std::int64_t iterations = 0;
    std::int64_t substitutions = 0;
};

/// Greedy basis shortening: substitute X_i by X_i ^ X_j whenever that realizes
/// the round's maximum length reduction d*; stops at d* = 0. The H1 path keeps
/// an inverted simplex index and refreshes best partners incrementally; the H2
/// path rescans all pairs each round. Returns cycles sorted by decreasing
/// length. Ties pick the partner earliest in the length-sorted order.
std::vector<Chain> shorten_cycles(std::vector<Chain> cycles, int dim,
                                  const ShortenParams& params = {},
                                  ShortenStats* stats = nullptr);

/// H1: cycle-basis elements of the chain's edge graph (fundamental cycles of a
/// breadth-first spanning forest). H2: connected components of the
/// triangle-adjacency graph (adjacency = two shared vertices).
std::vector<Chain> split_disconnected(const Chain& cycle, int dim, const Filtration& f);

/// One smoothing move: the modifying simplex (triangle for H1, tetrahedron for
/// H2) and its diameter.
struct SmoothMove {
    double diameter;
};

/// Closed vertex walk of a simple 1-cycle, starting at the smallest vertex and
/// oriented toward its smaller neighbor.
std::vector<VertexId> cycle_to_walk(const Chain& cycle, const Filtration& f);

struct SmoothedWalk {
    std::vector<VertexId> walk;
    bool degenerate = false;  // reduced to length 2
};

/// Removes v_i whenever the space holds an edge (v_{i-1}, v_{i+1}) of length
/// <= tau_u; cyclic scan repeated to fixpoint.
SmoothedWalk smooth_h1(std::vector<VertexId> walk, const SparseMetricSpace& space, double tau_u,
                       std::vector<SmoothMove>* moves = nullptr);

using Triangle = std::array<VertexId, 3>;

/// Replaces three faces of an admissible tetrahedron (diameter <= tau_u, all
/// six edges stored, fourth face absent) by the fourth face, greedily smallest
/// diameter first, to fixpoint; then drops components of size <= 4.
std::vector<Triangle> smooth_h2(std::vector<Triangle> cycle, const SparseMetricSpace& space,
                                double tau_u, std::vector<SmoothMove>* moves = nullptr);

std::vector<Triangle> chain_to_triangles(const Chain& cycle, const Filtration& f);

/// Is every edge covered by an even number of triangles?
bool is_two_cycle(const std::vector<Triangle>& tris);

}  // namespace tcr

#endif
