#ifndef TCR_FILTRATION_HPP
#define TCR_FILTRATION_HPP

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "tcr/sparse_space.hpp"
#include "tcr/types.hpp"

namespace tcr {

struct Simplex {
    double diameter;
    std::array<VertexId, 4> v;  // sorted ascending, unused slots zero
    std::uint8_t dim;
};

/// Paired encoding of a triangle or tetrahedron: the filtration index of its
/// latest facet (which carries the diameter) plus the remaining vertex.
struct PairedId {
    SimplexIndex primary;
    VertexId secondary;
};

/// Total order over simplices: (diameter asc, dim asc, order key asc) where the
/// order key is the edge rank for edges (lexicographic by default, shuffled
/// within equal-diameter runs by permutation trials) and the vertex tuple
/// otherwise. Immutable after construction.
class Filtration {
public:
    /// Enumerates every simplex of dim <= max_dim whose pairwise distances are
    /// all stored edges. Throws BudgetError when the simplex count exceeds
    /// budget. edge_ranks, when given, maps edge ordinal -> rank.
    static Filtration build(const SparseMetricSpace& space, int max_dim,
                            const std::vector<std::int64_t>* edge_ranks = nullptr,
                            std::int64_t budget = Budgets{}.max_simplices);

    /// First `count` simplices as a standalone filtration (a prefix complex in
    /// the D_i sense). Requires the prefix to be closed under faces.
    Filtration prefix(std::int64_t count) const;

    const SparseMetricSpace& space() const { return *space_; }
    int max_dim() const { return max_dim_; }
    std::int64_t size() const { return static_cast<std::int64_t>(simplices_.size()); }
    const Simplex& simplex(SimplexIndex i) const { return simplices_[i]; }
    double diameter(SimplexIndex i) const { return simplices_[i].diameter; }
    int dim(SimplexIndex i) const { return simplices_[i].dim; }
    std::span<const VertexId> vertices(SimplexIndex i) const {
        return {simplices_[i].v.data(), static_cast<std::size_t>(simplices_[i].dim) + 1};
    }

    /// Filtration indices of all d-simplices in filtration order.
    const std::vector<SimplexIndex>& items(int d) const { return dim_items_[d]; }

    SimplexIndex index_of_vertex(VertexId v) const { return static_cast<SimplexIndex>(v); }
    SimplexIndex index_of_edge_ordinal(std::int64_t ordinal) const {
        return edge_to_index_[ordinal];
    }
    SimplexIndex index_of(std::span<const VertexId> verts) const;

    /// Facets in increasing filtration order (1, 2, 3 or 4 of them).
    void boundary(SimplexIndex i, Chain& out) const;
    Chain boundary(SimplexIndex i) const {
        Chain c;
        boundary(i, c);
        return c;
    }

    /// Cofacets present in the filtration, in increasing filtration order.
    /// Candidate vertices are gathered at construction; filtration indices are
    /// resolved lazily as the iteration advances.
    class CofacetRange {
    public:
        CofacetRange(const Filtration& f, SimplexIndex i);
        /// Next cofacet index or kNoIndex when exhausted.
        SimplexIndex next();

    private:
        const Filtration& f_;
        SimplexIndex base_;
        std::vector<std::pair<double, std::array<VertexId, 4>>> candidates_;
        std::size_t pos_ = 0;
    };

    CofacetRange coboundary(SimplexIndex i) const { return CofacetRange(*this, i); }

    /// Earliest cofacet, or kNoIndex when the coboundary is empty.
    SimplexIndex earliest_cofacet(SimplexIndex i) const;

    /// Latest facet (the boundary simplex with the largest filtration index);
    /// defined for dim >= 1. For a triangle this is the diameter edge.
    SimplexIndex latest_facet(SimplexIndex i) const;

    /// (e, t) with t the earliest cofacet of e and e the latest facet of t is a
    /// trivial (apparent) persistence pair requiring zero reduction operations.
    SimplexIndex apparent_death(SimplexIndex birth) const;
    SimplexIndex apparent_birth(SimplexIndex death) const;

    PairedId encode_paired(SimplexIndex i) const;
    SimplexIndex decode_paired(int dim, PairedId p) const;

    /// Edge ranks in effect (identity = lexicographic order).
    const std::vector<std::int64_t>& edge_ranks() const { return edge_ranks_; }

private:
    const SparseMetricSpace* space_ = nullptr;
    int max_dim_ = 0;
    std::vector<Simplex> simplices_;
    std::array<std::vector<SimplexIndex>, 4> dim_items_;
    std::vector<SimplexIndex> edge_to_index_;  // edge ordinal -> filtration index
    std::vector<std::int64_t> edge_ranks_;

    void index_items();
    bool order_less(const Simplex& a, const Simplex& b) const;
};

/// Max pairwise distance over the simplex's vertices; throws InvalidInput when
/// a required pair is absent from the space.
double simplex_diameter(const SparseMetricSpace& space, std::span<const VertexId> verts);

}  // namespace tcr

#endif
