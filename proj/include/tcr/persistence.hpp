#ifndef TCR_PERSISTENCE_HPP
#define TCR_PERSISTENCE_HPP

#include <array>
#include <limits>
#include <unordered_map>
#include <vector>

#include "tcr/filtration.hpp"
#include "tcr/types.hpp"

namespace tcr {

struct PersistencePairRec {
    int dim = 0;
    SimplexIndex birth = kNoIndex;
    SimplexIndex death = kNoIndex;  // kNoIndex => essential
    double birth_value = 0.0;
    double death_value = std::numeric_limits<double>::infinity();
    bool trivial = false;  // apparent pair, never stored in p_perp

    bool essential() const { return death == kNoIndex; }
    double persistence() const { return death_value - birth_value; }
};

/// Multiset of (dim, birth, death) values.
struct PersistenceDiagram {
    std::vector<PersistencePairRec> pairs;

    /// Sorted (dim, birth, death) triples for multiset comparison.
    std::vector<std::array<double, 3>> value_multiset() const;
    std::int64_t count(int dim) const;
};

struct ReduceStats {
    std::int64_t phase1_xors = 0;
    std::int64_t phase2_xors = 0;
    std::int64_t stored_entries = 0;
};

/// Dimension-0 persistence by full reduction of edge columns. Reduced columns
/// (two vertices each) are kept: the birth-cycle recursion consults them.
struct H0Result {
    std::vector<PersistencePairRec> pairs;  // finite pairs + essentials
    std::vector<SimplexIndex> merge_edges;  // filtration order
    std::unordered_map<SimplexIndex, Chain> columns;
    std::unordered_map<SimplexIndex, SimplexIndex> pivot_to_col;  // vertex -> edge

    bool is_merge_edge(SimplexIndex e) const { return columns.count(e) > 0; }
};

H0Result compute_h0(const Filtration& f);

struct EngineOptions {
    std::int64_t batch_size = 1000;
    int threads = 1;
    Budgets budgets{};
};

/// Output of the coboundary pass: all persistence pairs (trivial ones carry
/// values only), the nontrivial pair lists p_perp per dimension, and the
/// stored R_perp pivots for duality checks.
struct CohomResult {
    int max_hom_dim = 1;
    std::array<std::vector<PersistencePairRec>, 3> pairs;  // index = dim (1, 2 used)
    std::array<std::vector<std::pair<SimplexIndex, SimplexIndex>>, 3> p_perp;
    std::array<std::vector<SimplexIndex>, 3> essential;
    std::array<std::vector<SimplexIndex>, 3> births;  // filtration order
    std::array<std::unordered_map<SimplexIndex, SimplexIndex>, 3> rperp_pivot;  // row -> col
    ReduceStats stats;

    /// Full diagram: dim 0 from h0 plus every computed dimension.
    PersistenceDiagram full_diagram(const H0Result& h0, bool include_h0 = true) const;
};

/// Reduces the coboundary matrix for homology dims 1..max_hom_dim with
/// trivial-pair elision and clearing; serial-parallel batching per
/// EngineOptions. Requires f.max_dim() >= max_hom_dim + 1.
CohomResult reduce_coboundary(const Filtration& f, int max_hom_dim, const H0Result& h0,
                              const EngineOptions& opt = {});

/// Detect the trivial (apparent) pair partner of a potential birth simplex:
/// the earliest cofacet t of e when e is the latest facet of t.
inline SimplexIndex detect_trivial_pair_h1(const Filtration& f, SimplexIndex edge) {
    return f.apparent_death(edge);
}
inline SimplexIndex detect_trivial_pair_h2(const Filtration& f, SimplexIndex triangle) {
    return f.apparent_death(triangle);
}

/// Reduced boundary columns for exactly the death simplices named in p_perp;
/// trivial pairs are resolved inline and never stored.
struct BoundaryMatrices {
    std::unordered_map<SimplexIndex, Chain> columns;              // death -> chain
    std::unordered_map<SimplexIndex, SimplexIndex> pivot_to_col;  // row -> death
    ReduceStats stats;

    /// The reduced column of a death simplex: stored, or its raw boundary when
    /// the pair is trivial.
    Chain column_of(const Filtration& f, SimplexIndex death) const;
};

BoundaryMatrices reduce_boundary_targeted(const Filtration& f, const CohomResult& cohom,
                                          const EngineOptions& opt = {});

/// Serial-parallel reduction of the given boundary columns against (and into)
/// R. Phase 1 reduces each column independently against the frozen R; phase 2
/// merges survivors serially. Bit-identical to fully serial reduction.
void batch_reduce(const Filtration& f, const std::vector<SimplexIndex>& death_columns,
                  BoundaryMatrices& R, std::int64_t batch_size, int threads,
                  const Budgets& budgets, ReduceStats* stats = nullptr);

/// Full pipeline state: H0, coboundary pairs, targeted boundary columns.
struct PersistenceComputation {
    H0Result h0;
    CohomResult cohom;
    BoundaryMatrices R;

    PersistenceDiagram full_diagram(bool include_h0 = true) const {
        return cohom.full_diagram(h0, include_h0);
    }
};

PersistenceComputation compute_persistence(const Filtration& f, int max_hom_dim,
                                           const EngineOptions& opt = {});

}  // namespace tcr

#endif
