#ifndef TCR_BIRTH_CYCLES_HPP
#define TCR_BIRTH_CYCLES_HPP

#include <functional>
#include <unordered_map>
#include <vector>

#include "tcr/persistence.hpp"

namespace tcr {

struct BirthCycle {
    SimplexIndex birth = kNoIndex;
    int dim = 0;
    double birth_value = 0.0;
    Chain chain;  // d-simplices by filtration index; GF(2) boundary is zero
};

struct VCacheParams {
    std::int64_t n_r_star = 64;
    int n_u_star = 2;
    bool enabled = true;
};

struct VCacheStats {
    std::int64_t stored_columns = 0;
    std::int64_t hits = 0;
    std::int64_t total_ops = 0;
};

/// Reconstructs columns of V on the fly from R without storing V. Columns that
/// are both expensive (n_r > n_r*) and frequently requested (n_u > n_u*) are
/// cached. Single-threaded per homology dimension.
class BirthCycleExtractor {
public:
    BirthCycleExtractor(const Filtration& f, const H0Result& h0, const BoundaryMatrices& R,
                        VCacheParams params = {}, Budgets budgets = {})
        : f_(f), h0_(h0), R_(R), params_(params), budgets_(budgets) {}

    /// V(birth) for a birth simplex of dim 1 or 2.
    BirthCycle compute(SimplexIndex birth);

    /// Drop cached columns (call between dimensions or runs).
    void clear_cache() { cache_.clear(), n_r_.clear(), n_u_.clear(); }

    const VCacheStats& stats() const { return stats_; }

private:
    const Filtration& f_;
    const H0Result& h0_;
    const BoundaryMatrices& R_;
    VCacheParams params_;
    Budgets budgets_;
    std::unordered_map<SimplexIndex, std::vector<SimplexIndex>> cache_;
    std::unordered_map<SimplexIndex, std::int64_t> n_r_;
    std::unordered_map<SimplexIndex, int> n_u_;
    VCacheStats stats_;
};

using CycleSink = std::function<void(const BirthCycle&)>;

SimplexIndex compute_birth_cycle(const Filtration& f, const H0Result& h0,
                                 const BoundaryMatrices& R, SimplexIndex birth,
                                 BirthCycle& out);

/// Streams V(σ) for every birth simplex of each requested dimension, in birth
/// filtration order. Returns the number of cycles emitted.
std::int64_t compute_all_birth_cycles(const Filtration& f, const PersistenceComputation& pc,
                                      const std::vector<int>& dims, const CycleSink& sink,
                                      VCacheParams params = {}, Budgets budgets = {},
                                      VCacheStats* stats_out = nullptr);

}  // namespace tcr

#endif
