#ifndef TCR_STOCHASTIC_HPP
#define TCR_STOCHASTIC_HPP

#include <vector>

#include "tcr/birth_cycles.hpp"
#include "tcr/covers.hpp"
#include "tcr/rng.hpp"

namespace tcr {

/// Per-point perturbation radii: min(nearest-neighbor distance / 3, delta).
std::vector<double> perturbation_radii(const std::vector<std::array<double, 3>>& pts,
                                       double delta);

/// Each point displaced by a vector drawn uniformly from the closed ball of
/// its radius (rejection sampling from the bounding cube; dim 2 stays planar).
std::vector<std::array<double, 3>> perturb_points(const std::vector<std::array<double, 3>>& pts,
                                                  const std::vector<double>& radii, int dim,
                                                  Philox& rng);

struct CalibrationResult {
    double delta = 0.0;
    int m = 0;
    bool failed = false;
    std::int64_t baseline_count = 0;
    std::vector<std::vector<std::array<double, 3>>> perturbations;
};

/// Halve delta = (epsilon/3)/2^m until all n_pert perturbed copies of the
/// cover keep the unperturbed significant-feature count; m capped at
/// budgets.m_max (failure leaves the cover unperturbed).
CalibrationResult calibrate_delta(const std::vector<std::array<double, 3>>& member_points,
                                  int embedding_dim, const SignificanceParams& params,
                                  int n_pert, Philox& rng, const EngineOptions& opt = {});

/// Edge ranks with every maximal run of bit-equal diameters uniformly
/// shuffled; identity elsewhere.
std::vector<std::int64_t> tie_permutation_ranks(const SparseMetricSpace& space, Philox& rng);

/// Rebuild the filtration under a fresh tie permutation. The diagram multiset
/// is unchanged; representatives may differ.
Filtration permute_filtration(const Filtration& f, Philox& rng);

/// Sets sorted by their zero-padded decreasing length vectors; the unique
/// lexicographic minimum wins, ties return the union of their simplices as a
/// single cycle.
std::vector<TupleCycle> select_minimal_representatives(
    const std::vector<std::vector<TupleCycle>>& trial_sets);

struct RefinementResult {
    std::vector<TupleCycle> minimal;
    double delta = 0.0;
    bool calibration_failed = false;
    bool used_fallback = false;
    int trials_run = 0;
    int trials_failed = 0;
    int unique_permutations = 0;
};

/// Runs perturbation x unique-permutation trials on a contracted cover,
/// computing representative homology boundaries per trial (R columns at the
/// max pairwise threshold when feasible under the simplex budget, else
/// birth-cycles at tau), and selects the minimal representative set.
RefinementResult run_refinement(const Cover& cover, const Embedding& embedding,
                                const SignificanceParams& params, int n_pert, int n_perm,
                                std::uint64_t seed, std::uint64_t cover_id,
                                const EngineOptions& opt = {});

}  // namespace tcr

#endif
