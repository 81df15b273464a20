#ifndef TCR_PIPELINE_HPP
#define TCR_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "tcr/birth_cycles.hpp"
#include "tcr/covers.hpp"
#include "tcr/io.hpp"
#include "tcr/stochastic.hpp"

namespace tcr {

struct RunConfig {
    std::string input;
    std::string format = "edges";  // edges | contacts | xyz | redshift
    double tau_u = 1.0;
    double epsilon = 0.5;
    std::vector<int> dims{1};
    int n_pert = 1;
    int n_perm = 1;
    std::uint64_t seed = 0;
    int threads = 1;
    std::int64_t batch_size = 1000;
    Budgets budgets{};
    VCacheParams cache{};
    std::string out_dir = ".";
    double hubble = 72.1;
    int redshift_class = -1;
    std::string chrom_map_path;
    std::int64_t n_samples = 10000;
    bool bindist_report = false;

    SignificanceParams significance() const { return {tau_u, epsilon, dims}; }
    EngineOptions engine() const { return {batch_size, threads, budgets}; }
    int max_hom_dim() const;
};

struct LoadedInput {
    SparseMetricSpace space;
    std::optional<Embedding> embedding;
};

LoadedInput load_input(const RunConfig& cfg);

struct StageCycle {
    TupleCycle cycle;
    double birth = 0;  // longest edge
};

struct CyclesResult {
    std::vector<CycleRecord> birth_records;
    std::vector<StageCycle> shortened;  // per-dim shortened basis, birth <= tau_u
    std::vector<StageCycle> smoothed;   // split + smoothed, degenerates excluded
    std::vector<std::string> degenerate_log;
    std::vector<std::string> nonsignificant_log;
    std::vector<double> smoothing_move_diameters;
    std::int64_t n_birth_cycles = 0;
};

CyclesResult run_cycles_pipeline(const RunConfig& cfg, const SparseMetricSpace& space,
                                 const Embedding* embedding);

/// Chain of d-simplices to explicit vertex tuples.
TupleCycle tuple_cycle_of(const Filtration& f, const Chain& chain, int dim);

struct LocalizeResult {
    std::vector<Cover> covers;             // n_sig > 0, before contraction
    std::vector<Cover> contracted;
    std::vector<std::string> contraction_log;
    std::vector<std::pair<int, int>> intersection_edges;
    std::vector<RefinementResult> refinements;  // one per contracted cover
};

LocalizeResult run_localize_pipeline(const RunConfig& cfg, const SparseMetricSpace& space,
                                     const Embedding& embedding);

int cmd_pd(const RunConfig& cfg);
int cmd_cycles(const RunConfig& cfg);
int cmd_localize(const RunConfig& cfg);
int cmd_stats(const RunConfig& cfg);

/// Peak resident set estimate in bytes (VmHWM when available).
std::int64_t peak_memory_bytes();

}  // namespace tcr

#endif
