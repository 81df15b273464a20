#include "tcr/birth_cycles.hpp"

#include <algorithm>

#include "tcr/util.hpp"

namespace tcr {

namespace {

// sort and drop simplices with even multiplicity
void parity_clean(std::vector<SimplexIndex>& v) {
    std::sort(v.begin(), v.end());
    std::size_t w = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        if ((j - i) % 2 == 1) v[w++] = v[i];
        i = j;
    }
    v.resize(w);
}

}  // namespace

BirthCycle BirthCycleExtractor::compute(SimplexIndex birth) {
    const int d = f_.dim(birth);
    if (d != 1 && d != 2) throw InvalidInput("birth cycles exist for dims 1 and 2");

    const auto& pivot = (d == 1) ? h0_.pivot_to_col : R_.pivot_to_col;
    const auto& cols = (d == 1) ? h0_.columns : R_.columns;

    struct Frame {
        SimplexIndex col;
        Chain r;
        std::size_t out_begin;
        std::int64_t ops = 0;
    };

    std::vector<SimplexIndex> out;
    std::vector<Frame> stack;
    Chain scratch, tboundary;
    std::int64_t total_ops = 0;

    out.push_back(birth);
    stack.push_back({birth, f_.boundary(birth), 0, 0});

    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.r.empty()) {
            // frame complete; decide caching for non-root columns
            if (stack.size() > 1) {
                SimplexIndex col = top.col;
                std::int64_t ops = top.ops;
                n_r_[col] = ops;
                if (params_.enabled && ops > params_.n_r_star && n_u_[col] > params_.n_u_star &&
                    !cache_.count(col)) {
                    std::vector<SimplexIndex> copy(out.begin() + top.out_begin, out.end());
                    parity_clean(copy);
                    cache_.emplace(col, std::move(copy));
                    ++stats_.stored_columns;
                }
                std::int64_t done = top.ops;
                stack.pop_back();
                stack.back().ops += done;
            } else {
                break;
            }
            continue;
        }

        SimplexIndex row = top.r.back();
        auto it = pivot.find(row);
        if (it != pivot.end()) {
            SimplexIndex owner = it->second;
            xor_into(top.r, cols.at(owner), scratch);
            ++top.ops;
            ++total_ops;
            if (total_ops > budgets_.max_recursion_ops)
                throw BudgetError("recursion budget exceeded while computing V(" +
                                  std::to_string(birth) + ")");
            if (owner != top.col) {
                ++n_u_[owner];
                auto hit = cache_.find(owner);
                if (hit != cache_.end()) {
                    ++stats_.hits;
                    out.insert(out.end(), hit->second.begin(), hit->second.end());
                } else {
                    out.push_back(owner);
                    stack.push_back({owner, f_.boundary(owner), out.size() - 1, 0});
                }
            }
            continue;
        }
        if (d == 2) {
            SimplexIndex t = f_.apparent_death(row);
            if (t != kNoIndex) {
                f_.boundary(t, tboundary);
                xor_into(top.r, tboundary, scratch);
                ++top.ops;
                ++total_ops;
                if (total_ops > budgets_.max_recursion_ops)
                    throw BudgetError("recursion budget exceeded while computing V(" +
                                      std::to_string(birth) + ")");
                out.push_back(t);
                continue;
            }
        }
        throw InternalError("unreduced low while computing a birth cycle; simplex " +
                            std::to_string(birth) + " is not a birth");
    }

    stats_.total_ops += total_ops;
    parity_clean(out);
    BirthCycle bc;
    bc.birth = birth;
    bc.dim = d;
    bc.birth_value = f_.diameter(birth);
    bc.chain = std::move(out);
    return bc;
}

SimplexIndex compute_birth_cycle(const Filtration& f, const H0Result& h0,
                                 const BoundaryMatrices& R, SimplexIndex birth,
                                 BirthCycle& out) {
    BirthCycleExtractor ex(f, h0, R, VCacheParams{.enabled = false});
    out = ex.compute(birth);
    return birth;
}

std::int64_t compute_all_birth_cycles(const Filtration& f, const PersistenceComputation& pc,
                                      const std::vector<int>& dims, const CycleSink& sink,
                                      VCacheParams params, Budgets budgets,
                                      VCacheStats* stats_out) {
    std::int64_t emitted = 0;
    VCacheStats agg;
    std::vector<int> sorted_dims = dims;
    std::sort(sorted_dims.begin(), sorted_dims.end());
    for (int d : sorted_dims) {
        if (d < 1 || d > pc.cohom.max_hom_dim)
            throw InvalidInput("requested dim not covered by the persistence computation");
        BirthCycleExtractor ex(f, pc.h0, pc.R, params, budgets);
        for (SimplexIndex birth : pc.cohom.births[d]) {
            sink(ex.compute(birth));
            ++emitted;
        }
        agg.stored_columns += ex.stats().stored_columns;
        agg.hits += ex.stats().hits;
        agg.total_ops += ex.stats().total_ops;
    }
    if (stats_out) *stats_out = agg;
    return emitted;
}

}  // namespace tcr
