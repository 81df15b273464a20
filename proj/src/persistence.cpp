#include "tcr/persistence.hpp"

#include <algorithm>

#include "tcr/util.hpp"

namespace tcr {

std::vector<std::array<double, 3>> PersistenceDiagram::value_multiset() const {
    std::vector<std::array<double, 3>> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs)
        out.push_back({static_cast<double>(p.dim), p.birth_value, p.death_value});
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t PersistenceDiagram::count(int dim) const {
    std::int64_t n = 0;
    for (const auto& p : pairs)
        if (p.dim == dim) ++n;
    return n;
}

H0Result compute_h0(const Filtration& f) {
    H0Result res;
    Chain chain, scratch;
    for (SimplexIndex e : f.items(1)) {
        f.boundary(e, chain);
        while (!chain.empty()) {
            SimplexIndex low = chain.back();
            auto it = res.pivot_to_col.find(low);
            if (it == res.pivot_to_col.end()) break;
            xor_into(chain, res.columns.at(it->second), scratch);
        }
        if (chain.empty()) continue;  // e births a loop, not a merge
        res.pivot_to_col.emplace(chain.back(), e);
        res.pairs.push_back({0, chain.back(), e, 0.0, f.diameter(e), false});
        res.columns.emplace(e, chain);
        res.merge_edges.push_back(e);
    }
    for (SimplexIndex v : f.items(0)) {
        if (!res.pivot_to_col.count(v))
            res.pairs.push_back(
                {0, v, kNoIndex, 0.0, std::numeric_limits<double>::infinity(), false});
    }
    return res;
}

namespace {

enum class Outcome { kPending, kZero, kSelf };

// Reduce `chain` by repeatedly cancelling its low against owner columns.
// stored(row) -> const Chain* or nullptr; virt(row, col, out) -> 0 none,
// 1 virtual owner chain in out, 2 the column itself (trivial pair).
template <class StoredFn, class VirtFn>
Outcome reduce_chain(Chain& chain, SimplexIndex col, StoredFn&& stored, VirtFn&& virt,
                     Chain& scratch, Chain& vchain, std::int64_t& xors) {
    while (!chain.empty()) {
        SimplexIndex row = chain.back();
        if (const Chain* c = stored(row)) {
            xor_into(chain, *c, scratch);
            ++xors;
            continue;
        }
        int v = virt(row, col, vchain);
        if (v == 1) {
            xor_into(chain, vchain, scratch);
            ++xors;
            continue;
        }
        if (v == 2) return Outcome::kSelf;
        return Outcome::kPending;
    }
    return Outcome::kZero;
}

// Serial-parallel batched reduction skeleton. finalize(col, outcome, chain)
// runs serially in column order; claims made there are visible to later
// columns of the same batch through stored().
template <class InitFn, class StoredFn, class VirtFn, class FinalFn>
void run_batched(const std::vector<SimplexIndex>& cols, std::int64_t batch_size, int threads,
                 InitFn&& init, StoredFn&& stored, VirtFn&& virt, FinalFn&& finalize,
                 ReduceStats& stats) {
    batch_size = std::max<std::int64_t>(1, batch_size);
    const std::int64_t n = static_cast<std::int64_t>(cols.size());
    std::vector<Chain> work;
    std::vector<Outcome> state;
    for (std::int64_t b0 = 0; b0 < n; b0 += batch_size) {
        const std::int64_t m = std::min(batch_size, n - b0);
        work.assign(m, Chain{});
        state.assign(m, Outcome::kPending);
        std::vector<std::int64_t> xors(static_cast<std::size_t>(m), 0);
        const int nthreads = std::max(1, threads);
        std::vector<Chain> scratch1(nthreads), scratch2(nthreads);
        parallel_for(m, threads, [&](std::int64_t i, int tid) {
            SimplexIndex col = cols[b0 + i];
            work[i] = init(col);
            state[i] = reduce_chain(work[i], col, stored, virt, scratch1[tid], scratch2[tid],
                                    xors[i]);
        });
        // phase 2: survivors continue against the growing R
        Chain scratch, vchain;
        for (std::int64_t i = 0; i < m; ++i) {
            stats.phase1_xors += xors[i];
            SimplexIndex col = cols[b0 + i];
            Outcome out = state[i];
            if (out == Outcome::kPending) {
                std::int64_t x2 = 0;
                out = reduce_chain(work[i], col, stored, virt, scratch, vchain, x2);
                stats.phase2_xors += x2;
            }
            finalize(col, out, work[i]);
        }
    }
}

}  // namespace

PersistenceDiagram CohomResult::full_diagram(const H0Result& h0, bool include_h0) const {
    PersistenceDiagram pd;
    if (include_h0) pd.pairs = h0.pairs;
    for (int d = 1; d <= max_hom_dim; ++d)
        pd.pairs.insert(pd.pairs.end(), pairs[d].begin(), pairs[d].end());
    return pd;
}

CohomResult reduce_coboundary(const Filtration& f, int max_hom_dim, const H0Result& h0,
                              const EngineOptions& opt) {
    if (max_hom_dim < 1 || max_hom_dim > 2)
        throw InvalidInput("homology dims supported: 1..2");
    if (f.max_dim() < max_hom_dim + 1)
        throw InvalidInput("filtration must be built to one dim above the requested homology");

    CohomResult res;
    res.max_hom_dim = max_hom_dim;

    // negated-key representation keeps Chain's low-at-back convention while
    // the coboundary orders rows by decreasing filtration index
    auto cocolumn = [&f](SimplexIndex col, Chain& out) {
        out.clear();
        auto range = f.coboundary(col);
        for (SimplexIndex t = range.next(); t != kNoIndex; t = range.next()) out.push_back(t);
        std::reverse(out.begin(), out.end());
        for (SimplexIndex& x : out) x = -x;
    };

    std::unordered_map<SimplexIndex, Chain> rperp_cols;

    for (int d = 1; d <= max_hom_dim; ++d) {
        rperp_cols.clear();
        auto& pivot = res.rperp_pivot[d];

        // clearing: skip d-simplices that are deaths of dimension d-1
        std::vector<SimplexIndex> columns;
        if (d == 1) {
            for (SimplexIndex e : f.items(1))
                if (!h0.is_merge_edge(e)) columns.push_back(e);
        } else {
            const auto& h1_pivot = res.rperp_pivot[1];
            for (SimplexIndex t : f.items(2))
                if (!h1_pivot.count(t) && f.apparent_birth(t) == kNoIndex)
                    columns.push_back(t);
        }
        std::reverse(columns.begin(), columns.end());  // decreasing filtration order

        auto stored = [&](SimplexIndex row) -> const Chain* {
            auto it = pivot.find(-row);
            if (it == pivot.end()) return nullptr;
            return &rperp_cols.at(it->second);
        };
        auto virt = [&](SimplexIndex row, SimplexIndex col, Chain& out) -> int {
            SimplexIndex t = -row;
            SimplexIndex e = f.apparent_birth(t);
            if (e == kNoIndex) return 0;
            if (e == col) return 2;
            Chain tmp;
            cocolumn(e, tmp);
            out.swap(tmp);
            return 1;
        };
        auto finalize = [&](SimplexIndex col, Outcome out, Chain& chain) {
            if (out == Outcome::kZero) {
                res.essential[d].push_back(col);
                res.births[d].push_back(col);
                res.pairs[d].push_back({d, col, kNoIndex, f.diameter(col),
                                        std::numeric_limits<double>::infinity(), false});
                return;
            }
            if (out == Outcome::kSelf) {
                SimplexIndex t = f.earliest_cofacet(col);
                res.births[d].push_back(col);
                res.pairs[d].push_back({d, col, t, f.diameter(col), f.diameter(t), true});
                return;
            }
            SimplexIndex t = -chain.back();
            pivot.emplace(t, col);
            res.stats.stored_entries += static_cast<std::int64_t>(chain.size());
            if (res.stats.stored_entries > opt.budgets.max_column_entries)
                throw BudgetError("coboundary column storage exceeds " +
                                  std::to_string(opt.budgets.max_column_entries) + " entries");
            rperp_cols.emplace(col, std::move(chain));
            res.births[d].push_back(col);
            res.p_perp[d].push_back({col, t});
            res.pairs[d].push_back({d, col, t, f.diameter(col), f.diameter(t), false});
        };

        auto init = [&](SimplexIndex col) {
            Chain c;
            cocolumn(col, c);
            return c;
        };
        run_batched(columns, opt.batch_size, opt.threads, init, stored, virt, finalize,
                    res.stats);

        // restore filtration order for downstream consumers
        std::reverse(res.births[d].begin(), res.births[d].end());
        std::reverse(res.essential[d].begin(), res.essential[d].end());
        std::reverse(res.p_perp[d].begin(), res.p_perp[d].end());
        std::reverse(res.pairs[d].begin(), res.pairs[d].end());
    }
    return res;
}

Chain BoundaryMatrices::column_of(const Filtration& f, SimplexIndex death) const {
    auto it = columns.find(death);
    if (it != columns.end()) return it->second;
    if (f.apparent_birth(death) == kNoIndex)
        throw InvalidInput("simplex is not a stored or trivial death column");
    return f.boundary(death);
}

void batch_reduce(const Filtration& f, const std::vector<SimplexIndex>& death_columns,
                  BoundaryMatrices& R, std::int64_t batch_size, int threads,
                  const Budgets& budgets, ReduceStats* stats) {
    ReduceStats local;
    ReduceStats& st = stats ? *stats : local;

    auto stored = [&R](SimplexIndex row) -> const Chain* {
        auto it = R.pivot_to_col.find(row);
        if (it == R.pivot_to_col.end()) return nullptr;
        return &R.columns.at(it->second);
    };
    auto virt = [&f](SimplexIndex row, SimplexIndex, Chain& out) -> int {
        SimplexIndex t = f.apparent_death(row);
        if (t == kNoIndex) return 0;
        f.boundary(t, out);
        return 1;
    };
    auto finalize = [&](SimplexIndex col, Outcome out, Chain& chain) {
        if (out != Outcome::kPending)
            throw InternalError("death column reduced to zero");
        R.pivot_to_col.emplace(chain.back(), col);
        st.stored_entries += static_cast<std::int64_t>(chain.size());
        if (st.stored_entries > budgets.max_column_entries)
            throw BudgetError("boundary column storage exceeds " +
                              std::to_string(budgets.max_column_entries) + " entries");
        R.columns.emplace(col, std::move(chain));
    };
    auto init = [&f](SimplexIndex col) { return f.boundary(col); };

    run_batched(death_columns, batch_size, threads, init, stored, virt, finalize, st);
}

BoundaryMatrices reduce_boundary_targeted(const Filtration& f, const CohomResult& cohom,
                                          const EngineOptions& opt) {
    BoundaryMatrices R;
    for (int d = 1; d <= cohom.max_hom_dim; ++d) {
        std::vector<SimplexIndex> deaths;
        deaths.reserve(cohom.p_perp[d].size());
        for (const auto& [birth, death] : cohom.p_perp[d]) deaths.push_back(death);
        std::sort(deaths.begin(), deaths.end());
        batch_reduce(f, deaths, R, opt.batch_size, opt.threads, opt.budgets, &R.stats);
        // duality: the pivot of each reduced column is the dual birth
        for (const auto& [birth, death] : cohom.p_perp[d]) {
            if (R.columns.at(death).back() != birth)
                throw InternalError("pivot bijection between R-perp and R violated");
        }
    }
    return R;
}

PersistenceComputation compute_persistence(const Filtration& f, int max_hom_dim,
                                           const EngineOptions& opt) {
    PersistenceComputation pc;
    pc.h0 = compute_h0(f);
    pc.cohom = reduce_coboundary(f, max_hom_dim, pc.h0, opt);
    pc.R = reduce_boundary_targeted(f, pc.cohom, opt);
    return pc;
}

}  // namespace tcr
