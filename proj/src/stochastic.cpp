#include "tcr/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace tcr {

std::vector<double> perturbation_radii(const std::vector<std::array<double, 3>>& pts,
                                       double delta) {
    const std::size_t n = pts.size();
    std::vector<double> radii(n, delta);
    for (std::size_t i = 0; i < n; ++i) {
        double nn = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1],
                   dz = pts[i][2] - pts[j][2];
            nn = std::min(nn, std::sqrt(dx * dx + dy * dy + dz * dz));
        }
        if (std::isfinite(nn)) radii[i] = std::min(delta, nn / 3.0);
    }
    return radii;
}

std::vector<std::array<double, 3>> perturb_points(const std::vector<std::array<double, 3>>& pts,
                                                  const std::vector<double>& radii, int dim,
                                                  Philox& rng) {
    std::vector<std::array<double, 3>> out = pts;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double r = radii[i];
        if (r <= 0) continue;
        double x, y, z;
        do {
            x = rng.uniform(-r, r);
            y = rng.uniform(-r, r);
            z = (dim == 3) ? rng.uniform(-r, r) : 0.0;
        } while (x * x + y * y + z * z > r * r);
        out[i][0] += x;
        out[i][1] += y;
        out[i][2] += z;
    }
    return out;
}

namespace {

std::int64_t significant_count_of_points(const std::vector<std::array<double, 3>>& pts,
                                         const SignificanceParams& params,
                                         const EngineOptions& opt) {
    if (pts.size() < 3) return 0;
    SparseMetricSpace space = SparseMetricSpace::from_points(pts, params.tau());
    int max_hom = 1;
    for (int d : params.dims) max_hom = std::max(max_hom, d);
    Filtration f = Filtration::build(space, max_hom + 1, nullptr, opt.budgets.max_simplices);
    PersistenceComputation pc = compute_persistence(f, max_hom, opt);
    std::int64_t n = 0;
    for (int d : params.dims) {
        for (const auto& p : pc.cohom.pairs[d]) {
            double pers = p.essential() ? params.tau() - p.birth_value : p.persistence();
            if (p.birth_value <= params.tau_u && pers >= params.epsilon) ++n;
        }
    }
    return n;
}

}  // namespace

CalibrationResult calibrate_delta(const std::vector<std::array<double, 3>>& member_points,
                                  int embedding_dim, const SignificanceParams& params,
                                  int n_pert, Philox& rng, const EngineOptions& opt) {
    CalibrationResult res;
    res.baseline_count = significant_count_of_points(member_points, params, opt);
    for (int m = 1; m <= opt.budgets.m_max; ++m) {
        double delta = (params.epsilon / 3.0) / std::pow(2.0, m);
        std::vector<double> radii = perturbation_radii(member_points, delta);
        std::vector<std::vector<std::array<double, 3>>> trials;
        trials.reserve(n_pert);
        bool stable = true;
        for (int k = 0; k < n_pert; ++k) {
            trials.push_back(perturb_points(member_points, radii, embedding_dim, rng));
            if (significant_count_of_points(trials.back(), params, opt) != res.baseline_count)
                stable = false;  // keep drawing so the rng stream stays aligned per m
        }
        if (stable) {
            res.delta = delta;
            res.m = m;
            res.perturbations = std::move(trials);
            return res;
        }
    }
    res.failed = true;
    res.delta = 0.0;
    res.perturbations.push_back(member_points);  // processed unperturbed
    return res;
}

std::vector<std::int64_t> tie_permutation_ranks(const SparseMetricSpace& space, Philox& rng) {
    const std::int64_t n_e = space.n_edges();
    // lex-order ordinals grouped by exact diameter
    std::vector<std::int64_t> by_diam(n_e);
    for (std::int64_t i = 0; i < n_e; ++i) by_diam[i] = i;
    std::stable_sort(by_diam.begin(), by_diam.end(), [&space](std::int64_t a, std::int64_t b) {
        return space.edges()[a].d < space.edges()[b].d;
    });
    std::int64_t i = 0;
    while (i < n_e) {
        std::int64_t j = i;
        while (j < n_e && space.edges()[by_diam[j]].d == space.edges()[by_diam[i]].d) ++j;
        if (j - i > 1) rng.shuffle(by_diam.data() + i, static_cast<std::size_t>(j - i));
        i = j;
    }
    std::vector<std::int64_t> ranks(n_e);
    for (std::int64_t p = 0; p < n_e; ++p) ranks[by_diam[p]] = p;
    return ranks;
}

Filtration permute_filtration(const Filtration& f, Philox& rng) {
    std::vector<std::int64_t> ranks = tie_permutation_ranks(f.space(), rng);
    return Filtration::build(f.space(), f.max_dim(), &ranks);
}

std::vector<TupleCycle> select_minimal_representatives(
    const std::vector<std::vector<TupleCycle>>& trial_sets) {
    if (trial_sets.empty()) return {};
    std::size_t arity = 0;
    std::vector<std::vector<std::int64_t>> lengths(trial_sets.size());
    for (std::size_t i = 0; i < trial_sets.size(); ++i) {
        for (const auto& c : trial_sets[i])
            lengths[i].push_back(static_cast<std::int64_t>(c.simplices.size()));
        std::sort(lengths[i].rbegin(), lengths[i].rend());
        arity = std::max(arity, lengths[i].size());
    }
    for (auto& v : lengths) v.resize(arity, 0);

    std::size_t best = 0;
    for (std::size_t i = 1; i < trial_sets.size(); ++i)
        if (lengths[i] < lengths[best]) best = i;
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < trial_sets.size(); ++i)
        if (lengths[i] == lengths[best]) tied.push_back(i);

    if (tied.size() == 1) return trial_sets[tied[0]];

    // union of all simplices across the tied minimal sets
    int dim = 1;
    std::set<std::array<VertexId, 4>> uni;
    for (std::size_t i : tied) {
        for (const auto& c : trial_sets[i]) {
            dim = c.dim;
            for (const auto& s : c.simplices) uni.insert(s);
        }
    }
    TupleCycle merged;
    merged.dim = dim;
    merged.simplices.assign(uni.begin(), uni.end());
    if (merged.simplices.empty()) return {};
    return {merged};
}

namespace {

// representative boundaries for significant features of one trial
std::vector<TupleCycle> trial_representatives(const SparseMetricSpace& space,
                                              const std::vector<VertexId>& members,
                                              const SignificanceParams& params, bool feasible,
                                              const std::vector<std::int64_t>* ranks,
                                              const EngineOptions& opt) {
    int max_hom = 1;
    for (int d : params.dims) max_hom = std::max(max_hom, d);
    const double tau = space.tau();
    Filtration f = Filtration::build(space, max_hom + 1, ranks, opt.budgets.max_simplices);
    PersistenceComputation pc = compute_persistence(f, max_hom, opt);

    auto to_tuples = [&](const Chain& chain, int d) {
        TupleCycle c;
        c.dim = d;
        for (SimplexIndex s : chain) {
            auto vs = f.vertices(s);
            std::array<VertexId, 4> tup{};
            for (int q = 0; q <= d; ++q) tup[q] = members[vs[q]];
            c.simplices.push_back(tup);
        }
        return c;
    };

    std::vector<TupleCycle> reps;
    for (int d : params.dims) {
        if (feasible) {
            // everything dies below the max pairwise threshold; R columns wrap
            // the features
            for (const auto& p : pc.cohom.pairs[d]) {
                if (p.trivial || p.essential()) continue;
                if (!(p.birth_value <= params.tau_u && p.persistence() >= params.epsilon))
                    continue;
                reps.push_back(to_tuples(pc.R.column_of(f, p.death), d));
            }
        } else {
            BirthCycleExtractor ex(f, pc.h0, pc.R, {}, opt.budgets);
            for (const auto& p : pc.cohom.pairs[d]) {
                double pers = p.essential() ? tau - p.birth_value : p.persistence();
                if (!(p.birth_value <= params.tau_u && pers >= params.epsilon)) continue;
                reps.push_back(to_tuples(ex.compute(p.birth).chain, d));
            }
        }
    }
    return reps;
}

}  // namespace

RefinementResult run_refinement(const Cover& cover, const Embedding& embedding,
                                const SignificanceParams& params, int n_pert, int n_perm,
                                std::uint64_t seed, std::uint64_t cover_id,
                                const EngineOptions& opt) {
    RefinementResult res;
    std::vector<std::array<double, 3>> member_points;
    member_points.reserve(cover.members.size());
    for (VertexId v : cover.members) member_points.push_back(embedding.points[v]);

    int max_hom = 1;
    for (int d : params.dims) max_hom = std::max(max_hom, d);
    // feasibility gate: projected simplex count of the complete complex
    const double k = static_cast<double>(member_points.size());
    double projected = k + k * (k - 1) / 2 + k * (k - 1) * (k - 2) / 6;
    if (max_hom >= 2) projected += k * (k - 1) * (k - 2) * (k - 3) / 24;
    const bool feasible = projected <= static_cast<double>(opt.budgets.max_simplices);
    res.used_fallback = !feasible;

    Philox pert_rng(seed, (cover_id << 8) | 1, 0);
    CalibrationResult cal =
        calibrate_delta(member_points, embedding.dim, params, n_pert, pert_rng, opt);
    res.delta = cal.delta;
    res.calibration_failed = cal.failed;

    std::vector<std::vector<TupleCycle>> trial_sets;
    for (std::size_t p = 0; p < cal.perturbations.size(); ++p) {
        const auto& pts = cal.perturbations[p];
        double tau_max = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1],
                       dz = pts[i][2] - pts[j][2];
                tau_max = std::max(tau_max, std::sqrt(dx * dx + dy * dy + dz * dz));
            }
        SparseMetricSpace space =
            SparseMetricSpace::from_points(pts, feasible ? tau_max : params.tau());

        // unique tie permutations for this perturbation; identity is first
        std::vector<std::vector<std::int64_t>> rank_sets;
        std::set<std::vector<std::int64_t>> seen;
        std::vector<std::int64_t> identity(space.n_edges());
        for (std::int64_t i = 0; i < space.n_edges(); ++i) identity[i] = i;
        rank_sets.push_back(identity);
        seen.insert(identity);
        Philox perm_rng(seed, (cover_id << 8) | 2, p);
        for (int t = 1; t < n_perm; ++t) {
            std::vector<std::int64_t> ranks = tie_permutation_ranks(space, perm_rng);
            if (seen.insert(ranks).second) rank_sets.push_back(std::move(ranks));
        }
        res.unique_permutations += static_cast<int>(rank_sets.size());

        for (const auto& ranks : rank_sets) {
            ++res.trials_run;
            try {
                trial_sets.push_back(
                    trial_representatives(space, cover.members, params, feasible, &ranks, opt));
            } catch (const BudgetError&) {
                ++res.trials_failed;
            }
        }
    }
    res.minimal = select_minimal_representatives(trial_sets);
    return res;
}

}  // namespace tcr
