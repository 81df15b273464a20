#include "tcr/covers.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tcr/filtration.hpp"

namespace tcr {

std::vector<VertexId> TupleCycle::vertex_set() const {
    std::vector<VertexId> vs;
    for (const auto& s : simplices)
        for (int k = 0; k <= dim; ++k) vs.push_back(s[k]);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

double TupleCycle::longest_edge(const SparseMetricSpace& space) const {
    double longest = 0.0;
    for (const auto& s : simplices)
        for (int i = 0; i <= dim; ++i)
            for (int j = i + 1; j <= dim; ++j)
                longest = std::max(longest, space.distance(s[i], s[j]));
    return longest;
}

double max_persistence_estimate(const TupleCycle& cycle, const SparseMetricSpace& space,
                                const Embedding* embedding) {
    std::vector<VertexId> vs = cycle.vertex_set();
    double death = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            double d = space.distance(vs[i], vs[j]);
            if (!std::isfinite(d) && embedding) d = embedding->dist(vs[i], vs[j]);
            death = std::max(death, d);
        }
    }
    return death - cycle.longest_edge(space);
}

Cover cover_of(const std::vector<VertexId>& cycle_vertices, const Embedding& embedding) {
    if (cycle_vertices.empty()) throw InvalidInput("cover of an empty cycle");
    Cover c;
    c.box.lo = c.box.hi = embedding.points[cycle_vertices[0]];
    for (VertexId v : cycle_vertices) {
        const auto& p = embedding.points[v];
        for (int d = 0; d < 3; ++d) {
            c.box.lo[d] = std::min(c.box.lo[d], p[d]);
            c.box.hi[d] = std::max(c.box.hi[d], p[d]);
        }
    }
    for (VertexId v = 0; v < embedding.points.size(); ++v)
        if (c.box.contains(embedding.points[v])) c.members.push_back(v);
    return c;
}

std::int64_t count_significant(const std::vector<VertexId>& members, const Embedding& embedding,
                               const SignificanceParams& params, const EngineOptions& opt) {
    if (members.size() < 3) return 0;
    std::vector<std::array<double, 3>> pts;
    pts.reserve(members.size());
    for (VertexId v : members) pts.push_back(embedding.points[v]);
    SparseMetricSpace space = SparseMetricSpace::from_points(pts, params.tau());
    int max_hom = 1;
    for (int d : params.dims) max_hom = std::max(max_hom, d);
    Filtration f =
        Filtration::build(space, max_hom + 1, nullptr, opt.budgets.max_simplices);
    PersistenceComputation pc = compute_persistence(f, max_hom, opt);
    std::int64_t n = 0;
    const double tau = params.tau();
    for (int d : params.dims) {
        for (const auto& p : pc.cohom.pairs[d]) {
            double pers = p.essential() ? tau - p.birth_value : p.persistence();
            if (p.birth_value <= params.tau_u && pers >= params.epsilon) ++n;
        }
    }
    return n;
}

namespace {

std::vector<VertexId> intersect_members(const std::vector<VertexId>& a,
                                        const std::vector<VertexId>& b) {
    std::vector<VertexId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const std::vector<VertexId>& small, const std::vector<VertexId>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

CoverBox bounding_box(const std::vector<VertexId>& members, const Embedding& embedding) {
    CoverBox box;
    box.lo = box.hi = embedding.points[members.front()];
    for (VertexId v : members) {
        const auto& p = embedding.points[v];
        for (int d = 0; d < 3; ++d) {
            box.lo[d] = std::min(box.lo[d], p[d]);
            box.hi[d] = std::max(box.hi[d], p[d]);
        }
    }
    return box;
}

bool pair_order_less(const Cover& a, const Cover& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    if (a.box.lo != b.box.lo) return a.box.lo < b.box.lo;
    if (a.box.hi != b.box.hi) return a.box.hi < b.box.hi;
    return a.members < b.members;
}

}  // namespace

std::vector<Cover> contract_covers(std::vector<Cover> covers, const Embedding& embedding,
                                   const SignificanceParams& params, const EngineOptions& opt,
                                   std::vector<std::string>* log) {
    auto note = [log](const std::string& s) {
        if (log) log->push_back(s);
    };
    for (const Cover& c : covers)
        if (c.n_sig <= 0) throw InvalidInput("contraction requires covers with n_sig > 0");

    const bool h2 = std::find(params.dims.begin(), params.dims.end(), 2) != params.dims.end();
    std::sort(covers.begin(), covers.end(), pair_order_less);

    // subset check over the whole collection
    std::vector<char> dead(covers.size(), 0);
    for (std::size_t i = 0; i < covers.size(); ++i) {
        for (std::size_t j = 0; j < covers.size(); ++j) {
            if (i == j || dead[i] || dead[j]) continue;
            const bool strict = covers[j].members.size() < covers[i].members.size() ||
                                (covers[j].members.size() == covers[i].members.size() && j < i);
            if (strict && covers[i].n_sig == covers[j].n_sig &&
                is_subset(covers[j].members, covers[i].members)) {
                dead[i] = 1;
                note("subset: dropped cover of " + std::to_string(covers[i].members.size()) +
                     " members (kept " + std::to_string(covers[j].members.size()) + ")");
            }
        }
    }
    std::vector<Cover> live;
    for (std::size_t i = 0; i < covers.size(); ++i)
        if (!dead[i]) live.push_back(std::move(covers[i]));

    // connected components of the proper-overlap graph
    const std::size_t n = live.size();
    std::vector<int> comp(n, -1);
    auto proper_overlap = [&](std::size_t a, std::size_t b) {
        std::vector<VertexId> inter = intersect_members(live[a].members, live[b].members);
        return !inter.empty() && inter != live[a].members && inter != live[b].members;
    };
    int ncomp = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = ncomp;
        std::vector<std::size_t> queue{s};
        for (std::size_t q = 0; q < queue.size(); ++q)
            for (std::size_t t = 0; t < n; ++t)
                if (comp[t] < 0 && proper_overlap(queue[q], t)) {
                    comp[t] = ncomp;
                    queue.push_back(t);
                }
        ++ncomp;
    }

    std::vector<Cover> out;
    for (int c = 0; c < ncomp; ++c) {
        std::vector<Cover> nodes;
        for (std::size_t i = 0; i < n; ++i)
            if (comp[i] == c) nodes.push_back(live[i]);
        bool update = true;
        while (update) {
            update = false;
            std::sort(nodes.begin(), nodes.end(), pair_order_less);
            for (std::size_t a = 0; a < nodes.size() && !update; ++a) {
                for (std::size_t b = a + 1; b < nodes.size() && !update; ++b) {
                    std::vector<VertexId> ck =
                        intersect_members(nodes[a].members, nodes[b].members);
                    if (ck.empty() || ck == nodes[a].members || ck == nodes[b].members)
                        continue;
                    if (h2 && ck.size() < 4) continue;
                    std::int64_t nk = count_significant(ck, embedding, params, opt);
                    bool removed_a = (nk == nodes[a].n_sig);
                    bool removed_b = (nk == nodes[b].n_sig);
                    if (!removed_a && !removed_b) continue;
                    Cover replacement{bounding_box(ck, embedding), ck, nk};
                    note("intersection: " + std::to_string(nodes[a].members.size()) + " & " +
                         std::to_string(nodes[b].members.size()) + " -> " +
                         std::to_string(ck.size()) + " members, n_sig " + std::to_string(nk));
                    std::vector<Cover> next;
                    for (std::size_t k = 0; k < nodes.size(); ++k) {
                        if ((k == a && removed_a) || (k == b && removed_b)) continue;
                        // subset check against the incoming intersection cover
                        if (nodes[k].n_sig == nk && is_subset(ck, nodes[k].members) &&
                            ck != nodes[k].members) {
                            note("subset: dropped cover of " +
                                 std::to_string(nodes[k].members.size()) +
                                 " members against the intersection");
                            continue;
                        }
                        next.push_back(std::move(nodes[k]));
                    }
                    next.push_back(std::move(replacement));
                    nodes = std::move(next);
                    update = true;
                }
            }
        }
        for (auto& nd : nodes) out.push_back(std::move(nd));
    }
    std::sort(out.begin(), out.end(), pair_order_less);
    return out;
}

std::vector<std::pair<int, int>> cover_intersection_graph(const std::vector<Cover>& covers) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < covers.size(); ++i)
        for (std::size_t j = i + 1; j < covers.size(); ++j)
            if (!intersect_members(covers[i].members, covers[j].members).empty())
                edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    return edges;
}

}  // namespace tcr
