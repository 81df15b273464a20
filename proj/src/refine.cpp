#include "tcr/refine.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "tcr/util.hpp"

namespace tcr {

namespace {

std::int64_t len_of(const Chain& c) { return static_cast<std::int64_t>(c.size()); }

struct Order {
    // position p holds cycle id order[p]; sorted by (length desc, id asc)
    std::vector<int> order, pos;

    void rebuild(const std::vector<Chain>& cyc) {
        const int n = static_cast<int>(cyc.size());
        order.resize(n);
        pos.resize(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&cyc](int a, int b) {
            if (cyc[a].size() != cyc[b].size()) return cyc[a].size() > cyc[b].size();
            return a < b;
        });
        for (int p = 0; p < n; ++p) pos[order[p]] = p;
    }
};

struct FEntry {
    int partner = -1;
    std::int64_t r = 0;
};

}  // namespace

std::vector<Chain> shorten_cycles(std::vector<Chain> cycles, int dim,
                                  const ShortenParams& params, ShortenStats* stats) {
    const int n = static_cast<int>(cycles.size());
    ShortenStats local;
    ShortenStats& st = stats ? *stats : local;
    if (n <= 1) return cycles;
    const bool use_index = (dim == 1);

    Order ord;
    ord.rebuild(cycles);

    std::unordered_map<SimplexIndex, std::vector<int>> g;
    if (use_index) {
        for (int i = 0; i < n; ++i)
            for (SimplexIndex s : cycles[i]) g[s].push_back(i);
    }

    std::vector<FEntry> f(n);
    const int nthreads = std::max(1, params.threads);
    std::vector<std::vector<std::int64_t>> cnt_scratch(
        nthreads, std::vector<std::int64_t>(n, 0));
    std::vector<std::vector<int>> touched_scratch(nthreads);

    // best partner below position pos[i] via the inverted index
    auto strategy1 = [&](int i, int tid) {
        FEntry best{-1, 0};
        auto& cnt = cnt_scratch[tid];
        auto& touched = touched_scratch[tid];
        touched.clear();
        for (SimplexIndex s : cycles[i]) {
            auto it = g.find(s);
            if (it == g.end()) continue;
            for (int j : it->second) {
                if (ord.pos[j] <= ord.pos[i]) continue;
                if (cnt[j] == 0) touched.push_back(j);
                ++cnt[j];
            }
        }
        for (int j : touched) {
            std::int64_t r = 2 * cnt[j] - len_of(cycles[j]);
            cnt[j] = 0;
            if (r > best.r || (r == best.r && r > 0 && ord.pos[j] < ord.pos[best.partner]))
                best = {j, r};
        }
        f[i] = best;
    };

    // scan candidate list (position-ascending, length-descending) with the
    // early exits; improves on the existing baseline only
    auto strategy2 = [&](int i, const std::vector<int>& candidates) {
        for (int j : candidates) {
            if (ord.pos[j] <= ord.pos[i]) continue;
            if (len_of(cycles[j]) <= f[i].r) break;  // shorter candidates cannot beat r
            std::int64_t cap = len_of(cycles[i]) - f[i].r;
            std::int64_t d = sym_diff_size_capped(cycles[i], cycles[j], cap);
            std::int64_t r = len_of(cycles[i]) - d;
            if (r > f[i].r) f[i] = {j, r};
        }
    };

    auto full_scan = [&](int i, int tid) {
        if (use_index) {
            strategy1(i, tid);
        } else {
            f[i] = {-1, 0};
            std::vector<int> below(ord.order.begin() + ord.pos[i] + 1, ord.order.end());
            strategy2(i, below);
        }
    };

    parallel_for(n, params.threads, [&](std::int64_t p, int tid) {
        full_scan(ord.order[p], tid);
    });

    std::vector<char> updated(n, 0);
    Chain scratch;
    while (true) {
        std::int64_t dstar = 0;
        for (int i = 0; i < n; ++i) dstar = std::max(dstar, f[i].r);
        if (dstar == 0) break;
        ++st.iterations;

        std::vector<int> subs;
        for (int p = 0; p < n; ++p) {
            int i = ord.order[p];
            if (f[i].r == dstar) subs.push_back(i);
        }
        // snapshot partners so simultaneous substitutions use round-start chains
        std::vector<Chain> partner_copy(subs.size());
        for (std::size_t k = 0; k < subs.size(); ++k)
            partner_copy[k] = cycles[f[subs[k]].partner];

        std::fill(updated.begin(), updated.end(), 0);
        for (std::size_t k = 0; k < subs.size(); ++k) {
            int i = subs[k];
            const Chain& part = partner_copy[k];
            if (use_index) {
                // membership deltas: shared simplices leave X_i, the rest join
                std::size_t a = 0, b = 0;
                while (a < cycles[i].size() || b < part.size()) {
                    if (b == part.size() ||
                        (a < cycles[i].size() && cycles[i][a] < part[b])) {
                        ++a;
                    } else if (a == cycles[i].size() || part[b] < cycles[i][a]) {
                        g[part[b]].push_back(i);
                        ++b;
                    } else {
                        auto& lst = g[cycles[i][a]];
                        lst.erase(std::find(lst.begin(), lst.end(), i));
                        ++a;
                        ++b;
                    }
                }
            }
            xor_into(cycles[i], part, scratch);
            updated[i] = 1;
            ++st.substitutions;
        }

        ord.rebuild(cycles);
        std::vector<int> ulist;
        for (int p = 0; p < n; ++p)
            if (updated[ord.order[p]]) ulist.push_back(ord.order[p]);

        parallel_for(n, params.threads, [&](std::int64_t p, int tid) {
            int i = ord.order[p];
            if (updated[i]) {
                f[i] = {-1, 0};
                full_scan(i, tid);
            } else if (f[i].r == 0) {
                strategy2(i, ulist);
            } else if (updated[f[i].partner]) {
                f[i] = {-1, 0};
                full_scan(i, tid);
            } else {
                strategy2(i, ulist);
            }
        });
    }

    std::vector<Chain> out;
    out.reserve(n);
    for (int p = 0; p < n; ++p) out.push_back(std::move(cycles[ord.order[p]]));
    return out;
}

std::vector<Chain> split_disconnected(const Chain& cycle, int dim, const Filtration& f) {
    std::vector<Chain> out;
    if (cycle.empty()) return out;
    if (dim == 1) {
        // fundamental cycles of a breadth-first spanning forest
        std::map<VertexId, std::vector<std::pair<VertexId, SimplexIndex>>> adj;
        for (SimplexIndex e : cycle) {
            auto vs = f.vertices(e);
            adj[vs[0]].push_back({vs[1], e});
            adj[vs[1]].push_back({vs[0], e});
        }
        for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());

        std::map<VertexId, VertexId> parent;
        std::map<VertexId, SimplexIndex> parent_edge;
        std::map<VertexId, int> depth;
        std::set<SimplexIndex> tree_edges;
        for (const auto& [root, _] : adj) {
            if (parent.count(root)) continue;
            parent[root] = root;
            depth[root] = 0;
            std::vector<VertexId> queue{root};
            for (std::size_t q = 0; q < queue.size(); ++q) {
                VertexId u = queue[q];
                for (const auto& [w, e] : adj[u]) {
                    if (parent.count(w)) continue;
                    parent[w] = u;
                    parent_edge[w] = e;
                    depth[w] = depth[u] + 1;
                    tree_edges.insert(e);
                    queue.push_back(w);
                }
            }
        }
        for (SimplexIndex chord : cycle) {
            if (tree_edges.count(chord)) continue;
            auto vs = f.vertices(chord);
            VertexId a = vs[0], b = vs[1];
            Chain basis{chord};
            while (a != b) {
                if (depth[a] < depth[b]) std::swap(a, b);
                basis.push_back(parent_edge[a]);
                a = parent[a];
            }
            std::sort(basis.begin(), basis.end());
            out.push_back(std::move(basis));
        }
        return out;
    }
    if (dim == 2) {
        // components of the triangle-adjacency graph (two shared vertices)
        const std::size_t m = cycle.size();
        std::vector<int> comp(m, -1);
        std::map<std::pair<VertexId, VertexId>, std::vector<std::size_t>> edge_to_tri;
        for (std::size_t i = 0; i < m; ++i) {
            auto vs = f.vertices(cycle[i]);
            edge_to_tri[{vs[0], vs[1]}].push_back(i);
            edge_to_tri[{vs[0], vs[2]}].push_back(i);
            edge_to_tri[{vs[1], vs[2]}].push_back(i);
        }
        int ncomp = 0;
        for (std::size_t s = 0; s < m; ++s) {
            if (comp[s] >= 0) continue;
            comp[s] = ncomp;
            std::vector<std::size_t> queue{s};
            for (std::size_t q = 0; q < queue.size(); ++q) {
                auto vs = f.vertices(cycle[queue[q]]);
                std::array<std::pair<VertexId, VertexId>, 3> es{
                    std::pair{vs[0], vs[1]}, {vs[0], vs[2]}, {vs[1], vs[2]}};
                for (const auto& e : es)
                    for (std::size_t t : edge_to_tri[e])
                        if (comp[t] < 0) {
                            comp[t] = ncomp;
                            queue.push_back(t);
                        }
            }
            ++ncomp;
        }
        out.assign(ncomp, Chain{});
        for (std::size_t i = 0; i < m; ++i) out[comp[i]].push_back(cycle[i]);
        return out;
    }
    throw InvalidInput("split_disconnected supports dims 1 and 2");
}

std::vector<VertexId> cycle_to_walk(const Chain& cycle, const Filtration& f) {
    std::map<VertexId, std::vector<VertexId>> adj;
    for (SimplexIndex e : cycle) {
        auto vs = f.vertices(e);
        adj[vs[0]].push_back(vs[1]);
        adj[vs[1]].push_back(vs[0]);
    }
    for (auto& [v, nb] : adj) {
        if (nb.size() != 2) throw InvalidInput("cycle is not simple; split it first");
        std::sort(nb.begin(), nb.end());
    }
    VertexId start = adj.begin()->first;
    std::vector<VertexId> walk{start};
    VertexId prev = start, cur = adj[start][0];
    while (cur != start) {
        walk.push_back(cur);
        const auto& nb = adj[cur];
        VertexId nxt = (nb[0] == prev) ? nb[1] : nb[0];
        prev = cur;
        cur = nxt;
    }
    if (walk.size() != adj.size()) throw InvalidInput("cycle is not connected; split it first");
    return walk;
}

SmoothedWalk smooth_h1(std::vector<VertexId> walk, const SparseMetricSpace& space, double tau_u,
                       std::vector<SmoothMove>* moves) {
    bool changed = true;
    while (changed && walk.size() > 2) {
        changed = false;
        std::size_t i = 0;
        while (i < walk.size() && walk.size() > 2) {
            std::size_t sz = walk.size();
            VertexId prev = walk[(i + sz - 1) % sz];
            VertexId next = walk[(i + 1) % sz];
            double chord = space.distance(prev, next);
            if (chord <= tau_u) {
                if (moves) {
                    double diam = std::max(
                        {chord, space.distance(prev, walk[i]), space.distance(walk[i], next)});
                    moves->push_back({diam});
                }
                walk.erase(walk.begin() + i);
                changed = true;
            } else {
                ++i;
            }
        }
    }
    bool degenerate = walk.size() <= 2;
    return {std::move(walk), degenerate};
}

std::vector<Triangle> chain_to_triangles(const Chain& cycle, const Filtration& f) {
    std::vector<Triangle> tris;
    tris.reserve(cycle.size());
    for (SimplexIndex t : cycle) {
        auto vs = f.vertices(t);
        tris.push_back({vs[0], vs[1], vs[2]});
    }
    return tris;
}

bool is_two_cycle(const std::vector<Triangle>& tris) {
    std::map<std::pair<VertexId, VertexId>, int> deg;
    for (const Triangle& t : tris) {
        ++deg[{t[0], t[1]}];
        ++deg[{t[0], t[2]}];
        ++deg[{t[1], t[2]}];
    }
    for (const auto& [e, k] : deg)
        if (k % 2 != 0) return false;
    return true;
}

std::vector<Triangle> smooth_h2(std::vector<Triangle> cycle, const SparseMetricSpace& space,
                                double tau_u, std::vector<SmoothMove>* moves) {
    std::set<Triangle> B(cycle.begin(), cycle.end());

    auto tetra_diam = [&space](const std::array<VertexId, 4>& h) {
        double diam = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                double d = space.distance(h[i], h[j]);
                if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
                diam = std::max(diam, d);
            }
        return diam;
    };

    while (true) {
        // candidate tetrahedra arise from pairs of edge-adjacent faces
        std::map<std::pair<VertexId, VertexId>, std::vector<const Triangle*>> by_edge;
        for (const Triangle& t : B) {
            by_edge[{t[0], t[1]}].push_back(&t);
            by_edge[{t[0], t[2]}].push_back(&t);
            by_edge[{t[1], t[2]}].push_back(&t);
        }
        double best_d = std::numeric_limits<double>::infinity();
        std::array<VertexId, 4> best_h{};
        Triangle best_missing{};
        std::set<std::array<VertexId, 4>> tried;
        for (const auto& [e, tris] : by_edge) {
            for (std::size_t a = 0; a < tris.size(); ++a) {
                for (std::size_t b = a + 1; b < tris.size(); ++b) {
                    std::set<VertexId> uni(tris[a]->begin(), tris[a]->end());
                    uni.insert(tris[b]->begin(), tris[b]->end());
                    if (uni.size() != 4) continue;
                    std::array<VertexId, 4> h{};
                    std::copy(uni.begin(), uni.end(), h.begin());
                    if (!tried.insert(h).second) continue;
                    double d = tetra_diam(h);
                    if (!(d <= tau_u)) continue;
                    int present = 0;
                    Triangle missing{};
                    for (int skip = 0; skip < 4; ++skip) {
                        Triangle face{};
                        int m = 0;
                        for (int k = 0; k < 4; ++k)
                            if (k != skip) face[m++] = h[k];
                        if (B.count(face))
                            ++present;
                        else
                            missing = face;
                    }
                    if (present != 3) continue;
                    if (d < best_d || (d == best_d && h < best_h)) {
                        best_d = d;
                        best_h = h;
                        best_missing = missing;
                    }
                }
            }
        }
        if (!std::isfinite(best_d)) break;
        for (int skip = 0; skip < 4; ++skip) {
            Triangle face{};
            int m = 0;
            for (int k = 0; k < 4; ++k)
                if (k != skip) face[m++] = best_h[k];
            if (face == best_missing)
                B.insert(face);
            else
                B.erase(face);
        }
        if (moves) moves->push_back({best_d});
    }

    // drop stray closed pieces: components with at most 4 faces
    std::vector<Triangle> faces(B.begin(), B.end());
    const std::size_t m = faces.size();
    std::vector<int> comp(m, -1);
    std::map<std::pair<VertexId, VertexId>, std::vector<std::size_t>> edge_to_tri;
    for (std::size_t i = 0; i < m; ++i) {
        edge_to_tri[{faces[i][0], faces[i][1]}].push_back(i);
        edge_to_tri[{faces[i][0], faces[i][2]}].push_back(i);
        edge_to_tri[{faces[i][1], faces[i][2]}].push_back(i);
    }
    int ncomp = 0;
    std::vector<std::size_t> comp_size;
    for (std::size_t s = 0; s < m; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = ncomp;
        std::size_t size = 1;
        std::vector<std::size_t> queue{s};
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const Triangle& t = faces[queue[q]];
            std::array<std::pair<VertexId, VertexId>, 3> es{
                std::pair{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}};
            for (const auto& e : es)
                for (std::size_t k : edge_to_tri[e])
                    if (comp[k] < 0) {
                        comp[k] = ncomp;
                        ++size;
                        queue.push_back(k);
                    }
        }
        comp_size.push_back(size);
        ++ncomp;
    }
    std::vector<Triangle> out;
    for (std::size_t i = 0; i < m; ++i)
        if (ncomp > 0 && comp_size[comp[i]] > 4) out.push_back(faces[i]);
    return out;
}

}  // namespace tcr
