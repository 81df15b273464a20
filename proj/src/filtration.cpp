#include "tcr/filtration.hpp"

#include <algorithm>
#include <cmath>

namespace tcr {

namespace {

// lexicographic comparison of vertex tuples of equal dim
bool tuple_less(const Simplex& a, const Simplex& b) {
    for (int k = 0; k <= a.dim; ++k) {
        if (a.v[k] != b.v[k]) return a.v[k] < b.v[k];
    }
    return false;
}

// intersect sorted neighbor spans, collecting vertices adjacent to all bases
template <typename Fn>
void common_neighbors(const SparseMetricSpace& space, std::span<const VertexId> base, Fn&& fn) {
    auto n0 = space.neighbors(base[0]);
    for (const auto& nb : n0) {
        VertexId w = nb.id;
        bool ok = true;
        for (std::size_t k = 1; k < base.size(); ++k) {
            if (w == base[k] || !space.has_edge(base[k], w)) {
                ok = false;
                break;
            }
        }
        if (ok) fn(w);
    }
}

}  // namespace

double simplex_diameter(const SparseMetricSpace& space, std::span<const VertexId> verts) {
    double diam = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            double d = space.distance(verts[i], verts[j]);
            if (!std::isfinite(d))
                throw InvalidInput("missing edge (" + std::to_string(verts[i]) + ", " +
                                   std::to_string(verts[j]) + ")");
            diam = std::max(diam, d);
        }
    }
    return diam;
}

bool Filtration::order_less(const Simplex& a, const Simplex& b) const {
    if (a.diameter != b.diameter) return a.diameter < b.diameter;
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.dim == 1) {
        std::int64_t ra = edge_ranks_[space_->edge_ordinal(a.v[0], a.v[1])];
        std::int64_t rb = edge_ranks_[space_->edge_ordinal(b.v[0], b.v[1])];
        return ra < rb;
    }
    return tuple_less(a, b);
}

Filtration Filtration::build(const SparseMetricSpace& space, int max_dim,
                             const std::vector<std::int64_t>* edge_ranks,
                             std::int64_t budget) {
    if (max_dim < 0 || max_dim > 3) throw InvalidInput("max_dim must be in 0..3");
    Filtration f;
    f.space_ = &space;
    f.max_dim_ = max_dim;
    if (edge_ranks) {
        if (static_cast<std::int64_t>(edge_ranks->size()) != space.n_edges())
            throw InvalidInput("edge rank table size mismatch");
        f.edge_ranks_ = *edge_ranks;
    } else {
        f.edge_ranks_.resize(space.n_edges());
        for (std::int64_t i = 0; i < space.n_edges(); ++i) f.edge_ranks_[i] = i;
    }

    std::int64_t count = space.n_vertices();
    auto charge = [&](std::int64_t more) {
        count += more;
        if (count > budget)
            throw BudgetError("simplex count exceeds budget of " + std::to_string(budget) +
                              " simplices");
    };

    std::vector<Simplex> simp;
    simp.reserve(static_cast<std::size_t>(std::min<std::int64_t>(count, budget)));
    for (std::int64_t v = 0; v < space.n_vertices(); ++v)
        simp.push_back({0.0, {static_cast<VertexId>(v), 0, 0, 0}, 0});
    if (count > budget)
        throw BudgetError("simplex count exceeds budget of " + std::to_string(budget));

    if (max_dim >= 1) {
        charge(space.n_edges());
        for (const WeightedEdge& e : space.edges())
            simp.push_back({e.d, {e.u, e.v, 0, 0}, 1});
    }
    if (max_dim >= 2) {
        for (const WeightedEdge& e : space.edges()) {
            std::array<VertexId, 2> base{e.u, e.v};
            common_neighbors(space, base, [&](VertexId w) {
                if (w <= e.v) return;  // enumerate each triple once, w > v > u
                charge(1);
                double diam = std::max({e.d, space.distance(e.u, w), space.distance(e.v, w)});
                simp.push_back({diam, {e.u, e.v, w, 0}, 2});
            });
        }
    }
    if (max_dim >= 3) {
        std::size_t tri_begin = 0;
        while (tri_begin < simp.size() && simp[tri_begin].dim != 2) ++tri_begin;
        std::size_t tri_end = simp.size();
        for (std::size_t t = tri_begin; t < tri_end; ++t) {
            Simplex tri = simp[t];
            std::array<VertexId, 3> base{tri.v[0], tri.v[1], tri.v[2]};
            common_neighbors(space, base, [&](VertexId x) {
                if (x <= tri.v[2]) return;
                charge(1);
                double diam = tri.diameter;
                for (VertexId b : base) diam = std::max(diam, space.distance(b, x));
                simp.push_back({diam, {tri.v[0], tri.v[1], tri.v[2], x}, 3});
            });
        }
    }

    std::sort(simp.begin(), simp.end(),
              [&f](const Simplex& a, const Simplex& b) { return f.order_less(a, b); });
    f.simplices_ = std::move(simp);
    f.index_items();
    return f;
}

void Filtration::index_items() {
    for (auto& items : dim_items_) items.clear();
    edge_to_index_.assign(space_->n_edges(), kNoIndex);
    for (std::size_t i = 0; i < simplices_.size(); ++i) {
        const Simplex& s = simplices_[i];
        dim_items_[s.dim].push_back(static_cast<SimplexIndex>(i));
        if (s.dim == 1)
            edge_to_index_[space_->edge_ordinal(s.v[0], s.v[1])] = static_cast<SimplexIndex>(i);
    }
}

Filtration Filtration::prefix(std::int64_t count) const {
    if (count < 0 || count > size()) throw InvalidInput("prefix size out of range");
    Filtration f;
    f.space_ = space_;
    f.max_dim_ = max_dim_;
    f.edge_ranks_ = edge_ranks_;
    f.simplices_.assign(simplices_.begin(), simplices_.begin() + count);
    f.index_items();
    // prefix must be closed under faces
    for (std::int64_t i = 0; i < count; ++i) {
        if (f.dim(i) == 0) continue;
        Chain b;
        f.boundary(i, b);  // throws InternalError if a facet is missing
    }
    return f;
}

SimplexIndex Filtration::index_of(std::span<const VertexId> verts) const {
    const int d = static_cast<int>(verts.size()) - 1;
    if (d == 0) {
        SimplexIndex i = static_cast<SimplexIndex>(verts[0]);
        return (i < size() && simplices_[i].dim == 0 && simplices_[i].v[0] == verts[0]) ? i
                                                                                        : kNoIndex;
    }
    if (d == 1) {
        std::int64_t ord = space_->edge_ordinal(verts[0], verts[1]);
        return ord < 0 ? kNoIndex : edge_to_index_[ord];
    }
    Simplex key{};
    key.dim = static_cast<std::uint8_t>(d);
    for (int k = 0; k <= d; ++k) key.v[k] = verts[k];
    double diam = 0.0;
    for (int i = 0; i <= d; ++i) {
        for (int j = i + 1; j <= d; ++j) {
            double dd = space_->distance(verts[i], verts[j]);
            if (!std::isfinite(dd)) return kNoIndex;
            diam = std::max(diam, dd);
        }
    }
    key.diameter = diam;
    const auto& items = dim_items_[d];
    auto it = std::lower_bound(items.begin(), items.end(), key,
                               [this](SimplexIndex a, const Simplex& b) {
                                   return order_less(simplices_[a], b);
                               });
    if (it == items.end()) return kNoIndex;
    const Simplex& found = simplices_[*it];
    if (found.diameter != diam) return kNoIndex;
    for (int k = 0; k <= d; ++k)
        if (found.v[k] != verts[k]) return kNoIndex;
    return *it;
}

void Filtration::boundary(SimplexIndex i, Chain& out) const {
    out.clear();
    const Simplex& s = simplices_[i];
    if (s.dim == 0) return;
    std::array<VertexId, 4> facet{};
    for (int skip = 0; skip <= s.dim; ++skip) {
        int m = 0;
        for (int k = 0; k <= s.dim; ++k)
            if (k != skip) facet[m++] = s.v[k];
        SimplexIndex fi = index_of({facet.data(), static_cast<std::size_t>(s.dim)});
        if (fi == kNoIndex) throw InternalError("facet missing from filtration");
        out.push_back(fi);
    }
    std::sort(out.begin(), out.end());
}

Filtration::CofacetRange::CofacetRange(const Filtration& f, SimplexIndex i) : f_(f), base_(i) {
    const Simplex& s = f.simplices_[i];
    if (s.dim >= f.max_dim_) return;
    std::span<const VertexId> verts{s.v.data(), static_cast<std::size_t>(s.dim) + 1};
    common_neighbors(f.space(), verts, [&](VertexId w) {
        std::array<VertexId, 4> tup{};
        int m = 0;
        bool placed = false;
        for (int k = 0; k <= s.dim; ++k) {
            if (!placed && w < s.v[k]) {
                tup[m++] = w;
                placed = true;
            }
            tup[m++] = s.v[k];
        }
        if (!placed) tup[m++] = w;
        double diam = s.diameter;
        for (int k = 0; k <= s.dim; ++k) diam = std::max(diam, f.space().distance(w, s.v[k]));
        candidates_.push_back({diam, tup});
    });
    // order candidates the way the filtration orders the cofacets; edge
    // cofacets (vertex base) tie-break by rank, higher dims by vertex tuple
    if (s.dim == 0) {
        std::sort(candidates_.begin(), candidates_.end(), [&f](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            std::int64_t ra = f.edge_ranks_[f.space().edge_ordinal(a.second[0], a.second[1])];
            std::int64_t rb = f.edge_ranks_[f.space().edge_ordinal(b.second[0], b.second[1])];
            return ra < rb;
        });
    } else {
        std::sort(candidates_.begin(), candidates_.end());
    }
}

SimplexIndex Filtration::CofacetRange::next() {
    while (pos_ < candidates_.size()) {
        const auto& [diam, tup] = candidates_[pos_++];
        const Simplex& s = f_.simplices_[base_];
        SimplexIndex idx = f_.index_of({tup.data(), static_cast<std::size_t>(s.dim) + 2});
        if (idx != kNoIndex) return idx;  // absent under prefix truncation
    }
    return kNoIndex;
}

SimplexIndex Filtration::earliest_cofacet(SimplexIndex i) const {
    CofacetRange r(*this, i);
    return r.next();
}

SimplexIndex Filtration::latest_facet(SimplexIndex i) const {
    Chain b;
    boundary(i, b);
    return b.empty() ? kNoIndex : b.back();
}

SimplexIndex Filtration::apparent_death(SimplexIndex birth) const {
    SimplexIndex t = earliest_cofacet(birth);
    if (t == kNoIndex) return kNoIndex;
    return latest_facet(t) == birth ? t : kNoIndex;
}

SimplexIndex Filtration::apparent_birth(SimplexIndex death) const {
    SimplexIndex e = latest_facet(death);
    if (e == kNoIndex) return kNoIndex;
    return earliest_cofacet(e) == death ? e : kNoIndex;
}

PairedId Filtration::encode_paired(SimplexIndex i) const {
    const Simplex& s = simplices_[i];
    if (s.dim < 2) throw InvalidInput("paired encoding applies to dim >= 2");
    SimplexIndex primary = latest_facet(i);
    const Simplex& p = simplices_[primary];
    VertexId secondary = 0;
    for (int k = 0; k <= s.dim; ++k) {
        bool in_primary = false;
        for (int m = 0; m <= p.dim; ++m)
            if (p.v[m] == s.v[k]) in_primary = true;
        if (!in_primary) {
            secondary = s.v[k];
            break;
        }
    }
    return {primary, secondary};
}

SimplexIndex Filtration::decode_paired(int d, PairedId p) const {
    const Simplex& base = simplices_[p.primary];
    std::array<VertexId, 4> tup{};
    int m = 0;
    bool placed = false;
    for (int k = 0; k <= base.dim; ++k) {
        if (!placed && p.secondary < base.v[k]) {
            tup[m++] = p.secondary;
            placed = true;
        }
        tup[m++] = base.v[k];
    }
    if (!placed) tup[m++] = p.secondary;
    return index_of({tup.data(), static_cast<std::size_t>(d) + 1});
}

}  // namespace tcr
