#include "tcr/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace tcr {

double spherical_uniformity(const std::vector<std::array<double, 3>>& pts,
                            const std::array<double, 3>& center, std::int64_t* skipped) {
    constexpr double kPix = std::numbers::pi / 10.0;
    bool occupied[10][20] = {};
    std::int64_t skip = 0;
    for (const auto& p : pts) {
        double x = p[0] - center[0], y = p[1] - center[1], z = p[2] - center[2];
        double rho = std::sqrt(x * x + y * y + z * z);
        if (rho == 0) {
            ++skip;
            continue;
        }
        double theta = std::acos(std::clamp(z / rho, -1.0, 1.0));  // [0, pi]
        double phi = std::atan2(y, x);                             // (-pi, pi]
        if (phi < 0) phi += 2 * std::numbers::pi;
        int ti = std::min(9, static_cast<int>(theta / kPix));
        int pi_ = std::min(19, static_cast<int>(phi / kPix));
        occupied[ti][pi_] = true;
    }
    if (skipped) *skipped = skip;
    int n = 0;
    for (auto& row : occupied)
        for (bool b : row) n += b;
    return n / 200.0;
}

VoidFeatures compute_void_features(const Embedding& embedding, const CoverBox& box,
                                   const std::vector<VertexId>& members) {
    VoidFeatures f;
    f.size = static_cast<double>(members.size());
    std::array<double, 3> c = box.center();
    std::vector<std::array<double, 3>> pts;
    pts.reserve(members.size());
    double nearest = std::numeric_limits<double>::infinity();
    for (VertexId v : members) {
        const auto& p = embedding.points[v];
        pts.push_back(p);
        double dx = p[0] - c[0], dy = p[1] - c[1], dz = p[2] - c[2];
        nearest = std::min(nearest, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
    f.uniformity = spherical_uniformity(pts, c);
    f.radius = std::isfinite(nearest) ? nearest : 0.0;
    auto ext = box.extents();
    double lo = ext[0], hi = ext[0];
    const int dims = embedding.dim;
    for (int d = 1; d < dims; ++d) {
        lo = std::min(lo, ext[d]);
        hi = std::max(hi, ext[d]);
    }
    f.eccentricity = lo > 0 ? hi / lo : (hi > 0 ? std::numeric_limits<double>::infinity() : 1.0);
    return f;
}

void SampleBank::finalize() {
    if (samples.empty()) throw InvalidInput("empty sample bank");
    const std::size_t n = samples.size();
    for (int d = 0; d < 4; ++d) {
        fmin[d] = std::numeric_limits<double>::infinity();
        fmax[d] = -std::numeric_limits<double>::infinity();
    }
    for (const auto& s : samples) {
        auto a = s.as_array();
        for (int d = 0; d < 4; ++d) {
            fmin[d] = std::min(fmin[d], a[d]);
            fmax[d] = std::max(fmax[d], a[d]);
        }
    }
    Eigen::MatrixXd X(n, 4);
    for (std::size_t i = 0; i < n; ++i) {
        auto a = samples[i].as_array();
        for (int d = 0; d < 4; ++d) {
            double range = fmax[d] - fmin[d];
            X(i, d) = range > 0 ? (a[d] - fmin[d]) / range : 0.0;
        }
    }
    Eigen::RowVector4d mean = X.colwise().mean();
    for (int d = 0; d < 4; ++d) rescaled_mean[d] = mean(d);
    X.rowwise() -= mean;
    Eigen::Matrix4d cov = X.transpose() * X / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(cov);
    double total = eig.eigenvalues().sum();
    for (int d = 0; d < 4; ++d) {
        // solver orders ascending; we report descending
        Eigen::Vector4d v = eig.eigenvectors().col(3 - d);
        int arg = 0;
        for (int k = 1; k < 4; ++k)
            if (std::abs(v(k)) > std::abs(v(arg))) arg = k;
        if (v(arg) < 0) v = -v;
        for (int k = 0; k < 4; ++k) basis[d][k] = v(k);
        variance_ratios[d] = total > 0 ? eig.eigenvalues()(3 - d) / total : 0.0;
    }
    coords.resize(n);
    for (std::size_t i = 0; i < n; ++i) coords[i] = project(samples[i]);
}

std::array<double, 4> SampleBank::project(const VoidFeatures& v) const {
    auto a = v.as_array();
    std::array<double, 4> g{};
    for (int d = 0; d < 4; ++d) {
        double range = fmax[d] - fmin[d];
        g[d] = range > 0 ? (a[d] - fmin[d]) / range : 0.0;
    }
    std::array<double, 4> w{};
    for (int d = 0; d < 4; ++d)
        for (int k = 0; k < 4; ++k) w[d] += basis[d][k] * (g[k] - rescaled_mean[k]);
    return w;
}

SampleBank spatial_sample(const Embedding& embedding, const std::vector<Cover>& covers,
                          std::int64_t n_samples, Philox& rng) {
    if (covers.empty()) throw InvalidInput("spatial sampling requires at least one cover");
    SampleBank bank;

    std::array<double, 3> dmin{}, dmax{};
    std::size_t n_min = covers[0].members.size();
    for (std::size_t i = 0; i < covers.size(); ++i) {
        auto ext = covers[i].box.extents();
        for (int d = 0; d < 3; ++d) {
            if (i == 0 || ext[d] < dmin[d]) dmin[d] = ext[d];
            if (i == 0 || ext[d] > dmax[d]) dmax[d] = ext[d];
        }
        n_min = std::min(n_min, covers[i].members.size());
    }

    // voxel grid with the minimum cover dimensions
    std::array<double, 3> lo{}, hi{};
    for (int d = 0; d < 3; ++d) {
        lo[d] = hi[d] = embedding.points[0][d];
        for (const auto& p : embedding.points) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    }
    std::array<std::int64_t, 3> grid{};
    for (int d = 0; d < 3; ++d) {
        grid[d] = dmin[d] > 0 ? std::max<std::int64_t>(
                                    1, static_cast<std::int64_t>((hi[d] - lo[d]) / dmin[d]) + 1)
                              : 1;
    }
    std::set<std::int64_t> nonempty_set;
    for (const auto& p : embedding.points) {
        std::array<std::int64_t, 3> v{};
        for (int d = 0; d < 3; ++d)
            v[d] = dmin[d] > 0 ? std::min<std::int64_t>(
                                     grid[d] - 1,
                                     static_cast<std::int64_t>((p[d] - lo[d]) / dmin[d]))
                               : 0;
        nonempty_set.insert((v[0] * grid[1] + v[1]) * grid[2] + v[2]);
    }
    std::vector<std::int64_t> nonempty(nonempty_set.begin(), nonempty_set.end());

    const std::int64_t max_attempts = std::max<std::int64_t>(n_samples * 1000, 100000);
    while (static_cast<std::int64_t>(bank.samples.size()) < n_samples &&
           bank.attempts < max_attempts) {
        ++bank.attempts;
        std::int64_t vox = nonempty[rng.uniform_below(nonempty.size())];
        std::int64_t vz = vox % grid[2], vy = (vox / grid[2]) % grid[1],
                     vx = vox / (grid[2] * grid[1]);
        std::array<std::int64_t, 3> v{vx, vy, vz};
        std::array<double, 3> center{};
        for (int d = 0; d < 3; ++d) {
            double cell_lo = lo[d] + v[d] * dmin[d];
            center[d] = dmin[d] > 0 ? rng.uniform(cell_lo, cell_lo + dmin[d]) : lo[d];
        }
        CoverBox box;
        for (int d = 0; d < 3; ++d) {
            double dim = rng.uniform(dmin[d], dmax[d]);
            box.lo[d] = center[d] - dim / 2;
            box.hi[d] = center[d] + dim / 2;
        }
        std::vector<VertexId> members;
        for (VertexId i = 0; i < embedding.points.size(); ++i)
            if (box.contains(embedding.points[i])) members.push_back(i);
        if (members.size() < n_min) continue;
        bank.samples.push_back(compute_void_features(embedding, box, members));
    }
    if (bank.samples.empty()) throw InvalidInput("spatial sampling produced no valid samples");
    bank.finalize();
    return bank;
}

SampleBank graphical_sample(const Embedding& embedding, double tau_u, int lo, int hi,
                            std::int64_t n_samples, Philox& rng) {
    if (lo < 4) throw InvalidInput("graphical sample size lower bound must be at least 4");
    if (hi < lo) throw InvalidInput("empty graphical sample size range");
    const std::size_t n = embedding.points.size();
    std::vector<std::vector<VertexId>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (embedding.dist(static_cast<VertexId>(i), static_cast<VertexId>(j)) <= tau_u) {
                adj[i].push_back(static_cast<VertexId>(j));
                adj[j].push_back(static_cast<VertexId>(i));
            }

    SampleBank bank;
    const std::int64_t max_attempts = std::max<std::int64_t>(n_samples * 1000, 100000);
    while (static_cast<std::int64_t>(bank.samples.size()) < n_samples &&
           bank.attempts < max_attempts) {
        ++bank.attempts;
        if (bank.attempts > 1000 &&
            static_cast<double>(bank.samples.size()) / static_cast<double>(bank.attempts) <
                1e-3)
            throw InvalidInput("graphical sampling acceptance rate collapsed below 1e-3 after " +
                               std::to_string(bank.attempts) + " attempts (" +
                               std::to_string(bank.samples.size()) + " accepted)");
        int target = lo + static_cast<int>(rng.uniform_below(hi - lo + 1));
        VertexId start = static_cast<VertexId>(rng.uniform_below(n));
        std::set<VertexId> sub{start};
        std::vector<VertexId> frontier(adj[start].begin(), adj[start].end());
        while (static_cast<int>(sub.size()) < target && !frontier.empty()) {
            std::size_t pick = rng.uniform_below(frontier.size());
            VertexId v = frontier[pick];
            frontier.erase(frontier.begin() + pick);
            if (sub.count(v)) continue;
            sub.insert(v);
            for (VertexId w : adj[v])
                if (!sub.count(w)) frontier.push_back(w);
        }
        if (static_cast<int>(sub.size()) != target) continue;
        bool ok = true;
        for (VertexId v : sub) {
            int deg = 0;
            for (VertexId w : adj[v]) deg += sub.count(w) ? 1 : 0;
            if (deg < 3) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<VertexId> verts(sub.begin(), sub.end());
        CoverBox box;
        box.lo = box.hi = embedding.points[verts[0]];
        for (VertexId v : verts) {
            const auto& p = embedding.points[v];
            for (int d = 0; d < 3; ++d) {
                box.lo[d] = std::min(box.lo[d], p[d]);
                box.hi[d] = std::max(box.hi[d], p[d]);
            }
        }
        std::vector<VertexId> members;
        for (VertexId i = 0; i < n; ++i)
            if (box.contains(embedding.points[i])) members.push_back(i);
        bank.samples.push_back(compute_void_features(embedding, box, members));
    }
    if (bank.samples.empty()) throw InvalidInput("graphical sampling produced no valid samples");
    bank.finalize();
    return bank;
}

double pseudo_p_value(const SampleBank& bank, const VoidFeatures& v) {
    if (bank.samples.empty()) throw InvalidInput("empty sample bank");
    std::array<double, 4> w = bank.project(v);
    double p = 1.0;
    const double n = static_cast<double>(bank.coords.size());
    for (int d = 0; d < 4; ++d) {
        std::int64_t c = 0;
        for (const auto& sc : bank.coords)
            if (sc[d] > w[d]) ++c;
        p *= static_cast<double>(c) / n;
    }
    return p;
}

namespace {

std::vector<double> significant_lengths(const PersistenceDiagram& pd,
                                        const SignificanceParams& params, int dim) {
    std::vector<double> lens;
    for (const auto& p : pd.pairs) {
        if (p.dim != dim) continue;
        double pers = p.essential() ? params.tau() - p.birth_value : p.persistence();
        if (p.birth_value <= params.tau_u && pers >= params.epsilon) lens.push_back(pers);
    }
    std::sort(lens.rbegin(), lens.rend());
    return lens;
}

}  // namespace

double l0_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                   const SignificanceParams& params, int dim) {
    std::vector<double> la = significant_lengths(a, params, dim);
    std::vector<double> lb = significant_lengths(b, params, dim);
    std::size_t n = std::max(la.size(), lb.size());
    la.resize(n, 0.0);
    lb.resize(n, 0.0);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(la[i] - lb[i]));
    return m;
}

}  // namespace tcr
