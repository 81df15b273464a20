#include "tcr/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "tcr/refine.hpp"
#include "tcr/stats.hpp"

namespace tcr {

namespace fs = std::filesystem;

int RunConfig::max_hom_dim() const {
    int m = 1;
    for (int d : dims) {
        if (d < 1 || d > 2) throw InvalidInput("dims must be a subset of {1, 2}");
        m = std::max(m, d);
    }
    return m;
}

LoadedInput load_input(const RunConfig& cfg) {
    const double tau = cfg.significance().tau();
    if (!(tau > 0)) throw InvalidInput("tau_u + epsilon must be positive");
    if (cfg.format == "edges") {
        return {read_edge_list(cfg.input), std::nullopt};
    }
    if (cfg.format == "contacts") {
        if (cfg.bindist_report) {
            BinDistanceReport report;
            SparseMetricSpace s = load_contact_matrix(cfg.input, tau, -1, &report);
            fs::create_directories(cfg.out_dir);
            report.write((fs::path(cfg.out_dir) / "bindist_report.tsv").string());
            return {std::move(s), std::nullopt};
        }
        return {load_contact_matrix(cfg.input, tau), std::nullopt};
    }
    if (cfg.format == "xyz") {
        Embedding emb = read_xyz(cfg.input);
        return {SparseMetricSpace::from_points(emb.points, tau), std::move(emb)};
    }
    if (cfg.format == "redshift") {
        EmbedResult er = embed_redshift(read_redshift(cfg.input), cfg.hubble,
                                        cfg.redshift_class);
        if (er.rejected > 0)
            std::cout << "rejected " << er.rejected << " catalog rows\n";
        return {SparseMetricSpace::from_points(er.embedding.points, tau),
                std::move(er.embedding)};
    }
    throw InvalidInput("unknown input format '" + cfg.format + "'");
}

TupleCycle tuple_cycle_of(const Filtration& f, const Chain& chain, int dim) {
    TupleCycle c;
    c.dim = dim;
    c.simplices.reserve(chain.size());
    for (SimplexIndex s : chain) {
        auto vs = f.vertices(s);
        std::array<VertexId, 4> tup{};
        for (int k = 0; k <= dim; ++k) tup[k] = vs[k];
        c.simplices.push_back(tup);
    }
    return c;
}

namespace {

CycleRecord record_of(const TupleCycle& c, double birth) {
    return {c.dim, birth, c.simplices};
}

TupleCycle walk_to_cycle(const std::vector<VertexId>& walk) {
    TupleCycle c;
    c.dim = 1;
    const std::size_t n = walk.size();
    for (std::size_t i = 0; i < n; ++i) {
        VertexId a = walk[i], b = walk[(i + 1) % n];
        if (a > b) std::swap(a, b);
        c.simplices.push_back({a, b, 0, 0});
    }
    std::sort(c.simplices.begin(), c.simplices.end());
    return c;
}

TupleCycle triangles_to_cycle(const std::vector<Triangle>& tris) {
    TupleCycle c;
    c.dim = 2;
    for (const Triangle& t : tris) c.simplices.push_back({t[0], t[1], t[2], 0});
    std::sort(c.simplices.begin(), c.simplices.end());
    return c;
}

std::string cycle_summary(const TupleCycle& c) {
    std::ostringstream os;
    os << "dim " << c.dim << " len " << c.simplices.size() << " [";
    for (std::size_t i = 0; i < std::min<std::size_t>(c.simplices.size(), 4); ++i) {
        if (i) os << " ";
        for (int k = 0; k <= c.dim; ++k) os << (k ? "-" : "") << c.simplices[i][k];
    }
    if (c.simplices.size() > 4) os << " ...";
    os << "]";
    return os.str();
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    for (const auto& l : lines) out << l << "\n";
}

}  // namespace

CyclesResult run_cycles_pipeline(const RunConfig& cfg, const SparseMetricSpace& space,
                                 const Embedding* embedding) {
    CyclesResult res;
    const SignificanceParams params = cfg.significance();
    const int max_hom = cfg.max_hom_dim();
    Filtration f = Filtration::build(space, max_hom + 1, nullptr, cfg.budgets.max_simplices);
    PersistenceComputation pc = compute_persistence(f, max_hom, cfg.engine());

    std::array<std::vector<Chain>, 3> to_shorten;
    res.n_birth_cycles = compute_all_birth_cycles(
        f, pc, cfg.dims,
        [&](const BirthCycle& bc) {
            res.birth_records.push_back(
                record_of(tuple_cycle_of(f, bc.chain, bc.dim), bc.birth_value));
            if (bc.birth_value <= params.tau_u) to_shorten[bc.dim].push_back(bc.chain);
        },
        cfg.cache, cfg.budgets);

    for (int d : cfg.dims) {
        ShortenParams sp;
        sp.threads = cfg.threads;
        std::vector<Chain> shortened = shorten_cycles(std::move(to_shorten[d]), d, sp);
        for (const Chain& c : shortened) {
            if (c.empty()) continue;
            double birth = f.diameter(c.back());
            res.shortened.push_back({tuple_cycle_of(f, c, d), birth});
        }
        for (const Chain& c : shortened) {
            if (c.empty()) continue;
            for (const Chain& piece : split_disconnected(c, d, f)) {
                if (d == 1) {
                    std::vector<SmoothMove> moves;
                    SmoothedWalk sw =
                        smooth_h1(cycle_to_walk(piece, f), space, params.tau_u, &moves);
                    for (const auto& m : moves) res.smoothing_move_diameters.push_back(m.diameter);
                    if (sw.degenerate) {
                        res.degenerate_log.push_back("degenerate H1 cycle of walk length " +
                                                     std::to_string(sw.walk.size()));
                        continue;
                    }
                    TupleCycle c1 = walk_to_cycle(sw.walk);
                    res.smoothed.push_back({c1, c1.longest_edge(space)});
                } else {
                    std::vector<SmoothMove> moves;
                    std::vector<Triangle> tris =
                        smooth_h2(chain_to_triangles(piece, f), space, params.tau_u, &moves);
                    for (const auto& m : moves) res.smoothing_move_diameters.push_back(m.diameter);
                    if (tris.empty()) {
                        res.degenerate_log.push_back(
                            "H2 cycle vanished under smoothing (component pruning)");
                        continue;
                    }
                    TupleCycle c2 = triangles_to_cycle(tris);
                    res.smoothed.push_back({c2, c2.longest_edge(space)});
                }
            }
        }
    }

    for (const StageCycle& sc : res.smoothed) {
        double est = max_persistence_estimate(sc.cycle, space, embedding);
        if (est < params.epsilon)
            res.nonsignificant_log.push_back("max persistence " + format_double(est) + " < " +
                                             format_double(params.epsilon) + ": " +
                                             cycle_summary(sc.cycle));
    }
    return res;
}

LocalizeResult run_localize_pipeline(const RunConfig& cfg, const SparseMetricSpace& space,
                                     const Embedding& embedding) {
    LocalizeResult res;
    const SignificanceParams params = cfg.significance();
    CyclesResult cycles = run_cycles_pipeline(cfg, space, &embedding);

    for (const StageCycle& sc : cycles.smoothed) {
        if (max_persistence_estimate(sc.cycle, space, &embedding) < params.epsilon) continue;
        Cover cover = cover_of(sc.cycle.vertex_set(), embedding);
        cover.n_sig = count_significant(cover.members, embedding, params, cfg.engine());
        if (cover.n_sig > 0) res.covers.push_back(std::move(cover));
    }
    res.contracted =
        contract_covers(res.covers, embedding, params, cfg.engine(), &res.contraction_log);
    res.intersection_edges = cover_intersection_graph(res.contracted);
    for (std::size_t k = 0; k < res.contracted.size(); ++k) {
        res.refinements.push_back(run_refinement(res.contracted[k], embedding, params,
                                                 cfg.n_pert, cfg.n_perm, cfg.seed,
                                                 static_cast<std::uint64_t>(k), cfg.engine()));
    }
    return res;
}

std::int64_t peak_memory_bytes() {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            std::istringstream is(line.substr(6));
            std::int64_t kb;
            if (is >> kb) return kb * 1024;
        }
    }
    return -1;
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(const std::string& what, const Timer& t, const SparseMetricSpace& space,
            const PersistenceDiagram* pd, const std::vector<int>& dims) {
    std::cout << what << ": wall " << format_double(t.seconds()) << " s";
    std::int64_t mem = peak_memory_bytes();
    if (mem >= 0) std::cout << ", peak rss ~" << mem / (1024 * 1024) << " MiB";
    std::cout << ", n_e " << space.n_edges();
    if (pd) {
        for (int d : dims) std::cout << ", #H" << d << " " << pd->count(d);
    }
    std::cout << "\n";
}

std::vector<CycleRecord> stage_records(const std::vector<StageCycle>& stage) {
    std::vector<CycleRecord> recs;
    recs.reserve(stage.size());
    for (const auto& sc : stage) recs.push_back(record_of(sc.cycle, sc.birth));
    return recs;
}

void write_covers_tsv(const std::string& path, const std::vector<Cover>& covers) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << "id\tlo_x\tlo_y\tlo_z\thi_x\thi_y\thi_z\tn_members\tn_sig\n";
    for (std::size_t i = 0; i < covers.size(); ++i) {
        const Cover& c = covers[i];
        out << i;
        for (int d = 0; d < 3; ++d) out << "\t" << format_double(c.box.lo[d]);
        for (int d = 0; d < 3; ++d) out << "\t" << format_double(c.box.hi[d]);
        out << "\t" << c.members.size() << "\t" << c.n_sig << "\n";
    }
}

std::vector<Cover> read_covers_tsv(const std::string& path, const Embedding& embedding) {
    std::istringstream in(read_text_file(path));
    std::string line;
    std::vector<Cover> covers;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;
        }
        std::istringstream ls(line);
        std::size_t id;
        Cover c;
        std::size_t nm;
        std::int64_t ns;
        ls >> id;
        for (int d = 0; d < 3; ++d) ls >> c.box.lo[d];
        for (int d = 0; d < 3; ++d) ls >> c.box.hi[d];
        ls >> nm >> ns;
        if (!ls) throw ParseError("bad cover row in " + path);
        c.n_sig = ns;
        for (VertexId v = 0; v < embedding.points.size(); ++v)
            if (c.box.contains(embedding.points[v])) c.members.push_back(v);
        covers.push_back(std::move(c));
    }
    return covers;
}

}  // namespace

int cmd_pd(const RunConfig& cfg) {
    Timer t;
    LoadedInput in = load_input(cfg);
    fs::create_directories(cfg.out_dir);
    const int max_hom = cfg.max_hom_dim();
    Filtration f =
        Filtration::build(in.space, max_hom + 1, nullptr, cfg.budgets.max_simplices);
    PersistenceComputation pc = compute_persistence(f, max_hom, cfg.engine());
    PersistenceDiagram full = pc.full_diagram();
    PersistenceDiagram out;
    for (const auto& p : full.pairs)
        if (std::find(cfg.dims.begin(), cfg.dims.end(), p.dim) != cfg.dims.end())
            out.pairs.push_back(p);
    write_diagram((fs::path(cfg.out_dir) / "diagram.tsv").string(), out);
    report("pd", t, in.space, &out, cfg.dims);
    return 0;
}

int cmd_cycles(const RunConfig& cfg) {
    Timer t;
    LoadedInput in = load_input(cfg);
    fs::create_directories(cfg.out_dir);
    CyclesResult res = run_cycles_pipeline(cfg, in.space,
                                           in.embedding ? &*in.embedding : nullptr);
    fs::path dir(cfg.out_dir);
    write_cycles((dir / "birth_cycles.txt").string(), res.birth_records);
    write_cycles((dir / "shortened_cycles.txt").string(), stage_records(res.shortened));
    write_cycles((dir / "smoothed_cycles.txt").string(), stage_records(res.smoothed));
    write_lines((dir / "degenerate_cycles.log").string(), res.degenerate_log);
    write_lines((dir / "nonsignificant_cycles.log").string(), res.nonsignificant_log);
    report("cycles (" + std::to_string(res.n_birth_cycles) + " birth cycles)", t, in.space,
           nullptr, cfg.dims);
    return 0;
}

int cmd_localize(const RunConfig& cfg) {
    Timer t;
    LoadedInput in = load_input(cfg);
    if (!in.embedding) throw InvalidInput("localization requires an embedded input format");
    fs::create_directories(cfg.out_dir);
    LocalizeResult res = run_localize_pipeline(cfg, in.space, *in.embedding);
    fs::path dir(cfg.out_dir);
    write_covers_tsv((dir / "covers.tsv").string(), res.covers);
    write_covers_tsv((dir / "covers_contracted.tsv").string(), res.contracted);
    write_lines((dir / "contraction.log").string(), res.contraction_log);
    {
        std::ofstream out((dir / "intersection_edges.tsv").string(), std::ios::binary);
        out << "a\tb\n";
        for (auto [a, b] : res.intersection_edges) out << a << "\t" << b << "\n";
    }
    {
        std::vector<CycleRecord> recs;
        std::vector<std::string> log;
        for (std::size_t k = 0; k < res.refinements.size(); ++k) {
            const RefinementResult& r = res.refinements[k];
            log.push_back("cover " + std::to_string(k) + ": delta " + format_double(r.delta) +
                          (r.calibration_failed ? " (calibration failed)" : "") + ", trials " +
                          std::to_string(r.trials_run) + " (failed " +
                          std::to_string(r.trials_failed) + "), unique permutations " +
                          std::to_string(r.unique_permutations) +
                          (r.used_fallback ? ", fallback threshold" : ""));
            for (const TupleCycle& c : r.minimal) {
                CycleRecord rec{c.dim, 0.0, c.simplices};
                // birth of a representative = its longest edge in the embedding
                double longest = 0;
                for (const auto& s : c.simplices)
                    for (int i = 0; i <= c.dim; ++i)
                        for (int j = i + 1; j <= c.dim; ++j)
                            longest = std::max(longest, in.embedding->dist(s[i], s[j]));
                rec.birth = longest;
                recs.push_back(std::move(rec));
            }
        }
        write_cycles((dir / "minimal_representatives.txt").string(), recs);
        write_lines((dir / "refinement.log").string(), log);
    }
    report("localize (" + std::to_string(res.contracted.size()) + " covers)", t, in.space,
           nullptr, cfg.dims);
    return 0;
}

int cmd_stats(const RunConfig& cfg) {
    Timer t;
    LoadedInput in = load_input(cfg);
    if (!in.embedding) throw InvalidInput("statistics require an embedded input format");
    const Embedding& emb = *in.embedding;
    fs::path dir(cfg.out_dir);
    std::vector<Cover> voids =
        read_covers_tsv((dir / "covers_contracted.tsv").string(), emb);
    if (voids.empty()) throw InvalidInput("no covers found; run localize first");
    std::vector<CycleRecord> reps = read_cycles((dir / "minimal_representatives.txt").string());

    std::vector<VoidFeatures> features;
    for (const Cover& c : voids)
        features.push_back(compute_void_features(emb, c.box, c.members));
    {
        std::ofstream out((dir / "void_features.tsv").string(), std::ios::binary);
        out << "id\tsize\tuniformity\tradius\teccentricity\n";
        for (std::size_t i = 0; i < features.size(); ++i) {
            const auto& f = features[i];
            out << i << "\t" << format_double(f.size) << "\t" << format_double(f.uniformity)
                << "\t" << format_double(f.radius) << "\t" << format_double(f.eccentricity)
                << "\n";
        }
    }

    Philox spatial_rng(cfg.seed, 0xA11CE, 0);
    SampleBank spatial = spatial_sample(emb, voids, cfg.n_samples, spatial_rng);

    int lo = std::numeric_limits<int>::max(), hi = 4;
    for (const CycleRecord& r : reps) {
        std::set<VertexId> vs;
        for (const auto& s : r.simplices)
            for (int k = 0; k <= r.dim; ++k) vs.insert(s[k]);
        lo = std::min(lo, static_cast<int>(vs.size()));
        hi = std::max(hi, static_cast<int>(vs.size()));
    }
    if (reps.empty()) lo = hi = 8;
    lo = std::max(4, lo);
    hi = std::max(lo, hi);
    Philox graph_rng(cfg.seed, 0xB0B, 0);
    SampleBank graphical = graphical_sample(emb, cfg.tau_u, lo, hi, cfg.n_samples, graph_rng);

    auto write_bank = [](const std::string& path, const SampleBank& bank) {
        std::ofstream out(path, std::ios::binary);
        out << "# variance_ratios";
        for (double v : bank.variance_ratios) out << " " << format_double(v);
        out << "\nsize\tuniformity\tradius\teccentricity\n";
        for (const auto& s : bank.samples)
            out << format_double(s.size) << "\t" << format_double(s.uniformity) << "\t"
                << format_double(s.radius) << "\t" << format_double(s.eccentricity) << "\n";
    };
    write_bank((dir / "spatial_bank.tsv").string(), spatial);
    write_bank((dir / "graphical_bank.tsv").string(), graphical);

    {
        std::ofstream out((dir / "pvalues.tsv").string(), std::ios::binary);
        out << "id\tp_spatial\tneglog10_p_spatial\tp_graphical\tneglog10_p_graphical\n";
        for (std::size_t i = 0; i < voids.size(); ++i) {
            double ps = pseudo_p_value(spatial, features[i]);
            double pg = pseudo_p_value(graphical, features[i]);
            auto neglog = [](double p) {
                return p > 0 ? format_double(-std::log10(p)) : std::string("inf");
            };
            out << i << "\t" << format_double(ps) << "\t" << neglog(ps) << "\t"
                << format_double(pg) << "\t" << neglog(pg) << "\n";
        }
    }
    report("stats (" + std::to_string(voids.size()) + " voids, " +
               std::to_string(spatial.samples.size()) + " spatial / " +
               std::to_string(graphical.samples.size()) + " graphical samples)",
           t, in.space, nullptr, cfg.dims);
    return 0;
}

}  // namespace tcr
