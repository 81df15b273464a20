#include "tcr/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace tcr {

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

namespace {

double parse_double(const std::string& tok, std::int64_t line) {
    if (tok == "inf") return std::numeric_limits<double>::infinity();
    if (tok == "-inf") return -std::numeric_limits<double>::infinity();
    if (tok == "nan" || tok == "NaN" || tok == "NAN")
        return std::numeric_limits<double>::quiet_NaN();
    double v;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("line " + std::to_string(line) + ": bad number '" + tok + "'");
    return v;
}

std::int64_t parse_int(const std::string& tok, std::int64_t line) {
    std::int64_t v;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("line " + std::to_string(line) + ": bad integer '" + tok + "'");
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

struct LineReader {
    std::istringstream stream;
    std::int64_t line_no = 0;

    explicit LineReader(std::string text) : stream(std::move(text)) {}

    bool next(std::string& line) {
        while (std::getline(stream, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return true;
        }
        return false;
    }
};

}  // namespace

std::string read_text_file(const std::string& path) {
    if (path.size() > 3 && path.substr(path.size() - 3) == ".gz") {
        gzFile gz = gzopen(path.c_str(), "rb");
        if (!gz) throw ParseError("cannot open " + path);
        std::string out;
        char buf[1 << 16];
        int n;
        while ((n = gzread(gz, buf, sizeof buf)) > 0) out.append(buf, n);
        bool bad = n < 0;
        gzclose(gz);
        if (bad) throw ParseError("gzip read failed for " + path);
        return out;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SparseMetricSpace read_edge_list(const std::string& path) {
    LineReader rd(read_text_file(path));
    std::string line;
    std::int64_t n = -1;
    double tau = 0;
    std::vector<WeightedEdge> edges;
    while (rd.next(line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string kv;
            while (hs >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) continue;
                std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                if (key == "n") n = parse_int(val, rd.line_no);
                if (key == "tau") tau = parse_double(val, rd.line_no);
            }
            continue;
        }
        auto toks = split_ws(line);
        if (toks.size() != 3)
            throw ParseError("line " + std::to_string(rd.line_no) + ": expected 'u v d'");
        std::int64_t u = parse_int(toks[0], rd.line_no);
        std::int64_t v = parse_int(toks[1], rd.line_no);
        double d = parse_double(toks[2], rd.line_no);
        if (u < 0 || v < 0)
            throw ParseError("line " + std::to_string(rd.line_no) + ": negative vertex id");
        edges.push_back(
            {static_cast<VertexId>(u), static_cast<VertexId>(v), d});
    }
    if (n < 0) throw ParseError("missing '# n=<count> tau=<tau>' header");
    if (!(tau > 0)) throw ParseError("missing or non-positive tau in header");
    try {
        return SparseMetricSpace::from_edges(n, tau, std::move(edges));
    } catch (const InvalidInput& e) {
        throw ParseError(std::string("invalid edge list: ") + e.what());
    }
}

void write_edge_list(const std::string& path, const SparseMetricSpace& space) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << "# n=" << space.n_vertices() << " tau=" << format_double(space.tau()) << "\n";
    for (const WeightedEdge& e : space.edges())
        out << e.u << " " << e.v << " " << format_double(e.d) << "\n";
}

void BinDistanceReport::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << "bindist\tcount\tmean\tmedian\n";
    for (const auto& [bd, ds] : distances) {
        std::vector<double> sorted = ds;
        std::sort(sorted.begin(), sorted.end());
        double mean = 0;
        for (double d : sorted) mean += d;
        mean /= static_cast<double>(sorted.size());
        double median = sorted.size() % 2 ? sorted[sorted.size() / 2]
                                          : (sorted[sorted.size() / 2 - 1] +
                                             sorted[sorted.size() / 2]) /
                                                2;
        out << bd << "\t" << sorted.size() << "\t" << format_double(mean) << "\t"
            << format_double(median) << "\n";
    }
}

SparseMetricSpace load_contact_matrix(const std::string& path, double tau, std::int64_t n_bins,
                                      BinDistanceReport* report) {
    LineReader rd(read_text_file(path));
    std::string line;
    std::vector<WeightedEdge> edges;
    std::int64_t max_bin = -1;
    while (rd.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.size() != 3)
            throw ParseError("line " + std::to_string(rd.line_no) + ": expected 'i j m'");
        std::int64_t i = parse_int(toks[0], rd.line_no);
        std::int64_t j = parse_int(toks[1], rd.line_no);
        double m = parse_double(toks[2], rd.line_no);
        if (i < 0 || j < 0)
            throw ParseError("line " + std::to_string(rd.line_no) + ": negative bin id");
        max_bin = std::max({max_bin, i, j});
        if (i == j) continue;
        if (std::isnan(m) || m <= 0) continue;  // absent edge
        double d = 1.0 / m;
        if (report && std::isfinite(d)) report->distances[std::abs(i - j)].push_back(d);
        if (d > tau) continue;
        VertexId u = static_cast<VertexId>(std::min(i, j));
        VertexId v = static_cast<VertexId>(std::max(i, j));
        edges.push_back({u, v, d});
    }
    std::int64_t n = n_bins >= 0 ? n_bins : max_bin + 1;
    try {
        return SparseMetricSpace::from_edges(n, tau, std::move(edges));
    } catch (const InvalidInput& e) {
        throw ParseError(std::string("invalid contact matrix: ") + e.what());
    }
}

std::vector<RedshiftRow> read_redshift(const std::string& path) {
    LineReader rd(read_text_file(path));
    std::string line;
    std::vector<RedshiftRow> rows;
    while (rd.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.size() != 4)
            throw ParseError("line " + std::to_string(rd.line_no) + ": expected 'cz b l class'");
        rows.push_back({parse_double(toks[0], rd.line_no), parse_double(toks[1], rd.line_no),
                        parse_double(toks[2], rd.line_no),
                        static_cast<int>(parse_int(toks[3], rd.line_no))});
    }
    return rows;
}

EmbedResult embed_redshift(const std::vector<RedshiftRow>& rows, double hubble,
                           int keep_class) {
    EmbedResult res;
    res.embedding.dim = 3;
    for (const RedshiftRow& r : rows) {
        if (r.cz <= 0 || (keep_class >= 0 && r.cls != keep_class)) {
            ++res.rejected;
            continue;
        }
        double rho = r.cz / hubble;
        double theta = r.l;
        double phi = std::numbers::pi / 2 - r.b;
        res.embedding.points.push_back({rho * std::sin(phi) * std::cos(theta),
                                        rho * std::sin(phi) * std::sin(theta),
                                        rho * std::cos(phi)});
    }
    return res;
}

Embedding read_xyz(const std::string& path) {
    LineReader rd(read_text_file(path));
    std::string line;
    Embedding emb;
    emb.dim = 0;
    while (rd.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.size() != 2 && toks.size() != 3)
            throw ParseError("line " + std::to_string(rd.line_no) + ": expected 'x y [z]'");
        int dim = static_cast<int>(toks.size());
        if (emb.dim == 0) emb.dim = dim;
        if (dim != emb.dim)
            throw ParseError("line " + std::to_string(rd.line_no) + ": mixed dimensions");
        emb.points.push_back({parse_double(toks[0], rd.line_no),
                              parse_double(toks[1], rd.line_no),
                              dim == 3 ? parse_double(toks[2], rd.line_no) : 0.0});
    }
    if (emb.dim == 0) emb.dim = 3;
    return emb;
}

void write_diagram(const std::string& path, const PersistenceDiagram& pd) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << "dim\tbirth\tdeath\n";
    for (const auto& p : pd.pairs)
        out << p.dim << "\t" << format_double(p.birth_value) << "\t"
            << format_double(p.death_value) << "\n";
}

PersistenceDiagram read_diagram(const std::string& path) {
    LineReader rd(read_text_file(path));
    std::string line;
    PersistenceDiagram pd;
    bool header_seen = false;
    while (rd.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("dim", 0) == 0) continue;
        }
        auto toks = split_ws(line);
        if (toks.size() != 3)
            throw ParseError("line " + std::to_string(rd.line_no) +
                             ": expected 'dim birth death'");
        PersistencePairRec p;
        p.dim = static_cast<int>(parse_int(toks[0], rd.line_no));
        p.birth_value = parse_double(toks[1], rd.line_no);
        p.death_value = parse_double(toks[2], rd.line_no);
        pd.pairs.push_back(p);
    }
    return pd;
}

void write_cycles(const std::string& path, const std::vector<CycleRecord>& cycles) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    for (const CycleRecord& c : cycles) {
        out << c.dim << " " << format_double(c.birth);
        for (const auto& s : c.simplices) {
            out << " ";
            for (int k = 0; k <= c.dim; ++k) {
                if (k) out << "-";
                out << s[k];
            }
        }
        out << "\n";
    }
}

std::vector<CycleRecord> read_cycles(const std::string& path) {
    LineReader rd(read_text_file(path));
    std::string line;
    std::vector<CycleRecord> out;
    while (rd.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.size() < 2)
            throw ParseError("line " + std::to_string(rd.line_no) + ": expected 'dim birth ...'");
        CycleRecord c;
        c.dim = static_cast<int>(parse_int(toks[0], rd.line_no));
        if (c.dim < 1 || c.dim > 3)
            throw ParseError("line " + std::to_string(rd.line_no) + ": bad cycle dim");
        c.birth = parse_double(toks[1], rd.line_no);
        for (std::size_t i = 2; i < toks.size(); ++i) {
            std::array<VertexId, 4> tup{};
            std::istringstream ts(toks[i]);
            std::string part;
            int k = 0;
            while (std::getline(ts, part, '-')) {
                if (k > c.dim)
                    throw ParseError("line " + std::to_string(rd.line_no) +
                                     ": tuple arity exceeds dim");
                tup[k++] = static_cast<VertexId>(parse_int(part, rd.line_no));
            }
            if (k != c.dim + 1)
                throw ParseError("line " + std::to_string(rd.line_no) + ": tuple arity mismatch");
            c.simplices.push_back(tup);
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<int> read_chrom_map(const std::string& path, std::int64_t n_vertices) {
    LineReader rd(read_text_file(path));
    std::string line;
    std::vector<int> map(n_vertices, -1);
    while (rd.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.size() != 2)
            throw ParseError("line " + std::to_string(rd.line_no) +
                             ": expected 'vertex chromosome'");
        std::int64_t v = parse_int(toks[0], rd.line_no);
        if (v < 0 || v >= n_vertices)
            throw ParseError("line " + std::to_string(rd.line_no) + ": vertex out of range");
        map[v] = static_cast<int>(parse_int(toks[1], rd.line_no));
    }
    return map;
}

CycleSpan classify_cis_trans(const CycleRecord& cycle, const std::vector<int>& chrom_map,
                             std::map<std::pair<int, int>, std::int64_t>* pair_counts) {
    std::vector<int> chroms;
    for (const auto& s : cycle.simplices) {
        for (int k = 0; k <= cycle.dim; ++k) {
            VertexId v = s[k];
            if (v >= chrom_map.size() || chrom_map[v] < 0)
                throw InvalidInput("vertex " + std::to_string(v) + " has no chromosome");
            chroms.push_back(chrom_map[v]);
        }
    }
    std::sort(chroms.begin(), chroms.end());
    chroms.erase(std::unique(chroms.begin(), chroms.end()), chroms.end());
    if (chroms.size() <= 1) return CycleSpan::kCis;
    if (pair_counts) {
        for (std::size_t i = 0; i < chroms.size(); ++i)
            for (std::size_t j = i + 1; j < chroms.size(); ++j)
                ++(*pair_counts)[{chroms[i], chroms[j]}];
    }
    return CycleSpan::kTrans;
}

}  // namespace tcr
