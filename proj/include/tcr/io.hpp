#ifndef TCR_IO_HPP
#define TCR_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "tcr/covers.hpp"
#include "tcr/persistence.hpp"
#include "tcr/sparse_space.hpp"

namespace tcr {

/// Shortest round-trip decimal form; "inf" for infinities.
std::string format_double(double x);

/// Whole file as text; paths ending in .gz are inflated.
std::string read_text_file(const std::string& path);

/// Edge list: header "# n=<count> tau=<tau>", lines "u v d".
SparseMetricSpace read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const SparseMetricSpace& space);

struct BinDistanceReport {
    // per |i - j|: entry count, mean and median estimated distance
    std::map<std::int64_t, std::vector<double>> distances;
    void write(const std::string& path) const;
};

/// Sparse contact triples "i j m". Distances are 1/m; zero or NaN entries and
/// distances above tau are omitted.
SparseMetricSpace load_contact_matrix(const std::string& path, double tau,
                                      std::int64_t n_bins = -1,
                                      BinDistanceReport* report = nullptr);

struct RedshiftRow {
    double cz;  // km/s
    double b;   // galactic latitude, rad
    double l;   // galactic longitude, rad
    int cls;
};

std::vector<RedshiftRow> read_redshift(const std::string& path);

struct EmbedResult {
    Embedding embedding;
    std::int64_t rejected = 0;
};

/// rho = cz/H0, theta = l, phi = pi/2 - b; x = rho sin(phi) cos(theta),
/// y = rho sin(phi) sin(theta), z = rho cos(phi). Rows with cz <= 0 or a
/// different class flag are rejected (keep_class < 0 keeps every class).
EmbedResult embed_redshift(const std::vector<RedshiftRow>& rows, double hubble,
                           int keep_class = -1);

/// Point cloud: lines "x y [z]".
Embedding read_xyz(const std::string& path);

/// TSV "dim\tbirth\tdeath", death "inf" for essential classes.
void write_diagram(const std::string& path, const PersistenceDiagram& pd);
PersistenceDiagram read_diagram(const std::string& path);

struct CycleRecord {
    int dim = 1;
    double birth = 0;
    std::vector<std::array<VertexId, 4>> simplices;
};

/// One cycle per line: "dim birth v0-v1[-v2[-v3]] ...".
void write_cycles(const std::string& path, const std::vector<CycleRecord>& cycles);
std::vector<CycleRecord> read_cycles(const std::string& path);

/// Lines "vertex chromosome".
std::vector<int> read_chrom_map(const std::string& path, std::int64_t n_vertices);

enum class CycleSpan { kCis, kTrans };

/// Cis when every vertex maps to one chromosome; trans otherwise, counting the
/// chromosome pairs the cycle spans.
CycleSpan classify_cis_trans(const CycleRecord& cycle, const std::vector<int>& chrom_map,
                             std::map<std::pair<int, int>, std::int64_t>* pair_counts = nullptr);

}  // namespace tcr

#endif
