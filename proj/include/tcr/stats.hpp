#ifndef TCR_STATS_HPP
#define TCR_STATS_HPP

#include <array>
#include <vector>

#include "tcr/covers.hpp"
#include "tcr/persistence.hpp"
#include "tcr/rng.hpp"

namespace tcr {

struct VoidFeatures {
    double size = 0;          // member count of the cover
    double uniformity = 0;    // occupied fraction of the angular grid
    double radius = 0;        // distance of the member nearest the box center
    double eccentricity = 1;  // longest box extent / smallest

    std::array<double, 4> as_array() const { return {size, uniformity, radius, eccentricity}; }
};

/// Fraction of occupied pixels on the (theta, phi) grid of pi/10 x pi/10
/// pixels (10 x 20 = 200). Points coincident with the center are skipped.
double spherical_uniformity(const std::vector<std::array<double, 3>>& pts,
                            const std::array<double, 3>& center, std::int64_t* skipped = nullptr);

VoidFeatures compute_void_features(const Embedding& embedding, const CoverBox& box,
                                   const std::vector<VertexId>& members);

struct SampleBank {
    std::vector<VoidFeatures> samples;
    std::int64_t attempts = 0;
    std::array<double, 4> fmin{}, fmax{};
    std::array<double, 4> rescaled_mean{};
    std::array<std::array<double, 4>, 4> basis{};  // rows = axes, descending variance
    std::array<double, 4> variance_ratios{};
    std::vector<std::array<double, 4>> coords;  // samples in PCA coordinates

    /// Computes extrema, rescales to [0,1]^4, and fits the PCA basis.
    void finalize();
    /// Rescale by the bank's extrema and project onto the PCA basis.
    std::array<double, 4> project(const VoidFeatures& v) const;
};

/// Boxes drawn around uniform points of non-empty voxels, with per-axis
/// dimensions between the smallest and largest computed-cover dimensions;
/// samples keep at least the smallest computed-cover member count.
SampleBank spatial_sample(const Embedding& embedding, const std::vector<Cover>& covers,
                          std::int64_t n_samples, Philox& rng);

/// Random connected subgraphs of the tau_u-neighborhood graph with induced
/// minimum degree 3 and size drawn from [lo, hi]; features are measured on the
/// subgraph's cover. Aborts when the acceptance rate collapses below 1e-3.
SampleBank graphical_sample(const Embedding& embedding, double tau_u, int lo, int hi,
                            std::int64_t n_samples, Philox& rng);

/// Product over PCA dimensions of the fraction of samples strictly exceeding
/// the void's coordinate.
double pseudo_p_value(const SampleBank& bank, const VoidFeatures& v);

/// Max elementwise gap between the diagrams' significant barcode-length lists
/// (sorted descending, zero-padded). Essential classes contribute tau - birth.
double l0_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                   const SignificanceParams& params, int dim);

}  // namespace tcr

#endif
