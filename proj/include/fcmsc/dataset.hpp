#pragma once

// Multi-view data model: views are stored features x samples.

#include "fcmsc/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fcmsc {

using Labels = std::vector<int>;

struct MultiViewDataset {
    std::vector<Matrix> views;     ///< view i is d_i x n
    std::optional<Labels> labels;  ///< ids in [0, m), every id present
    std::vector<std::string> names;

    Eigen::Index samples() const { return views.empty() ? 0 : views.front().cols(); }
    /// Number of distinct ground-truth clusters, 0 without labels.
    int clusters() const;

    /// Throws ShapeError / InvalidInput / LabelRangeError on a broken invariant.
    void validate() const;
};

/// Half-open row range [begin, end) of one view inside the joint matrix.
struct ViewRange {
    Eigen::Index begin = 0;
    Eigen::Index end = 0;
    Eigen::Index size() const { return end - begin; }
};

struct JointRepresentation {
    Matrix x;  ///< (sum d_i) x n
    std::vector<ViewRange> view_offsets;

    /// Cuts `x` back into its per-view blocks.
    std::vector<Matrix> split() const;
};

/// Throws LabelRangeError unless every label lies in [0, m) and each id in
/// [0, m) occurs.
void validate_labels(const Labels& labels, int m);

/// Maps arbitrary integer ids to 0..m-1 in first-appearance order.
Labels relabel_first_appearance(const std::vector<long long>& raw);

struct LoadOptions {
    bool header = false;
    /// When set, the relabeled ground truth must use exactly this many ids.
    std::optional<int> expected_clusters;
};

/// Loads one CSV per view (samples are rows on disk) and an optional label
/// column file.
MultiViewDataset load_views(const std::vector<std::filesystem::path>& paths,
                            const std::optional<std::filesystem::path>& label_path,
                            const LoadOptions& options = {});

/// Per-feature (per-row) min-max scaling onto [0, 1]. Constant rows map to 0.
Matrix normalize_view(const Matrix& view);

/// Stacks the views in order into the joint representation. Views are
/// normalized first unless `normalize` is false.
JointRepresentation concatenate(const MultiViewDataset& dataset, bool normalize = true);

struct SyntheticSpec {
    int clusters = 3;
    int per_cluster = 30;
    int views = 3;
    std::vector<int> dims{20, 20, 20};
    int subspace_rank = 4;
    double noise = 0.0;
    double cluster_corruption = 0.0;  ///< fraction of samples with one view relocated
    double sample_corruption = 0.0;   ///< fraction of samples replaced by noise in all views
    std::uint64_t seed = 0;
};

/// Union-of-subspaces data. For every view and cluster a random orthonormal
/// basis of rank `subspace_rank` is drawn; sample j of cluster c in view i
/// is basis(i, c) * a + noise * g with a, g standard normal.
///
/// Cluster-specific corruption picks floor(f * n) samples and, for each, one
/// view whose point is rebuilt from a wrong cluster's basis with the same
/// coefficients and noise. Sample-specific corruption picks floor(f * n)
/// samples and replaces their columns in every view by Gaussian noise with
/// five times the clean view's RMS entry as standard deviation.
/// Base data and the two corruptions use independent RNG streams, so turning
/// a corruption on leaves every other column unchanged.
MultiViewDataset generate_synthetic(const SyntheticSpec& spec);

} // namespace fcmsc
