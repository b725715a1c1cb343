#pragma once

// Affinity construction, spectral clustering and clustering metrics.

#include "fcmsc/dataset.hpp"
#include "fcmsc/linalg.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fcmsc {

struct ClusteringResult {
    Labels labels;
    int m = 0;
    std::optional<Matrix> affinity;
};

struct MetricTriple {
    double nmi = 0.0;
    double acc = 0.0;
    double fscore = 0.0;
};

/// W = (|C| + |C^T|) / 2.
Matrix build_affinity(const Matrix& c);

struct KMeansOptions {
    int restarts = 20;
    int max_iter = 300;
    double tol = 1e-6;  ///< relative decrease of the within-cluster sum
};

struct KMeansResult {
    Labels labels;
    Matrix centroids;  ///< k x dim
    double inertia = 0.0;
};

/// Seeded k-means++ with restarts on the rows of `points`; the restart with
/// the smallest within-cluster sum of squares wins (earliest on ties).
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Row-normalized embedding from the m eigenvectors of
/// I - D^{-1/2} W D^{-1/2} with the smallest eigenvalues. Zero-degree nodes
/// get unit degree; zero rows stay zero.
Matrix spectral_embedding(const Matrix& w, int m);

/// Normalized spectral clustering followed by k-means on the embedding.
ClusteringResult spectral_cluster(const Matrix& w, int m, std::uint64_t seed,
                                  const KMeansOptions& options = {});

/// Maximum-weight perfect assignment on a rectangular score matrix (rows are
/// matched to distinct columns, or the reverse when there are more rows).
/// Returns, for every row, the matched column or -1.
std::vector<int> max_assignment(const Matrix& score);

/// Normalized mutual information with sqrt(H(pred) H(truth)) normalization.
double nmi(std::span<const int> pred, std::span<const int> truth);

/// Best one-to-one relabeling accuracy (Hungarian method).
double acc(std::span<const int> pred, std::span<const int> truth);

/// Pairwise co-clustering F-measure.
double pairwise_fscore(std::span<const int> pred, std::span<const int> truth);

MetricTriple evaluate(std::span<const int> pred, std::span<const int> truth);

} // namespace fcmsc
