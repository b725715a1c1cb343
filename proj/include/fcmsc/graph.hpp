#pragma once

// Per-view k-NN similarity graphs and their unnormalized Laplacians.

#include "fcmsc/linalg.hpp"

#include <optional>

namespace fcmsc {

struct ViewGraph {
    Matrix w;  ///< symmetric, nonnegative, zero diagonal
    Matrix d;  ///< diagonal degrees
    Matrix l;  ///< d - w
};

struct GraphParams {
    int k = 5;
    std::optional<double> sigma;  ///< empty = median of retained k-NN distances
};

/// Gaussian-weighted k-NN adjacency over the columns of `view` (d x n),
/// symmetrized with W = max(W, W^T). Neighbor ties resolve to the lower index.
Matrix knn_adjacency(const Matrix& view, const GraphParams& params = {});

/// Builds D and L = D - W. Rejects W that is asymmetric beyond 1e-10.
ViewGraph laplacian(const Matrix& w);

} // namespace fcmsc
