#include "fcmsc/graph.hpp"

#include "fcmsc/errors.hpp"
#include "fcmsc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace fcmsc {

Matrix knn_adjacency(const Matrix& view, const GraphParams& params) {
    require_finite(view, "knn_adjacency");
    const Eigen::Index n = view.cols();
    if (params.k < 1 || params.k >= n)
        throw InvalidParameter("knn_adjacency: k = " + std::to_string(params.k) +
                               " must satisfy 1 <= k < n = " + std::to_string(n));
    if (params.sigma && !(*params.sigma > 0.0))
        throw InvalidParameter("knn_adjacency: sigma must be positive");

    const Matrix dist2 = kernels::pairwise_sq_dist_omp(view);
    const auto k = static_cast<std::size_t>(params.k);

    // neighbors[j]: the k nearest other samples of j, by (distance, index)
    std::vector<std::vector<Eigen::Index>> neighbors(static_cast<std::size_t>(n));
    std::vector<double> retained;
    retained.reserve(static_cast<std::size_t>(n) * k);
    for (Eigen::Index j = 0; j < n; ++j) {
        std::vector<Eigen::Index> order;
        order.reserve(static_cast<std::size_t>(n - 1));
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j) order.push_back(i);
        std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                          [&](Eigen::Index a, Eigen::Index b) {
                              if (dist2(a, j) != dist2(b, j)) return dist2(a, j) < dist2(b, j);
                              return a < b;
                          });
        order.resize(k);
        for (Eigen::Index i : order) retained.push_back(std::sqrt(dist2(i, j)));
        neighbors[static_cast<std::size_t>(j)] = std::move(order);
    }

    double sigma = 0.0;
    if (params.sigma) {
        sigma = *params.sigma;
    } else {
        std::vector<double> s = retained;
        std::sort(s.begin(), s.end());
        const std::size_t mid = s.size() / 2;
        sigma = s.size() % 2 ? s[mid] : 0.5 * (s[mid - 1] + s[mid]);
        if (!(sigma > 0.0))
            throw DegenerateBandwidth("knn_adjacency: median neighbor distance is zero, "
                               "automatic bandwidth is degenerate");
    }

    Matrix w = Matrix::Zero(n, n);
    const double denom = 2.0 * sigma * sigma;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i : neighbors[static_cast<std::size_t>(j)]) {
            const double weight = std::exp(-dist2(i, j) / denom);
            w(i, j) = std::max(w(i, j), weight);
            w(j, i) = std::max(w(j, i), weight);
        }
    }
    w.diagonal().setZero();
    return w;
}

ViewGraph laplacian(const Matrix& w) {
    require_finite(w, "laplacian");
    if (w.rows() != w.cols()) throw ShapeError("laplacian: W must be square");
    if (max_abs(w - w.transpose()) > 1e-10)
        throw InvalidInput("laplacian: W is not symmetric");
    if (w.minCoeff() < 0.0) throw InvalidInput("laplacian: W has negative weights");
    if (w.diagonal().cwiseAbs().maxCoeff() != 0.0)
        throw InvalidInput("laplacian: W has a nonzero diagonal");
    ViewGraph g;
    g.w = w;
    const Vector degree = w.rowwise().sum();
    g.d = degree.asDiagonal();
    g.l = g.d - g.w;
    return g;
}

} // namespace fcmsc
