#include "fcmsc/eval.hpp"

#include "fcmsc/errors.hpp"
#include "fcmsc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace fcmsc {

namespace {

/// Compact ids 0..k-1 in first-appearance order; returns k.
int compact(std::span<const int> labels, std::vector<int>& out) {
    std::map<int, int> ids;
    out.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(labels[i], static_cast<int>(ids.size()));
        out[i] = it->second;
    }
    return static_cast<int>(ids.size());
}

/// counts(p, t) = number of samples with pred id p and truth id t.
Matrix contingency(std::span<const int> pred, std::span<const int> truth) {
    if (pred.size() != truth.size())
        throw InvalidInput("label lengths differ: " + std::to_string(pred.size()) + " vs " +
                           std::to_string(truth.size()));
    if (pred.empty()) throw InvalidInput("labels are empty");
    std::vector<int> p, t;
    const int kp = compact(pred, p);
    const int kt = compact(truth, t);
    Matrix counts = Matrix::Zero(kp, kt);
    for (std::size_t i = 0; i < p.size(); ++i) counts(p[i], t[i]) += 1.0;
    return counts;
}

double entropy(const Vector& counts, double n) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < counts.size(); ++i) {
        if (counts(i) > 0.0) {
            const double q = counts(i) / n;
            h -= q * std::log(q);
        }
    }
    return h;
}

double pairs(double c) { return c * (c - 1.0) / 2.0; }

KMeansResult kmeans_once(const Matrix& points, int k, std::mt19937_64& rng,
                         const KMeansOptions& options) {
    const Eigen::Index n = points.rows();
    const Eigen::Index dim = points.cols();
    Matrix centroids(k, dim);

    // k-means++ seeding
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    centroids.row(0) = points.row(first(rng));
    Vector closest = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = closest.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng);
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                target -= closest(i);
                if (target < 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = first(rng);
        }
        centroids.row(c) = points.row(pick);
        closest = closest.cwiseMin(
            (points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }

    KMeansResult r;
    r.labels.assign(static_cast<std::size_t>(n), 0);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < options.max_iter; ++it) {
        const double inertia = kernels::assign_nearest_omp(points, centroids, r.labels);
        Matrix sums = Matrix::Zero(k, dim);
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(r.labels[static_cast<std::size_t>(i)]) += points.row(i);
            ++sizes[static_cast<std::size_t>(r.labels[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] > 0) {
                centroids.row(c) = sums.row(c) / sizes[static_cast<std::size_t>(c)];
            } else {
                // empty cluster: move it onto the point farthest from its centroid
                Eigen::Index far = 0;
                double worst = -1.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double d = (points.row(i) -
                                      centroids.row(r.labels[static_cast<std::size_t>(i)]))
                                         .squaredNorm();
                    if (d > worst) {
                        worst = d;
                        far = i;
                    }
                }
                centroids.row(c) = points.row(far);
            }
        }
        r.inertia = inertia;
        if (prev - inertia <= options.tol * prev) break;
        prev = inertia;
    }
    r.inertia = kernels::assign_nearest_omp(points, centroids, r.labels);
    r.centroids = std::move(centroids);
    return r;
}

} // namespace

Matrix build_affinity(const Matrix& c) {
    if (c.rows() != c.cols()) throw ShapeError("build_affinity: C must be square");
    return (c.cwiseAbs() + c.transpose().cwiseAbs()) / 2.0;
}

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                    const KMeansOptions& options) {
    if (k < 1 || k > points.rows())
        throw InvalidParameter("kmeans: k = " + std::to_string(k) + " with " +
                               std::to_string(points.rows()) + " points");
    if (options.restarts < 1 || options.max_iter < 1)
        throw InvalidParameter("kmeans: restarts and max_iter must be >= 1");
    std::mt19937_64 rng(seed);
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < options.restarts; ++r) {
        KMeansResult run = kmeans_once(points, k, rng, options);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return best;
}

Matrix spectral_embedding(const Matrix& w, int m) {
    const Eigen::Index n = w.rows();
    Vector degree = w.rowwise().sum();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(degree(i) > 0.0)) degree(i) = 1.0;
    const Vector inv_sqrt = degree.cwiseSqrt().cwiseInverse();
    const Matrix lsym = Matrix::Identity(n, n) - inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(lsym);
    if (es.info() != Eigen::Success)
        throw NumericalError("spectral_embedding: eigendecomposition did not converge");
    Matrix emb = es.eigenvectors().leftCols(m);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = emb.row(i).norm();
        if (norm > 0.0) emb.row(i) /= norm;
    }
    return emb;
}

ClusteringResult spectral_cluster(const Matrix& w, int m, std::uint64_t seed,
                                  const KMeansOptions& options) {
    require_finite(w, "spectral_cluster");
    if (w.rows() != w.cols()) throw ShapeError("spectral_cluster: W must be square");
    if (m < 1 || m > w.rows())
        throw InvalidParameter("spectral_cluster: m = " + std::to_string(m) +
                               " with n = " + std::to_string(w.rows()));
    if (w.minCoeff() < 0.0) throw InvalidInput("spectral_cluster: negative affinity");
    if (max_abs(w - w.transpose()) > 1e-10 * std::max(max_abs(w), 1.0))
        throw InvalidInput("spectral_cluster: affinity is not symmetric");
    ClusteringResult out;
    out.m = m;
    out.labels = kmeans(spectral_embedding(w, m), m, seed, options).labels;
    return out;
}

std::vector<int> max_assignment(const Matrix& score) {
    // Shortest augmenting path Hungarian method on a square cost matrix
    // (1-based potentials), padding the short side with zeros.
    const Eigen::Index rows = score.rows();
    const Eigen::Index cols = score.cols();
    const Eigen::Index n = std::max(rows, cols);
    const double top = score.size() ? score.maxCoeff() : 0.0;
    Matrix cost = Matrix::Constant(n, n, top);
    cost.topLeftCorner(rows, cols) = top - score.array();

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<Eigen::Index> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
    for (Eigen::Index i = 1; i <= n; ++i) {
        p[0] = i;
        Eigen::Index j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
        std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const Eigen::Index i0 = p[static_cast<std::size_t>(j0)];
            double delta = inf;
            Eigen::Index j1 = 0;
            for (Eigen::Index j = 1; j <= n; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (used[ju]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[ju];
                if (cur < minv[ju]) {
                    minv[ju] = cur;
                    way[ju] = j0;
                }
                if (minv[ju] < delta) {
                    delta = minv[ju];
                    j1 = j;
                }
            }
            for (Eigen::Index j = 0; j <= n; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (used[ju]) {
                    u[static_cast<std::size_t>(p[ju])] += delta;
                    v[ju] -= delta;
                } else {
                    minv[ju] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const Eigen::Index j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> match(static_cast<std::size_t>(rows), -1);
    for (Eigen::Index j = 1; j <= n; ++j) {
        const Eigen::Index i = p[static_cast<std::size_t>(j)];
        if (i >= 1 && i <= rows && j <= cols)
            match[static_cast<std::size_t>(i - 1)] = static_cast<int>(j - 1);
    }
    return match;
}

double nmi(std::span<const int> pred, std::span<const int> truth) {
    const Matrix counts = contingency(pred, truth);
    const double n = static_cast<double>(pred.size());
    const Vector a = counts.rowwise().sum();
    const Vector b = counts.colwise().sum().transpose();
    const double hp = entropy(a, n);
    const double ht = entropy(b, n);
    if (hp == 0.0 && ht == 0.0) return 1.0;  // both single-cluster
    if (hp == 0.0 || ht == 0.0) return 0.0;
    double mi = 0.0;
    for (Eigen::Index i = 0; i < counts.rows(); ++i)
        for (Eigen::Index j = 0; j < counts.cols(); ++j)
            if (counts(i, j) > 0.0)
                mi += counts(i, j) / n * std::log(n * counts(i, j) / (a(i) * b(j)));
    return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double acc(std::span<const int> pred, std::span<const int> truth) {
    const Matrix counts = contingency(pred, truth);
    const std::vector<int> match = max_assignment(counts);
    double hits = 0.0;
    for (std::size_t i = 0; i < match.size(); ++i)
        if (match[i] >= 0) hits += counts(static_cast<Eigen::Index>(i), match[i]);
    return hits / static_cast<double>(pred.size());
}

double pairwise_fscore(std::span<const int> pred, std::span<const int> truth) {
    const Matrix counts = contingency(pred, truth);
    double tp = 0.0, pred_pairs = 0.0, truth_pairs = 0.0;
    for (Eigen::Index i = 0; i < counts.rows(); ++i)
        for (Eigen::Index j = 0; j < counts.cols(); ++j) tp += pairs(counts(i, j));
    const Vector a = counts.rowwise().sum();
    const Vector b = counts.colwise().sum().transpose();
    for (Eigen::Index i = 0; i < a.size(); ++i) pred_pairs += pairs(a(i));
    for (Eigen::Index j = 0; j < b.size(); ++j) truth_pairs += pairs(b(j));
    if (pred_pairs == 0.0 && truth_pairs == 0.0) return 1.0;  // both all-singleton
    const double precision = pred_pairs > 0.0 ? tp / pred_pairs : 0.0;
    const double recall = truth_pairs > 0.0 ? tp / truth_pairs : 0.0;
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

MetricTriple evaluate(std::span<const int> pred, std::span<const int> truth) {
    return {nmi(pred, truth), acc(pred, truth), pairwise_fscore(pred, truth)};
}

} // namespace fcmsc
