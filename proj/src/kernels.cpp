#include "fcmsc/kernels.hpp"

#include <cmath>
#include <limits>

namespace fcmsc::kernels {

namespace {

inline void shrink_column(Matrix& m, Eigen::Index j, double tau) {
    const double norm = m.col(j).norm();
    if (norm <= tau) {
        m.col(j).setZero();
    } else {
        m.col(j) *= (norm - tau) / norm;
    }
}

inline double sq_dist(const Matrix& x, Eigen::Index i, Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index f = 0; f < x.rows(); ++f) {
        const double d = x(f, i) - x(f, j);
        s += d * d;
    }
    return s;
}

inline double nearest(const Matrix& points, const Matrix& centroids,
                      Eigen::Index i, int& label) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        double s = 0.0;
        for (Eigen::Index f = 0; f < points.cols(); ++f) {
            const double d = points(i, f) - centroids(c, f);
            s += d * d;
        }
        if (s < best) {
            best = s;
            arg = static_cast<int>(c);
        }
    }
    label = arg;
    return best;
}

} // namespace

void col_shrink_serial(Matrix& m, double tau) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) shrink_column(m, j, tau);
}

void col_shrink_omp(Matrix& m, double tau) {
    const Eigen::Index cols = m.cols();
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < cols; ++j) shrink_column(m, j, tau);
}

Matrix pairwise_sq_dist_serial(const Matrix& x) {
    const Eigen::Index n = x.cols();
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            out(i, j) = out(j, i) = sq_dist(x, i, j);
        }
    }
    return out;
}

Matrix pairwise_sq_dist_omp(const Matrix& x) {
    const Eigen::Index n = x.cols();
    Matrix out = Matrix::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 8)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            out(i, j) = out(j, i) = sq_dist(x, i, j);
        }
    }
    return out;
}

void spectral_divide_serial(const Matrix& m, const Vector& a, const Vector& b,
                            Matrix& out) {
    out.resize(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            out(i, j) = m(i, j) / (a(i) + b(j));
}

void spectral_divide_omp(const Matrix& m, const Vector& a, const Vector& b,
                         Matrix& out) {
    out.resize(m.rows(), m.cols());
    const Eigen::Index cols = m.cols();
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            out(i, j) = m(i, j) / (a(i) + b(j));
}

double assign_nearest_serial(const Matrix& points, const Matrix& centroids,
                             std::span<int> labels) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        total += nearest(points, centroids, i, labels[i]);
    return total;
}

double assign_nearest_omp(const Matrix& points, const Matrix& centroids,
                          std::span<int> labels) {
    const Eigen::Index n = points.rows();
    Vector dist(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i)
        dist(i) = nearest(points, centroids, i, labels[i]);
    // Summed in index order so the total matches the serial kernel.
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += dist(i);
    return total;
}

} // namespace fcmsc::kernels
