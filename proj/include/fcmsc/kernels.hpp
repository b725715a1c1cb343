#pragma once

// Data-parallel inner loops.
//
// Each kernel exists twice: a plain serial loop kept as the reference, and an
// OpenMP version used by the library. Every output entry is computed by the
// same arithmetic in both, so the two agree bit for bit; tests/test_kernels
// checks that and bench/ compares their speed.

#include <Eigen/Dense>

#include <span>

namespace fcmsc::kernels {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Rescales column j of `m` by max(0, 1 - tau / ||m_j||) in place.
void col_shrink_serial(Matrix& m, double tau);
void col_shrink_omp(Matrix& m, double tau);

/// Squared Euclidean distances between the columns of `x`.
Matrix pairwise_sq_dist_serial(const Matrix& x);
Matrix pairwise_sq_dist_omp(const Matrix& x);

/// out(i, j) = m(i, j) / (a(i) + b(j)).
void spectral_divide_serial(const Matrix& m, const Vector& a, const Vector& b,
                            Matrix& out);
void spectral_divide_omp(const Matrix& m, const Vector& a, const Vector& b,
                         Matrix& out);

/// Nearest centroid (rows of `centroids`) for each row of `points`; ties go
/// to the lowest centroid index. Returns the summed squared distance.
double assign_nearest_serial(const Matrix& points, const Matrix& centroids,
                             std::span<int> labels);
double assign_nearest_omp(const Matrix& points, const Matrix& centroids,
                          std::span<int> labels);

} // namespace fcmsc::kernels
