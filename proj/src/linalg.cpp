#include "fcmsc/linalg.hpp"

#include "fcmsc/errors.hpp"
#include "fcmsc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace fcmsc {

namespace {

using Svd = Eigen::BDCSVD<Matrix>;

Svd thin_svd(const Matrix& m, const char* who) {
    Svd svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        std::ostringstream os;
        os << who << ": SVD of " << m.rows() << "x" << m.cols()
           << " matrix did not converge (Eigen status " << svd.info() << ")";
        throw NumericalError(os.str());
    }
    return svd;
}

} // namespace

void require_finite(const Matrix& m, const char* what) {
    if (m.size() == 0)
        throw InvalidInput(std::string(what) + ": empty matrix");
    if (!m.allFinite())
        throw InvalidInput(std::string(what) + ": non-finite entry");
}

double l21_norm(const Matrix& m) {
    require_finite(m, "l21_norm");
    return m.colwise().norm().sum();
}

double nuclear_norm(const Matrix& m) {
    require_finite(m, "nuclear_norm");
    return thin_svd(m, "nuclear_norm").singularValues().sum();
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix col_l21_prox(const Matrix& t, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw InvalidParameter("col_l21_prox: tau must be positive, got " +
                               std::to_string(tau));
    require_finite(t, "col_l21_prox");
    Matrix out = t;
    kernels::col_shrink_omp(out, tau);
    return out;
}

Matrix svt(const Matrix& t, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw InvalidParameter("svt: tau must be positive, got " +
                               std::to_string(tau));
    require_finite(t, "svt");
    const Svd svd = thin_svd(t, "svt");
    const Vector& sigma = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > tau) ++rank;
    if (rank == 0) return Matrix::Zero(t.rows(), t.cols());
    const Vector shrunk = sigma.head(rank).array() - tau;
    return svd.matrixU().leftCols(rank) * shrunk.asDiagonal() *
           svd.matrixV().leftCols(rank).transpose();
}

SymmetricEigen SymmetricEigen::of(const Matrix& sym) {
    if (sym.rows() != sym.cols())
        throw ShapeError("symmetric eigendecomposition needs a square matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric eigendecomposition did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix solve_sylvester(const SymmetricEigen& a, const SymmetricEigen& b,
                       const Matrix& rhs, SingularPairs policy) {
    const Eigen::Index p = a.values.size();
    const Eigen::Index q = b.values.size();
    if (rhs.rows() != p || rhs.cols() != q) {
        std::ostringstream os;
        os << "solve_sylvester: RHS is " << rhs.rows() << "x" << rhs.cols()
           << ", expected " << p << "x" << q;
        throw ShapeError(os.str());
    }
    const double scale = std::max({a.values.cwiseAbs().maxCoeff(),
                                   b.values.cwiseAbs().maxCoeff(), 1.0});
    const double floor = kSylvesterPairTol * scale;
    const Matrix m = a.vectors.transpose() * rhs * b.vectors;
    Matrix y;
    kernels::spectral_divide_omp(m, a.values, b.values, y);
    for (Eigen::Index j = 0; j < q; ++j) {
        for (Eigen::Index i = 0; i < p; ++i) {
            const double s = a.values(i) + b.values(j);
            if (std::abs(s) >= floor) continue;
            if (policy == SingularPairs::min_norm) {
                y(i, j) = 0.0;
            } else {
                std::ostringstream os;
                os << "solve_sylvester: alpha[" << i << "] + beta[" << j
                   << "] = " << a.values(i) << " + " << b.values(j)
                   << " is below " << floor;
                throw IllConditioned(os.str(), i, j);
            }
        }
    }
    return a.vectors * y * b.vectors.transpose();
}

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& rhs,
                       SingularPairs policy) {
    require_finite(a, "solve_sylvester(A)");
    require_finite(b, "solve_sylvester(B)");
    require_finite(rhs, "solve_sylvester(RHS)");
    const auto symmetric = [](const Matrix& m) {
        return m.rows() == m.cols() &&
               max_abs(m - m.transpose()) <= 1e-10 * std::max(max_abs(m), 1.0);
    };
    if (!symmetric(a) || !symmetric(b))
        throw InvalidInput("solve_sylvester: A and B must be symmetric");
    return solve_sylvester(SymmetricEigen::of(a), SymmetricEigen::of(b), rhs, policy);
}

} // namespace fcmsc
