#pragma once

// Inexact augmented-Lagrangian solvers for LRR, FCMSC and graph-regularized
// FCMSC.
//
// FCMSC solves
//
//   min ||E_x||_{2,1} + lambda1 ||E_z||_{2,1} + lambda2 ||J||_*
//   s.t. X = XZ + E_x,  Z = ZC + E_z,  C = J
//
// by sweeping E_x, Z, E_z, C, J in that order, then taking a multiplier
// ascent step and growing mu <- min(rho * mu, mu_max). The graph-regularized
// variant adds lambda3 * sum_i Tr(C^T L_i C), which only changes the C step.

#include "fcmsc/dataset.hpp"
#include "fcmsc/graph.hpp"
#include "fcmsc/linalg.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fcmsc {

struct SolverConfig {
    double lambda1 = 1.0;
    double lambda2 = 0.6;
    double lambda3 = 0.01;  ///< graph weight; ignored by plain FCMSC
    double mu0 = 1e-4;
    double mu_max = 1e6;
    double rho = 1.1;
    double epsilon = 1e-6;
    int max_iter = 500;
    std::uint64_t seed = 0;
    double z_init_scale = 0.01;  ///< Z starts i.i.d. uniform on [0, z_init_scale]

    /// Throws InvalidParameter on a broken invariant.
    void validate() const;
};

/// Constraint violations in the infinity norm:
/// r1 = ||X - XZ - E_x||, r2 = ||Z - ZC - E_z||, r3 = ||C - J||.
struct Residuals {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double max() const;
};

struct IterationRecord {
    int iter = 0;
    double mu = 0.0;  ///< penalty used during this iteration
    Residuals residuals;
    double objective = 0.0;
};

struct SolverState {
    Matrix z, c, ex, ez, j;
    Matrix y1, y2, y3;
    double mu = 0.0;
    int iter = 0;
    Residuals residuals;
    double objective = 0.0;
    bool converged = false;
    std::vector<IterationRecord> history;

    /// Cluster-specific corruption X * E_z in feature space.
    Matrix cluster_corruption(const Matrix& x) const { return x * ez; }
};

struct LrrResult {
    Matrix z;
    Matrix ex;
    int iters = 0;
    bool converged = false;
    Residuals residuals;  ///< r1 and r2 = ||Z - J||; r3 unused
};

/// Precomputed lambda3 * sum_i (L_i^T + L_i) for the C update.
struct GraphTerm {
    Matrix penalty;
    double lambda3 = 0.0;

    static GraphTerm from(std::span<const ViewGraph> graphs, double lambda3);
};

enum class Mode { fcmsc, grfcmsc };

// Subproblem updates. Each is the exact minimizer of the augmented
// Lagrangian in one block with the others fixed.

Matrix update_ex(const Matrix& x, const Matrix& z, const Matrix& y1, double mu);
Matrix update_ez(const Matrix& z, const Matrix& c, const Matrix& y2, double mu,
                 double lambda1);
Matrix update_j(const Matrix& c, const Matrix& y3, double mu, double lambda2);

/// Solves mu (I + Z^T Z) C [+ graph penalty C] = mu J - Y3 + Z^T Y2 + mu (Z^T Z - Z^T E_z).
Matrix update_c(const Matrix& z, const Matrix& ez, const Matrix& j, const Matrix& y2,
                const Matrix& y3, double mu, const GraphTerm* graph = nullptr);

/// Solves the Sylvester equation (X^T X + I) Z + Z (C C^T - C - C^T) = T_ZC.
Matrix update_z(const Matrix& x, const Matrix& c, const Matrix& ex, const Matrix& ez,
                const Matrix& y1, const Matrix& y2, double mu);

/// Same as above with X^T X and the eigendecomposition of X^T X + I reused.
Matrix update_z(const Matrix& x, const Matrix& xtx, const SymmetricEigen& tza,
                const Matrix& c, const Matrix& ex, const Matrix& ez, const Matrix& y1,
                const Matrix& y2, double mu);

/// Multiplier ascent and mu <- min(rho * mu, mu_max). Also refreshes
/// `residuals` from the current primal blocks.
SolverState update_multipliers(SolverState state, const Matrix& x,
                               const SolverConfig& config);

Residuals residuals(const SolverState& state, const Matrix& x);

double objective_value(const SolverState& state, const SolverConfig& config, Mode mode,
                       std::span<const ViewGraph> laplacians = {});

/// Zero blocks, mu = mu0 and Z drawn from the seeded uniform distribution.
SolverState initial_state(Eigen::Index d, Eigen::Index n, const SolverConfig& config);

SolverState fcmsc_solve(const JointRepresentation& joint, const SolverConfig& config);
SolverState fcmsc_solve(const Matrix& x, const SolverConfig& config);

/// Throws InvalidInput unless there is exactly one graph per view.
SolverState grfcmsc_solve(const JointRepresentation& joint,
                          std::span<const ViewGraph> laplacians,
                          const SolverConfig& config);

/// Plain low-rank representation: min ||E||_{2,1} + lambda ||Z||_* s.t.
/// X = XZ + E, with an auxiliary J = Z for the nuclear term.
LrrResult lrr_solve(const Matrix& x, double lambda, const SolverConfig& config);

} // namespace fcmsc
