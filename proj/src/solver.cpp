#include "fcmsc/solver.hpp"

#include "fcmsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fcmsc {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidParameter(std::string(name) + " must be positive, got " +
                               std::to_string(v));
}

bool all_finite(const SolverState& s) {
    return s.z.allFinite() && s.c.allFinite() && s.ex.allFinite() && s.ez.allFinite() &&
           s.j.allFinite() && s.y1.allFinite() && s.y2.allFinite() && s.y3.allFinite() &&
           std::isfinite(s.mu);
}

SolverState run_alm(const Matrix& x, const SolverConfig& config, const GraphTerm* graph,
                    Mode mode, std::span<const ViewGraph> laplacians) {
    config.validate();
    require_finite(x, "fcmsc_solve");
    const Eigen::Index n = x.cols();

    const Matrix xtx = x.transpose() * x;
    const SymmetricEigen tza = SymmetricEigen::of(xtx + Matrix::Identity(n, n));

    SolverState s = initial_state(x.rows(), n, config);
    for (int k = 1; k <= config.max_iter; ++k) {
        const double mu = s.mu;
        s.ex = update_ex(x, s.z, s.y1, mu);
        s.z = update_z(x, xtx, tza, s.c, s.ex, s.ez, s.y1, s.y2, mu);
        s.ez = update_ez(s.z, s.c, s.y2, mu, config.lambda1);
        s.c = update_c(s.z, s.ez, s.j, s.y2, s.y3, mu, graph);
        s.j = update_j(s.c, s.y3, mu, config.lambda2);
        s = update_multipliers(std::move(s), x, config);
        s.iter = k;
        if (!all_finite(s))
            throw Divergence("ALM produced a non-finite value at iteration " +
                                 std::to_string(k) + "; last finite iterate was " +
                                 std::to_string(k - 1),
                             k - 1);
        s.objective = objective_value(s, config, mode, laplacians);
        s.history.push_back({k, mu, s.residuals, s.objective});
        if (s.residuals.max() < config.epsilon) {
            s.converged = true;
            break;
        }
    }
    return s;
}

} // namespace

void SolverConfig::validate() const {
    require_positive(lambda1, "lambda1");
    require_positive(lambda2, "lambda2");
    if (!(lambda3 >= 0.0) || !std::isfinite(lambda3))
        throw InvalidParameter("lambda3 must be nonnegative");
    require_positive(mu0, "mu0");
    require_positive(mu_max, "mu_max");
    if (mu0 > mu_max) throw InvalidParameter("mu0 must not exceed mu_max");
    if (!(rho > 1.0) || !std::isfinite(rho)) throw InvalidParameter("rho must exceed 1");
    require_positive(epsilon, "epsilon");
    if (max_iter < 1) throw InvalidParameter("max_iter must be >= 1");
    if (!(z_init_scale >= 0.0) || !std::isfinite(z_init_scale))
        throw InvalidParameter("z_init_scale must be nonnegative");
}

double Residuals::max() const { return std::max({r1, r2, r3}); }

GraphTerm GraphTerm::from(std::span<const ViewGraph> graphs, double lambda3) {
    if (graphs.empty()) throw InvalidInput("graph term needs at least one Laplacian");
    const Eigen::Index n = graphs.front().l.rows();
    GraphTerm g;
    g.lambda3 = lambda3;
    g.penalty = Matrix::Zero(n, n);
    for (const ViewGraph& vg : graphs) {
        if (vg.l.rows() != n || vg.l.cols() != n)
            throw ShapeError("graph term: Laplacians differ in size");
        g.penalty += vg.l.transpose() + vg.l;
    }
    g.penalty *= lambda3;
    return g;
}

Matrix update_ex(const Matrix& x, const Matrix& z, const Matrix& y1, double mu) {
    require_positive(mu, "mu");
    return col_l21_prox(x - x * z + y1 / mu, 1.0 / mu);
}

Matrix update_ez(const Matrix& z, const Matrix& c, const Matrix& y2, double mu,
                 double lambda1) {
    require_positive(mu, "mu");
    require_positive(lambda1, "lambda1");
    return col_l21_prox(z - z * c + y2 / mu, lambda1 / mu);
}

Matrix update_j(const Matrix& c, const Matrix& y3, double mu, double lambda2) {
    require_positive(mu, "mu");
    require_positive(lambda2, "lambda2");
    return svt(c + y3 / mu, lambda2 / mu);
}

Matrix update_c(const Matrix& z, const Matrix& ez, const Matrix& j, const Matrix& y2,
                const Matrix& y3, double mu, const GraphTerm* graph) {
    require_positive(mu, "mu");
    const Eigen::Index n = z.cols();
    const Matrix ztz = z.transpose() * z;
    Matrix tca = mu * (Matrix::Identity(n, n) + ztz);
    if (graph && graph->lambda3 != 0.0) {
        if (graph->penalty.rows() != n || graph->penalty.cols() != n)
            throw ShapeError("update_c: graph penalty does not match Z");
        tca += graph->penalty;
    }
    const Matrix tcb = mu * j - y3 + z.transpose() * y2 + mu * (ztz - z.transpose() * ez);
    Eigen::LLT<Matrix> llt(tca);
    if (llt.info() != Eigen::Success || llt.rcond() < 1e-14) {
        std::ostringstream os;
        os << "update_c: C-system is numerically singular (rcond "
           << (llt.info() == Eigen::Success ? llt.rcond() : 0.0) << ")";
        throw IllConditioned(os.str());
    }
    return llt.solve(tcb);
}

Matrix update_z(const Matrix& x, const Matrix& xtx, const SymmetricEigen& tza,
                const Matrix& c, const Matrix& ex, const Matrix& ez, const Matrix& y1,
                const Matrix& y2, double mu) {
    require_positive(mu, "mu");
    const Matrix ct = c.transpose();
    const Matrix tzb = c * ct - c - ct;
    const Matrix tzc = xtx - x.transpose() * ex + ez - ez * ct +
                       (x.transpose() * y1) / mu + (y2 * ct - y2) / mu;
    // Both operators are PSD once combined and T_ZC = X^T(.) + (.)(I - C^T)
    // lies in their range, so singular pairs carry no information.
    return solve_sylvester(tza, SymmetricEigen::of(tzb), tzc, SingularPairs::min_norm);
}

Matrix update_z(const Matrix& x, const Matrix& c, const Matrix& ex, const Matrix& ez,
                const Matrix& y1, const Matrix& y2, double mu) {
    const Eigen::Index n = x.cols();
    const Matrix xtx = x.transpose() * x;
    return update_z(x, xtx, SymmetricEigen::of(xtx + Matrix::Identity(n, n)), c, ex, ez,
                    y1, y2, mu);
}

Residuals residuals(const SolverState& s, const Matrix& x) {
    return {max_abs(x - x * s.z - s.ex), max_abs(s.z - s.z * s.c - s.ez),
            max_abs(s.c - s.j)};
}

SolverState update_multipliers(SolverState s, const Matrix& x, const SolverConfig& config) {
    const Matrix g1 = x - x * s.z - s.ex;
    const Matrix g2 = s.z - s.z * s.c - s.ez;
    const Matrix g3 = s.c - s.j;
    s.y1 += s.mu * g1;
    s.y2 += s.mu * g2;
    s.y3 += s.mu * g3;
    s.mu = std::min(config.rho * s.mu, config.mu_max);
    s.residuals = {max_abs(g1), max_abs(g2), max_abs(g3)};
    return s;
}

double objective_value(const SolverState& s, const SolverConfig& config, Mode mode,
                       std::span<const ViewGraph> laplacians) {
    const auto l21 = [](const Matrix& m) { return m.colwise().norm().sum(); };
    double value = l21(s.ex) + config.lambda1 * l21(s.ez);
    if (s.j.size() > 0) value += config.lambda2 * nuclear_norm(s.j);
    if (mode == Mode::grfcmsc && config.lambda3 != 0.0) {
        double reg = 0.0;
        for (const ViewGraph& g : laplacians) reg += (s.c.transpose() * g.l * s.c).trace();
        value += config.lambda3 * reg;
    }
    return value;
}

SolverState initial_state(Eigen::Index d, Eigen::Index n, const SolverConfig& config) {
    SolverState s;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u(0.0, config.z_init_scale);
    s.z.resize(n, n);
    for (Eigen::Index col = 0; col < n; ++col)
        for (Eigen::Index row = 0; row < n; ++row)
            s.z(row, col) = config.z_init_scale > 0.0 ? u(rng) : 0.0;
    s.c = s.ez = s.j = s.y2 = s.y3 = Matrix::Zero(n, n);
    s.ex = s.y1 = Matrix::Zero(d, n);
    s.mu = config.mu0;
    return s;
}

SolverState fcmsc_solve(const Matrix& x, const SolverConfig& config) {
    return run_alm(x, config, nullptr, Mode::fcmsc, {});
}

SolverState fcmsc_solve(const JointRepresentation& joint, const SolverConfig& config) {
    return fcmsc_solve(joint.x, config);
}

SolverState grfcmsc_solve(const JointRepresentation& joint,
                          std::span<const ViewGraph> laplacians,
                          const SolverConfig& config) {
    if (laplacians.size() != joint.view_offsets.size())
        throw InvalidInput("grfcmsc_solve: " + std::to_string(laplacians.size()) +
                           " Laplacians for " + std::to_string(joint.view_offsets.size()) +
                           " views");
    config.validate();
    for (const ViewGraph& g : laplacians)
        if (g.l.rows() != joint.x.cols() || g.l.cols() != joint.x.cols())
            throw ShapeError("grfcmsc_solve: Laplacian size differs from sample count");
    const GraphTerm graph = GraphTerm::from(laplacians, config.lambda3);
    return run_alm(joint.x, config, &graph, Mode::grfcmsc, laplacians);
}

LrrResult lrr_solve(const Matrix& x, double lambda, const SolverConfig& config) {
    config.validate();
    require_positive(lambda, "lambda");
    require_finite(x, "lrr_solve");
    const Eigen::Index n = x.cols();
    const Matrix xtx = x.transpose() * x;
    const Eigen::LLT<Matrix> normal(xtx + Matrix::Identity(n, n));

    Matrix z = Matrix::Zero(n, n);
    Matrix j = Matrix::Zero(n, n);
    Matrix e = Matrix::Zero(x.rows(), n);
    Matrix y1 = Matrix::Zero(x.rows(), n);
    Matrix y2 = Matrix::Zero(n, n);
    double mu = config.mu0;

    LrrResult out;
    for (int k = 1; k <= config.max_iter; ++k) {
        j = svt(z + y2 / mu, lambda / mu);
        z = normal.solve(xtx - x.transpose() * e + j + (x.transpose() * y1 - y2) / mu);
        e = col_l21_prox(x - x * z + y1 / mu, 1.0 / mu);
        const Matrix g1 = x - x * z - e;
        const Matrix g2 = z - j;
        y1 += mu * g1;
        y2 += mu * g2;
        mu = std::min(config.rho * mu, config.mu_max);
        out.iters = k;
        out.residuals = {max_abs(g1), max_abs(g2), 0.0};
        if (!z.allFinite() || !e.allFinite() || !y1.allFinite() || !y2.allFinite())
            throw Divergence("LRR produced a non-finite value at iteration " +
                                 std::to_string(k),
                             k - 1);
        if (out.residuals.max() < config.epsilon) {
            out.converged = true;
            break;
        }
    }
    out.z = std::move(z);
    out.ex = std::move(e);
    return out;
}

} // namespace fcmsc
