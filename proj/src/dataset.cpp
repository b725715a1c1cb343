#include "fcmsc/dataset.hpp"

#include "fcmsc/csv.hpp"
#include "fcmsc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace fcmsc {

int MultiViewDataset::clusters() const {
    if (!labels || labels->empty()) return 0;
    return *std::max_element(labels->begin(), labels->end()) + 1;
}

void MultiViewDataset::validate() const {
    if (views.empty()) throw InvalidInput("dataset has no views");
    const Eigen::Index n = views.front().cols();
    for (std::size_t i = 0; i < views.size(); ++i) {
        if (views[i].rows() < 1 || views[i].cols() < 1)
            throw InvalidInput("view " + std::to_string(i) + " is empty");
        if (views[i].cols() != n) {
            std::ostringstream os;
            os << "view " << i << " has " << views[i].cols()
               << " samples, view 0 has " << n;
            throw ShapeError(os.str());
        }
        require_finite(views[i], "dataset view");
    }
    if (labels) {
        if (static_cast<Eigen::Index>(labels->size()) != n)
            throw ShapeError("label count " + std::to_string(labels->size()) +
                             " differs from sample count " + std::to_string(n));
        validate_labels(*labels, clusters());
    }
}

std::vector<Matrix> JointRepresentation::split() const {
    std::vector<Matrix> out;
    out.reserve(view_offsets.size());
    for (const ViewRange& r : view_offsets)
        out.emplace_back(x.middleRows(r.begin, r.size()));
    return out;
}

void validate_labels(const Labels& labels, int m) {
    if (m < 1) throw LabelRangeError("cluster count must be positive");
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (std::size_t j = 0; j < labels.size(); ++j) {
        const int l = labels[j];
        if (l < 0 || l >= m) {
            std::ostringstream os;
            os << "label " << l << " at sample " << j << " outside [0, " << m << ")";
            throw LabelRangeError(os.str());
        }
        seen[static_cast<std::size_t>(l)] = true;
    }
    for (int c = 0; c < m; ++c)
        if (!seen[static_cast<std::size_t>(c)])
            throw LabelRangeError("cluster id " + std::to_string(c) + " never occurs");
}

Labels relabel_first_appearance(const std::vector<long long>& raw) {
    std::unordered_map<long long, int> ids;
    Labels out;
    out.reserve(raw.size());
    for (long long v : raw) {
        auto [it, inserted] = ids.try_emplace(v, static_cast<int>(ids.size()));
        out.push_back(it->second);
    }
    return out;
}

MultiViewDataset load_views(const std::vector<std::filesystem::path>& paths,
                            const std::optional<std::filesystem::path>& label_path,
                            const LoadOptions& options) {
    if (paths.empty()) throw InvalidInput("load_views: no view files given");
    MultiViewDataset ds;
    for (const auto& p : paths) {
        Matrix samples = csv::read_matrix(p, options.header);
        if (!ds.views.empty() && samples.rows() != ds.views.front().cols()) {
            std::ostringstream os;
            os << "sample count mismatch: " << paths.front().string() << " has "
               << ds.views.front().cols() << " rows, " << p.string() << " has "
               << samples.rows();
            throw ShapeError(os.str());
        }
        ds.views.emplace_back(samples.transpose());
        ds.names.push_back(p.stem().string());
    }
    if (label_path) {
        Labels labels = relabel_first_appearance(csv::read_integers(*label_path, options.header));
        if (static_cast<Eigen::Index>(labels.size()) != ds.samples()) {
            std::ostringstream os;
            os << "label file " << label_path->string() << " has " << labels.size()
               << " rows, views have " << ds.samples();
            throw ShapeError(os.str());
        }
        if (options.expected_clusters) validate_labels(labels, *options.expected_clusters);
        ds.labels = std::move(labels);
    }
    ds.validate();
    return ds;
}

Matrix normalize_view(const Matrix& view) {
    require_finite(view, "normalize_view");
    Matrix out(view.rows(), view.cols());
    for (Eigen::Index f = 0; f < view.rows(); ++f) {
        const double lo = view.row(f).minCoeff();
        const double hi = view.row(f).maxCoeff();
        const double range = hi - lo;
        if (range > 0.0) {
            out.row(f) = (view.row(f).array() - lo) / range;
        } else {
            out.row(f).setZero();
        }
    }
    return out;
}

JointRepresentation concatenate(const MultiViewDataset& dataset, bool normalize) {
    dataset.validate();
    JointRepresentation joint;
    Eigen::Index rows = 0;
    for (const Matrix& v : dataset.views) {
        joint.view_offsets.push_back({rows, rows + v.rows()});
        rows += v.rows();
    }
    joint.x.resize(rows, dataset.samples());
    for (std::size_t i = 0; i < dataset.views.size(); ++i) {
        const ViewRange& r = joint.view_offsets[i];
        if (normalize) {
            joint.x.middleRows(r.begin, r.size()) = normalize_view(dataset.views[i]);
        } else {
            joint.x.middleRows(r.begin, r.size()) = dataset.views[i];
        }
    }
    return joint;
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id)};
    return std::mt19937_64(seq);
}

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
    return m;
}

/// First `count` entries of a seeded shuffle of 0..n-1.
std::vector<int> pick(int n, int count, std::mt19937_64& rng) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < count; ++k) {
        std::uniform_int_distribution<int> u(k, n - 1);
        std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(u(rng))]);
    }
    idx.resize(static_cast<std::size_t>(count));
    return idx;
}

} // namespace

MultiViewDataset generate_synthetic(const SyntheticSpec& spec) {
    const auto bad = [](const std::string& what) {
        throw InvalidParameter("generate_synthetic: " + what);
    };
    if (spec.clusters < 1) bad("clusters must be >= 1");
    if (spec.per_cluster < 1) bad("per_cluster must be >= 1");
    if (spec.views < 1) bad("views must be >= 1");
    if (static_cast<int>(spec.dims.size()) != spec.views)
        bad("dims must list one dimension per view");
    if (spec.subspace_rank < 1) bad("subspace_rank must be >= 1");
    for (int d : spec.dims)
        if (spec.subspace_rank >= d) bad("subspace_rank must be below every view dimension");
    if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) bad("noise must be >= 0");
    for (double f : {spec.cluster_corruption, spec.sample_corruption})
        if (!(f >= 0.0 && f <= 1.0)) bad("corruption fractions must lie in [0, 1]");
    if (spec.cluster_corruption > 0.0 && spec.clusters < 2)
        bad("cluster corruption needs at least two clusters");

    const int m = spec.clusters;
    const int n = m * spec.per_cluster;
    const int r = spec.subspace_rank;

    MultiViewDataset ds;
    ds.labels = Labels(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) (*ds.labels)[static_cast<std::size_t>(j)] = j / spec.per_cluster;

    // bases[i][c]: d_i x r orthonormal; coef[i]: r x n; noise[i]: d_i x n
    std::mt19937_64 base_rng = stream(spec.seed, 0);
    std::vector<std::vector<Matrix>> bases(static_cast<std::size_t>(spec.views));
    std::vector<Matrix> coef;
    std::vector<Matrix> noise;
    for (int i = 0; i < spec.views; ++i) {
        const int d = spec.dims[static_cast<std::size_t>(i)];
        for (int c = 0; c < m; ++c) {
            Eigen::HouseholderQR<Matrix> qr(gaussian(d, r, base_rng));
            bases[static_cast<std::size_t>(i)].push_back(
                qr.householderQ() * Matrix::Identity(d, r));
        }
        coef.push_back(gaussian(r, n, base_rng));
        noise.push_back(gaussian(d, n, base_rng));
    }

    // source[i][j]: the cluster whose basis generates view i of sample j
    std::vector<Labels> source(static_cast<std::size_t>(spec.views), *ds.labels);
    std::mt19937_64 cluster_rng = stream(spec.seed, 1);
    const int relocated = static_cast<int>(std::floor(spec.cluster_corruption * n));
    for (int j : pick(n, relocated, cluster_rng)) {
        std::uniform_int_distribution<int> view_pick(0, spec.views - 1);
        std::uniform_int_distribution<int> shift(1, m - 1);
        const int i = view_pick(cluster_rng);
        const int truth = (*ds.labels)[static_cast<std::size_t>(j)];
        source[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (truth + shift(cluster_rng)) % m;
    }

    for (int i = 0; i < spec.views; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        Matrix v(spec.dims[iu], n);
        for (int j = 0; j < n; ++j) {
            const auto c = static_cast<std::size_t>(source[iu][static_cast<std::size_t>(j)]);
            v.col(j) = bases[iu][c] * coef[iu].col(j);
            if (spec.noise > 0.0) v.col(j) += spec.noise * noise[iu].col(j);
        }
        ds.views.push_back(std::move(v));
        ds.names.push_back("view" + std::to_string(i));
    }

    std::mt19937_64 sample_rng = stream(spec.seed, 2);
    const int replaced = static_cast<int>(std::floor(spec.sample_corruption * n));
    const std::vector<int> corrupted = pick(n, replaced, sample_rng);
    for (Matrix& v : ds.views) {
        const double rms = std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
        for (int j : corrupted) {
            Matrix g = gaussian(v.rows(), 1, sample_rng);
            v.col(j) = 5.0 * rms * g;
        }
    }
    return ds;
}

} // namespace fcmsc
