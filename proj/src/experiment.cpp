#include "fcmsc/experiment.hpp"

#include "fcmsc/csv.hpp"
#include "fcmsc/errors.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fcmsc {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- config io

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

void read_solver(const json& j, SolverConfig& s, const std::string& where) {
    reject_unknown(j, {"lambda1", "lambda2", "lambda3", "mu0", "mu_max", "rho", "epsilon",
                       "max_iter", "z_init_scale"},
                   where);
    read(j, "lambda1", s.lambda1, where);
    read(j, "lambda2", s.lambda2, where);
    read(j, "lambda3", s.lambda3, where);
    read(j, "mu0", s.mu0, where);
    read(j, "mu_max", s.mu_max, where);
    read(j, "rho", s.rho, where);
    read(j, "epsilon", s.epsilon, where);
    read(j, "max_iter", s.max_iter, where);
    read(j, "z_init_scale", s.z_init_scale, where);
}

json solver_to_json(const SolverConfig& s) {
    return {{"lambda1", s.lambda1}, {"lambda2", s.lambda2},   {"lambda3", s.lambda3},
            {"mu0", s.mu0},         {"mu_max", s.mu_max},     {"rho", s.rho},
            {"epsilon", s.epsilon}, {"max_iter", s.max_iter}, {"z_init_scale", s.z_init_scale}};
}

json metrics_to_json(const MetricTriple& m) {
    return {{"nmi", m.nmi}, {"acc", m.acc}, {"fscore", m.fscore}};
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw InvalidInput(std::string("state file: ") + what + " is not a matrix");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw InvalidInput(std::string("state file: ragged rows in ") + what);
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

// ------------------------------------------------------------------ trials

struct TrialData {
    MultiViewDataset dataset;
    JointRepresentation joint;
    std::vector<Matrix> normalized;  // per view, d_i x n
    std::vector<ViewGraph> graphs;   // filled on demand
};

TrialData prepare(MultiViewDataset ds) {
    TrialData t;
    t.joint = concatenate(ds, true);
    t.normalized = t.joint.split();
    t.dataset = std::move(ds);
    return t;
}

Labels cluster_coefficients(const Matrix& c, int m, std::uint64_t seed,
                            const KMeansOptions& km) {
    return spectral_cluster(build_affinity(c), m, seed, km).labels;
}

void run_method(Method method, const ExperimentConfig& cfg, TrialData& data, int m,
                std::uint64_t seed, TrialOutcome& out) {
    SolverConfig sc = cfg.solver_for(method);
    sc.seed = seed;
    const Labels& truth = *data.dataset.labels;
    switch (method) {
    case Method::lrr_bsv: {
        double best = -1.0;
        for (std::size_t i = 0; i < data.normalized.size(); ++i) {
            const LrrResult r = lrr_solve(data.normalized[i], sc.lambda2, sc);
            const Labels pred = cluster_coefficients(r.z, m, seed, cfg.kmeans);
            const MetricTriple mt = evaluate(pred, truth);
            if (mt.nmi > best) {
                best = mt.nmi;
                out.metrics = mt;
                out.best_view = static_cast<int>(i);
                out.iterations = r.iters;
                out.converged = r.converged;
                out.residuals = r.residuals;
            }
        }
        break;
    }
    case Method::lrr_fc: {
        const LrrResult r = lrr_solve(data.joint.x, sc.lambda2, sc);
        out.metrics = evaluate(cluster_coefficients(r.z, m, seed, cfg.kmeans), truth);
        out.iterations = r.iters;
        out.converged = r.converged;
        out.residuals = r.residuals;
        break;
    }
    case Method::fcmsc:
    case Method::grfcmsc: {
        SolverState s;
        if (method == Method::fcmsc) {
            s = fcmsc_solve(data.joint, sc);
        } else {
            if (data.graphs.empty())
                for (const Matrix& v : data.normalized)
                    data.graphs.push_back(laplacian(knn_adjacency(v, cfg.graph)));
            s = grfcmsc_solve(data.joint, data.graphs, sc);
        }
        out.metrics = evaluate(cluster_coefficients(s.c, m, seed, cfg.kmeans), truth);
        out.iterations = s.iter;
        out.converged = s.converged;
        out.residuals = s.residuals;
        if (cfg.save_states && cfg.out_dir) {
            std::filesystem::create_directories(*cfg.out_dir);
            save_state(s, *cfg.out_dir / ("state_" + to_string(method) + "_trial" +
                                          std::to_string(out.trial) + ".json"));
        }
        break;
    }
    }
}

struct TrialSlot {
    std::vector<TrialOutcome> outcomes;  // one per method
    std::vector<std::string> errors;     // empty string = ok
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace

// ------------------------------------------------------------------ methods

std::string to_string(Method m) {
    switch (m) {
    case Method::lrr_bsv: return "LRR_BSV";
    case Method::lrr_fc: return "LRR_FC";
    case Method::fcmsc: return "FCMSC";
    case Method::grfcmsc: return "grFCMSC";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    for (Method m : {Method::lrr_bsv, Method::lrr_fc, Method::fcmsc, Method::grfcmsc})
        if (to_string(m) == name) return m;
    throw ConfigError("unknown method '" + name + "' (expected LRR_BSV, LRR_FC, FCMSC, grFCMSC)");
}

SolverConfig ExperimentConfig::solver_for(Method m) const {
    const auto it = method_solver.find(m);
    return it == method_solver.end() ? solver : it->second;
}

void ExperimentConfig::validate() const {
    if (files.has_value() == synthetic.has_value())
        throw ConfigError("exactly one data source (files or synthetic) is required");
    if (files && files->views.empty()) throw ConfigError("data.views is empty");
    if (files && !files->labels)
        throw ConfigError("data.labels is required to score clusterings");
    if (methods.empty()) throw ConfigError("method list is empty");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (clusters != 0 && clusters < 2) throw ConfigError("clusters must be >= 2");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (graph.k < 1) throw ConfigError("graph.k must be >= 1");
    try {
        solver.validate();
        for (const auto& [m, s] : method_solver) s.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("solver: ") + e.what());
    }
}

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    reject_unknown(j, {"data", "methods", "solver", "method_solver", "graph", "kmeans",
                       "clusters", "trials", "seed", "out", "threads", "save_states"},
                   "config");
    ExperimentConfig cfg;
    const auto resolve = [&](const std::string& p) {
        const std::filesystem::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };

    if (!j.contains("data")) throw ConfigError("config: 'data' is required");
    const json& data = j.at("data");
    reject_unknown(data, {"views", "labels", "header", "synthetic"}, "data");
    if (data.contains("synthetic")) {
        if (data.contains("views")) throw ConfigError("data: give either views or synthetic");
        const json& s = data.at("synthetic");
        reject_unknown(s, {"clusters", "per_cluster", "views", "dims", "rank", "noise",
                           "cluster_corruption", "sample_corruption", "seed", "resample"},
                       "data.synthetic");
        SyntheticSource src;
        read(s, "clusters", src.spec.clusters, "data.synthetic");
        read(s, "per_cluster", src.spec.per_cluster, "data.synthetic");
        read(s, "views", src.spec.views, "data.synthetic");
        read(s, "dims", src.spec.dims, "data.synthetic");
        read(s, "rank", src.spec.subspace_rank, "data.synthetic");
        read(s, "noise", src.spec.noise, "data.synthetic");
        read(s, "cluster_corruption", src.spec.cluster_corruption, "data.synthetic");
        read(s, "sample_corruption", src.spec.sample_corruption, "data.synthetic");
        read(s, "seed", src.spec.seed, "data.synthetic");
        read(s, "resample", src.resample, "data.synthetic");
        if (!s.contains("dims"))
            src.spec.dims.assign(static_cast<std::size_t>(std::max(src.spec.views, 0)), 20);
        cfg.synthetic = src;
    } else {
        FileSource f;
        std::vector<std::string> views;
        read(data, "views", views, "data");
        for (const auto& v : views) f.views.push_back(resolve(v));
        if (data.contains("labels")) f.labels = resolve(data.at("labels").get<std::string>());
        read(data, "header", f.header, "data");
        cfg.files = f;
    }

    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto& name : j.at("methods")) cfg.methods.push_back(parse_method(name.get<std::string>()));
    }
    if (j.contains("solver")) read_solver(j.at("solver"), cfg.solver, "solver");
    if (j.contains("method_solver")) {
        const json& ms = j.at("method_solver");
        if (!ms.is_object()) throw ConfigError("method_solver: expected an object");
        for (const auto& [name, overrides] : ms.items()) {
            SolverConfig s = cfg.solver;
            read_solver(overrides, s, "method_solver." + name);
            cfg.method_solver[parse_method(name)] = s;
        }
    }
    if (j.contains("graph")) {
        const json& g = j.at("graph");
        reject_unknown(g, {"k", "sigma"}, "graph");
        read(g, "k", cfg.graph.k, "graph");
        if (g.contains("sigma")) {
            const json& s = g.at("sigma");
            if (s.is_string() && s.get<std::string>() == "auto") {
                cfg.graph.sigma.reset();
            } else if (s.is_number()) {
                cfg.graph.sigma = s.get<double>();
            } else {
                throw ConfigError("graph.sigma: expected a number or \"auto\"");
            }
        }
    }
    if (j.contains("kmeans")) {
        const json& k = j.at("kmeans");
        reject_unknown(k, {"restarts", "max_iter", "tol"}, "kmeans");
        read(k, "restarts", cfg.kmeans.restarts, "kmeans");
        read(k, "max_iter", cfg.kmeans.max_iter, "kmeans");
        read(k, "tol", cfg.kmeans.tol, "kmeans");
    }
    read(j, "clusters", cfg.clusters, "config");
    read(j, "trials", cfg.trials, "config");
    read(j, "seed", cfg.base_seed, "config");
    read(j, "threads", cfg.threads, "config");
    read(j, "save_states", cfg.save_states, "config");
    if (j.contains("out")) cfg.out_dir = resolve(j.at("out").get<std::string>());
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    if (cfg.files) {
        json views = json::array();
        for (const auto& p : cfg.files->views) views.push_back(p.string());
        j["data"] = {{"views", views}, {"header", cfg.files->header}};
        if (cfg.files->labels) j["data"]["labels"] = cfg.files->labels->string();
    } else if (cfg.synthetic) {
        const SyntheticSpec& s = cfg.synthetic->spec;
        j["data"]["synthetic"] = {{"clusters", s.clusters},
                                  {"per_cluster", s.per_cluster},
                                  {"views", s.views},
                                  {"dims", s.dims},
                                  {"rank", s.subspace_rank},
                                  {"noise", s.noise},
                                  {"cluster_corruption", s.cluster_corruption},
                                  {"sample_corruption", s.sample_corruption},
                                  {"seed", s.seed},
                                  {"resample", cfg.synthetic->resample}};
    }
    json methods = json::array();
    for (Method m : cfg.methods) methods.push_back(to_string(m));
    j["methods"] = methods;
    j["solver"] = solver_to_json(cfg.solver);
    json ms = json::object();
    for (const auto& [m, s] : cfg.method_solver) ms[to_string(m)] = solver_to_json(s);
    j["method_solver"] = ms;
    j["graph"] = {{"k", cfg.graph.k}};
    j["graph"]["sigma"] = cfg.graph.sigma ? json(*cfg.graph.sigma) : json("auto");
    j["kmeans"] = {{"restarts", cfg.kmeans.restarts},
                   {"max_iter", cfg.kmeans.max_iter},
                   {"tol", cfg.kmeans.tol}};
    j["clusters"] = cfg.clusters;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.base_seed;
    j["threads"] = cfg.threads;
    j["save_states"] = cfg.save_states;
    if (cfg.out_dir) j["out"] = cfg.out_dir->string();
    return j;
}

// ----------------------------------------------------------------- running

bool ExperimentReport::all_failed() const {
    for (const MethodReport& m : methods)
        if (!m.failed) return false;
    return true;
}

const MethodReport* ExperimentReport::find(Method m) const {
    for (const MethodReport& r : methods)
        if (r.method == m) return &r;
    return nullptr;
}

void aggregate(MethodReport& report) {
    const double k = static_cast<double>(report.trials.size());
    MetricTriple mean, sd;
    if (report.trials.empty()) {
        report.mean = mean;
        report.stddev = sd;
        return;
    }
    for (const TrialOutcome& t : report.trials) {
        mean.nmi += t.metrics.nmi;
        mean.acc += t.metrics.acc;
        mean.fscore += t.metrics.fscore;
    }
    mean.nmi /= k;
    mean.acc /= k;
    mean.fscore /= k;
    for (const TrialOutcome& t : report.trials) {
        sd.nmi += (t.metrics.nmi - mean.nmi) * (t.metrics.nmi - mean.nmi);
        sd.acc += (t.metrics.acc - mean.acc) * (t.metrics.acc - mean.acc);
        sd.fscore += (t.metrics.fscore - mean.fscore) * (t.metrics.fscore - mean.fscore);
    }
    sd.nmi = std::sqrt(sd.nmi / k);
    sd.acc = std::sqrt(sd.acc / k);
    sd.fscore = std::sqrt(sd.fscore / k);
    report.mean = mean;
    report.stddev = sd;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = Clock::now();

    // File data is loaded once; synthetic data may be redrawn per trial.
    std::optional<MultiViewDataset> shared;
    if (cfg.files) {
        LoadOptions lo;
        lo.header = cfg.files->header;
        if (cfg.clusters > 0) lo.expected_clusters = cfg.clusters;
        shared = load_views(cfg.files->views, cfg.files->labels, lo);
    } else if (!cfg.synthetic->resample) {
        shared = generate_synthetic(cfg.synthetic->spec);
    }

    const std::size_t nm = cfg.methods.size();
    std::vector<TrialSlot> slots(static_cast<std::size_t>(cfg.trials));
#pragma omp parallel for num_threads(cfg.threads) schedule(dynamic, 1)
    for (int t = 0; t < cfg.trials; ++t) {
        TrialSlot& slot = slots[static_cast<std::size_t>(t)];
        slot.outcomes.resize(nm);
        slot.errors.assign(nm, std::string());
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
        std::optional<TrialData> data;
        std::string data_error;
        try {
            if (shared) {
                data = prepare(*shared);
            } else {
                SyntheticSpec spec = cfg.synthetic->spec;
                spec.seed += static_cast<std::uint64_t>(t);
                data = prepare(generate_synthetic(spec));
            }
        } catch (const std::exception& e) {
            data_error = std::string("data: ") + e.what();
        }
        int m = cfg.clusters;
        if (data && m == 0) m = data->dataset.clusters();
        for (std::size_t i = 0; i < nm; ++i) {
            TrialOutcome& out = slot.outcomes[i];
            out.trial = t;
            out.seed = seed;
            if (!data) {
                slot.errors[i] = data_error;
                continue;
            }
            const auto ts = Clock::now();
            try {
                run_method(cfg.methods[i], cfg, *data, m, seed, out);
            } catch (const std::exception& e) {
                slot.errors[i] = e.what();
            }
            out.seconds = seconds_since(ts);
        }
    }

    ExperimentReport report;
    report.config = config_to_json(cfg);
    for (std::size_t i = 0; i < nm; ++i) {
        MethodReport mr;
        mr.method = cfg.methods[i];
        for (int t = 0; t < cfg.trials; ++t) {
            const TrialSlot& slot = slots[static_cast<std::size_t>(t)];
            if (!slot.errors[i].empty() && !mr.failed) {
                mr.failed = true;
                mr.error = "trial " + std::to_string(t) + ": " + slot.errors[i];
            }
            mr.trials.push_back(slot.outcomes[i]);
        }
        if (mr.failed) {
            mr.trials.clear();
        } else {
            aggregate(mr);
        }
        report.methods.push_back(std::move(mr));
    }
    report.seconds = seconds_since(t0);

    if (cfg.out_dir) {
        std::filesystem::create_directories(*cfg.out_dir);
        write_text(*cfg.out_dir / "report.json", report_to_json(report).dump(2) + "\n");
    }
    return report;
}

json report_to_json(const ExperimentReport& report, bool include_timings) {
    json methods = json::array();
    for (const MethodReport& m : report.methods) {
        json jm = {{"name", to_string(m.method)}, {"failed", m.failed}};
        if (m.failed) {
            jm["error"] = m.error;
        } else {
            jm["mean"] = metrics_to_json(m.mean);
            jm["std"] = metrics_to_json(m.stddev);
        }
        json trials = json::array();
        for (const TrialOutcome& t : m.trials) {
            json jt = {{"trial", t.trial},
                       {"seed", t.seed},
                       {"nmi", t.metrics.nmi},
                       {"acc", t.metrics.acc},
                       {"fscore", t.metrics.fscore},
                       {"iterations", t.iterations},
                       {"converged", t.converged},
                       {"residuals", {t.residuals.r1, t.residuals.r2, t.residuals.r3}}};
            if (m.method == Method::lrr_bsv) jt["best_view"] = t.best_view;
            if (include_timings) jt["seconds"] = t.seconds;
            trials.push_back(std::move(jt));
        }
        jm["trials"] = std::move(trials);
        methods.push_back(std::move(jm));
    }
    json j = {{"config", report.config}, {"methods", methods}};
    if (include_timings) j["seconds"] = report.seconds;
    return j;
}

std::string report_table(const ExperimentReport& report) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "method" << std::setw(18) << "NMI"
       << std::setw(18) << "ACC" << std::setw(18) << "F-score" << "converged\n";
    os << std::fixed << std::setprecision(4);
    for (const MethodReport& m : report.methods) {
        os << std::setw(10) << to_string(m.method);
        if (m.failed) {
            os << "FAILED: " << m.error << "\n";
            continue;
        }
        const auto cell = [&](double mean, double sd) {
            std::ostringstream c;
            c << std::fixed << std::setprecision(4) << mean << "(" << sd << ")";
            os << std::setw(18) << c.str();
        };
        cell(m.mean.nmi, m.stddev.nmi);
        cell(m.mean.acc, m.stddev.acc);
        cell(m.mean.fscore, m.stddev.fscore);
        int conv = 0;
        for (const TrialOutcome& t : m.trials) conv += t.converged ? 1 : 0;
        os << conv << "/" << m.trials.size() << "\n";
    }
    return os.str();
}

// ------------------------------------------------------------------ sweeps

SweepAxis parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep '" + spec + "': expected name=v1,v2,...");
    SweepAxis axis;
    axis.name = spec.substr(0, eq);
    if (axis.name != "lambda1" && axis.name != "lambda2" && axis.name != "lambda3")
        throw ConfigError("sweep: unknown parameter '" + axis.name + "'");
    std::stringstream ss(spec.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            axis.values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("sweep: '" + item + "' is not a number");
        }
    }
    if (axis.values.empty()) throw ConfigError("sweep '" + spec + "': no values");
    return axis;
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& config,
                                 const std::vector<SweepAxis>& axes) {
    std::vector<std::map<std::string, double>> cells{{}};
    for (const SweepAxis& axis : axes) {
        std::vector<std::map<std::string, double>> next;
        for (const auto& cell : cells)
            for (double v : axis.values) {
                auto c = cell;
                c[axis.name] = v;
                next.push_back(std::move(c));
            }
        cells = std::move(next);
    }
    const auto apply = [](SolverConfig& s, const std::map<std::string, double>& params) {
        for (const auto& [name, v] : params) {
            if (name == "lambda1") s.lambda1 = v;
            if (name == "lambda2") s.lambda2 = v;
            if (name == "lambda3") s.lambda3 = v;
        }
    };
    std::vector<SweepCell> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        ExperimentConfig cfg = config;
        apply(cfg.solver, cells[i]);
        for (auto& [m, s] : cfg.method_solver) apply(s, cells[i]);
        if (config.out_dir) {
            std::ostringstream name;
            name << "sweep_" << std::setw(3) << std::setfill('0') << i;
            cfg.out_dir = *config.out_dir / name.str();
        }
        out.push_back({cells[i], run_experiment(cfg)});
    }
    if (config.out_dir) {
        json summary = json::array();
        for (std::size_t i = 0; i < out.size(); ++i) {
            json cell = {{"cell", i}, {"params", out[i].params}};
            json methods = json::object();
            for (const MethodReport& m : out[i].report.methods)
                methods[to_string(m.method)] =
                    m.failed ? json{{"failed", true}} : metrics_to_json(m.mean);
            cell["mean"] = methods;
            summary.push_back(std::move(cell));
        }
        std::filesystem::create_directories(*config.out_dir);
        write_text(*config.out_dir / "sweep.json", summary.dump(2) + "\n");
    }
    return out;
}

// ------------------------------------------------------------ state/export

std::string to_string(Exportable e) {
    switch (e) {
    case Exportable::z: return "Z";
    case Exportable::c: return "C";
    case Exportable::ex: return "E_x";
    case Exportable::ez: return "E_z";
    case Exportable::affinity: return "affinity";
    }
    return "?";
}

std::set<Exportable> parse_exportables(const std::string& csv_list) {
    std::set<Exportable> out;
    std::stringstream ss(csv_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        bool found = false;
        for (Exportable e : {Exportable::z, Exportable::c, Exportable::ex, Exportable::ez,
                             Exportable::affinity})
            if (to_string(e) == item) {
                out.insert(e);
                found = true;
            }
        if (!found) throw ConfigError("unknown matrix '" + item + "' (expected Z,C,E_x,E_z,affinity)");
    }
    return out;
}

void save_state(const SolverState& s, const std::filesystem::path& path) {
    json history = json::array();
    for (const IterationRecord& h : s.history)
        history.push_back({{"iter", h.iter},
                           {"mu", h.mu},
                           {"residuals", {h.residuals.r1, h.residuals.r2, h.residuals.r3}},
                           {"objective", h.objective}});
    const json j = {{"Z", matrix_to_json(s.z)},   {"C", matrix_to_json(s.c)},
                    {"E_x", matrix_to_json(s.ex)}, {"E_z", matrix_to_json(s.ez)},
                    {"J", matrix_to_json(s.j)},    {"Y1", matrix_to_json(s.y1)},
                    {"Y2", matrix_to_json(s.y2)},  {"Y3", matrix_to_json(s.y3)},
                    {"mu", s.mu},                  {"iter", s.iter},
                    {"residuals", {s.residuals.r1, s.residuals.r2, s.residuals.r3}},
                    {"objective", s.objective},    {"converged", s.converged},
                    {"history", history}};
    write_text(path, j.dump() + "\n");
}

SolverState load_state(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open state file " + path.string());
    SolverState s;
    try {
        const json j = json::parse(in);
        s.z = matrix_from_json(j.at("Z"), "Z");
        s.c = matrix_from_json(j.at("C"), "C");
        s.ex = matrix_from_json(j.at("E_x"), "E_x");
        s.ez = matrix_from_json(j.at("E_z"), "E_z");
        s.j = matrix_from_json(j.at("J"), "J");
        s.y1 = matrix_from_json(j.at("Y1"), "Y1");
        s.y2 = matrix_from_json(j.at("Y2"), "Y2");
        s.y3 = matrix_from_json(j.at("Y3"), "Y3");
        s.mu = j.at("mu").get<double>();
        s.iter = j.at("iter").get<int>();
        const auto r = j.at("residuals").get<std::vector<double>>();
        if (r.size() != 3) throw InvalidInput("state file: residuals must have 3 entries");
        s.residuals = {r[0], r[1], r[2]};
        s.objective = j.at("objective").get<double>();
        s.converged = j.at("converged").get<bool>();
        for (const json& h : j.value("history", json::array())) {
            const auto hr = h.at("residuals").get<std::vector<double>>();
            s.history.push_back({h.at("iter").get<int>(), h.at("mu").get<double>(),
                                 {hr.at(0), hr.at(1), hr.at(2)}, h.at("objective").get<double>()});
        }
    } catch (const json::exception& e) {
        throw InvalidInput("state file " + path.string() + ": " + e.what());
    }
    const Eigen::Index n = s.z.cols();
    for (const Matrix* m : {&s.z, &s.c, &s.ez, &s.j, &s.y2, &s.y3})
        if (m->rows() != n || m->cols() != n)
            throw ShapeError("state file " + path.string() + ": inconsistent n x n blocks");
    if (s.ex.cols() != n || s.y1.rows() != s.ex.rows() || s.y1.cols() != n)
        throw ShapeError("state file " + path.string() + ": inconsistent d x n blocks");
    return s;
}

std::vector<std::filesystem::path> export_matrices(const SolverState& state,
                                                   const std::set<Exportable>& which,
                                                   const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    if (which.empty()) return written;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (Exportable e : which) {
        const std::filesystem::path path = dir / (to_string(e) + ".csv");
        switch (e) {
        case Exportable::z: csv::write_matrix(path, state.z); break;
        case Exportable::c: csv::write_matrix(path, state.c); break;
        case Exportable::ex: csv::write_matrix(path, state.ex); break;
        case Exportable::ez: csv::write_matrix(path, state.ez); break;
        case Exportable::affinity: csv::write_matrix(path, build_affinity(state.c)); break;
        }
        written.push_back(path);
    }
    return written;
}

} // namespace fcmsc
