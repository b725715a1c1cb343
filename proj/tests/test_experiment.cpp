#include "doctest.h"

#include "fcmsc/csv.hpp"
#include "fcmsc/errors.hpp"
#include "fcmsc/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace fcmsc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fcmsc_test_experiment_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    SyntheticSource src;
    src.spec.per_cluster = 8;
    src.spec.dims = {10, 10, 10};
    src.spec.subspace_rank = 2;
    src.spec.noise = 0.05;
    src.spec.cluster_corruption = 0.2;
    src.spec.seed = 40;
    cfg.synthetic = src;
    cfg.methods = {Method::lrr_bsv, Method::lrr_fc, Method::fcmsc, Method::grfcmsc};
    cfg.solver.max_iter = 60;
    cfg.kmeans.restarts = 5;
    cfg.trials = 3;
    cfg.base_seed = 7;
    return cfg;
}

json base_json() {
    return json::parse(R"({
        "data": {"synthetic": {"per_cluster": 6, "dims": [8, 8, 8], "rank": 2, "noise": 0.05}},
        "methods": ["FCMSC"],
        "solver": {"max_iter": 20},
        "trials": 2
    })");
}

} // namespace

TEST_CASE("single trial has zero spread") {
    ExperimentConfig cfg = small_config();
    cfg.trials = 1;
    const ExperimentReport r = run_experiment(cfg);
    REQUIRE(r.methods.size() == 4);
    for (const MethodReport& m : r.methods) {
        INFO(to_string(m.method) << " " << m.error);
        REQUIRE_FALSE(m.failed);
        CHECK(m.stddev.nmi == 0.0);
        CHECK(m.stddev.acc == 0.0);
        CHECK(m.stddev.fscore == 0.0);
        CHECK(m.mean.nmi == m.trials.front().metrics.nmi);
    }
    const MethodReport* bsv = r.find(Method::lrr_bsv);
    REQUIRE(bsv != nullptr);
    CHECK(bsv->trials.front().best_view >= 0);
    CHECK(bsv->trials.front().best_view < 3);
}

TEST_CASE("reports are deterministic across thread counts") {
    ExperimentConfig cfg = small_config();
    const json a = report_to_json(run_experiment(cfg), false);
    const json b = report_to_json(run_experiment(cfg), false);
    CHECK(a == b);
    cfg.threads = 2;
    const json c = report_to_json(run_experiment(cfg), false);
    CHECK(a["methods"] == c["methods"]);
}

TEST_CASE("report.json means match the per-trial values") {
    ExperimentConfig cfg = small_config();
    cfg.methods = {Method::fcmsc, Method::lrr_fc};
    cfg.out_dir = scratch_dir("report");
    run_experiment(cfg);
    std::ifstream in(*cfg.out_dir / "report.json");
    const json j = json::parse(in);
    for (const json& m : j.at("methods")) {
        for (const char* key : {"nmi", "acc", "fscore"}) {
            double sum = 0.0;
            for (const json& t : m.at("trials")) sum += t.at(key).get<double>();
            const double mean = sum / static_cast<double>(m.at("trials").size());
            CHECK(std::abs(mean - m.at("mean").at(key).get<double>()) < 1e-12);
            double ss = 0.0;
            for (const json& t : m.at("trials")) ss += std::pow(t.at(key).get<double>() - mean, 2);
            const double sd = std::sqrt(ss / static_cast<double>(m.at("trials").size()));
            CHECK(std::abs(sd - m.at("std").at(key).get<double>()) < 1e-12);
        }
    }
}

TEST_CASE("a failing method does not stop the others") {
    ExperimentConfig cfg = small_config();
    cfg.methods = {Method::grfcmsc, Method::fcmsc};
    cfg.graph.k = 100;  // more neighbors than samples
    cfg.trials = 1;
    const ExperimentReport r = run_experiment(cfg);
    CHECK(r.find(Method::grfcmsc)->failed);
    CHECK(r.find(Method::grfcmsc)->error.find("k = 100") != std::string::npos);
    CHECK_FALSE(r.find(Method::fcmsc)->failed);
    CHECK_FALSE(r.all_failed());
}

TEST_CASE("state files and matrix export round trip") {
    const fs::path dir = scratch_dir("export");
    ExperimentConfig cfg = small_config();
    cfg.methods = {Method::fcmsc};
    cfg.trials = 1;
    cfg.out_dir = dir;
    cfg.save_states = true;
    run_experiment(cfg);
    const fs::path state_file = dir / "state_FCMSC_trial0.json";
    REQUIRE(fs::exists(state_file));
    const SolverState s = load_state(state_file);

    save_state(s, dir / "copy.json");
    const SolverState t = load_state(dir / "copy.json");
    CHECK((s.c - t.c).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((s.z - t.z).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(s.history.size() == t.history.size());

    const auto written = export_matrices(s, parse_exportables("Z,C,E_x,E_z,affinity"), dir / "mats");
    CHECK(written.size() == 5);
    const Matrix c = csv::read_matrix(dir / "mats" / "C.csv");
    CHECK((c - s.c).cwiseAbs().maxCoeff() <= 1e-12);
    const Matrix ex = csv::read_matrix(dir / "mats" / "E_x.csv");
    CHECK((ex - s.ex).cwiseAbs().maxCoeff() <= 1e-12);
    const Matrix w = csv::read_matrix(dir / "mats" / "affinity.csv");
    CHECK(w == w.transpose());
    CHECK(w.minCoeff() >= 0.0);
    CHECK((w - build_affinity(s.c)).cwiseAbs().maxCoeff() <= 1e-12);

    const fs::path empty = dir / "none";
    CHECK(export_matrices(s, {}, empty).empty());
    CHECK((!fs::exists(empty) || fs::is_empty(empty)));
    CHECK_THROWS_AS(parse_exportables("Z,Q"), ConfigError);
}

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse_config(base_json());
    CHECK(cfg.synthetic.has_value());
    CHECK(cfg.synthetic->spec.subspace_rank == 2);
    CHECK(cfg.trials == 2);
    CHECK(cfg.solver.max_iter == 20);
    CHECK(cfg.methods == std::vector<Method>{Method::fcmsc});

    json j = base_json();
    j["method_solver"] = {{"LRR_BSV", {{"lambda2", 2.0}}}};
    j["graph"] = {{"k", 4}, {"sigma", 0.5}};
    const ExperimentConfig m = parse_config(j);
    CHECK(m.solver_for(Method::lrr_bsv).lambda2 == 2.0);
    CHECK(m.solver_for(Method::lrr_bsv).max_iter == 20);
    CHECK(m.solver_for(Method::fcmsc).lambda2 == cfg.solver.lambda2);
    CHECK(*m.graph.sigma == 0.5);

    const ExperimentConfig echo = parse_config(config_to_json(m));
    CHECK(config_to_json(echo) == config_to_json(m));
}

TEST_CASE("config errors") {
    const auto expect_error = [](json j) { CHECK_THROWS_AS(parse_config(j), ConfigError); };
    json j = base_json();
    j["bogus"] = 1;
    expect_error(j);
    j = base_json();
    j["trials"] = 0;
    expect_error(j);
    j = base_json();
    j["methods"] = json::array({"KMEANS"});
    expect_error(j);
    j = base_json();
    j["methods"] = json::array();
    expect_error(j);
    j = base_json();
    j["solver"]["rho"] = 0.5;
    expect_error(j);
    j = base_json();
    j["graph"] = {{"sigma", "wide"}};
    expect_error(j);
    j = base_json();
    j["trials"] = "three";
    expect_error(j);
    j = base_json();
    j["data"] = {{"views", {"a.csv"}}};
    expect_error(j);  // labels are required for file data

    const fs::path dir = scratch_dir("config");
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("sweeps") {
    const SweepAxis axis = parse_sweep("lambda1=0.5,2");
    CHECK(axis.name == "lambda1");
    CHECK(axis.values == std::vector<double>{0.5, 2.0});
    CHECK_THROWS_AS(parse_sweep("mu0=1"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("lambda1"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("lambda1=a"), ConfigError);

    ExperimentConfig cfg = parse_config(base_json());
    cfg.trials = 1;
    cfg.out_dir = scratch_dir("sweep");
    const auto cells = run_sweep(cfg, {axis, parse_sweep("lambda2=0.6")});
    REQUIRE(cells.size() == 2);
    CHECK(cells[1].params.at("lambda1") == 2.0);
    CHECK(cells[1].report.config["solver"]["lambda1"] == 2.0);
    CHECK(fs::exists(*cfg.out_dir / "sweep.json"));
}
