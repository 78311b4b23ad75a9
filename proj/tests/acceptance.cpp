// End-to-end acceptance checks. Each test prints one PASS/FAIL line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "causal/errors.hpp"
#include "causal/evaluate.hpp"
#include "causal/search.hpp"
#include "causal/simulate.hpp"
#include "test_oracles.hpp"

using namespace causal;
using causal::testing::all_conditioning_sets;
using causal::testing::brute_force_d_separated;
using causal::testing::for_each_dag;
using causal::testing::random_test_dag;
using causal::testing::recursive_partial_correlation;

namespace {

void report(int criterion, const std::string& what, bool ok) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                what.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", criterion, ": ", what);
}

bool oracle_run_is_exact(const Dag& dag) {
    const MixedGraph pattern = dag_to_pattern(dag);
    for (Variant v : {Variant::Pc, Variant::Cpc}) {
        DSeparationOracle src(dag);
        SearchConfig cfg;
        cfg.variant = v;
        auto result = run_search(src, dag.names(), cfg);
        if (result.graph != pattern) return false;
        if (!result.graph.underlines().empty()) return false;
    }
    auto members = represented_dags(pattern);
    return std::find(members.begin(), members.end(), dag) != members.end();
}

const BenchmarkConfig kDeskGrid = [] {
    BenchmarkConfig cfg;
    cfg.dimensions = {5, 10, 15, 20, 25};
    cfg.replicates = 5;
    cfg.sample_size = 1000;
    cfg.alpha = 0.05;
    cfg.base_seed = 6;
    return cfg;
}();

struct GridStats {
    double pc_arrow_fp = 0, cpc_arrow_fp = 0;
    double pc_arrow_fn = 0, cpc_arrow_fn = 0;
    double pc_elapsed = 0, cpc_elapsed = 0;
    double unfaithful = 0, unshielded = 0;
    int usable = 0;
};

GridStats grid_stats(const std::vector<BenchmarkRecord>& records) {
    GridStats s;
    for (const auto& r : records) {
        if (r.failed) continue;
        ++s.usable;
        const double ms =
            std::chrono::duration<double, std::milli>(r.counts.elapsed).count();
        if (r.algorithm == Variant::Pc) {
            s.pc_arrow_fp += r.counts.arrow_fp;
            s.pc_arrow_fn += r.counts.arrow_fn;
            s.pc_elapsed += ms;
        } else {
            s.cpc_arrow_fp += r.counts.arrow_fp;
            s.cpc_arrow_fn += r.counts.arrow_fn;
            s.cpc_elapsed += ms;
            s.unfaithful += r.counts.unfaithful_count;
            s.unshielded += r.counts.unshielded_total;
        }
    }
    return s;
}

const std::vector<BenchmarkRecord>& sparser_records() {
    static const auto records = [] {
        BenchmarkConfig cfg = kDeskGrid;
        cfg.density = Density::Sparser;
        return run_benchmark(cfg);
    }();
    return records;
}

const std::vector<BenchmarkRecord>& denser_records() {
    static const auto records = [] {
        BenchmarkConfig cfg = kDeskGrid;
        cfg.density = Density::Denser;
        return run_benchmark(cfg);
    }();
    return records;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("criterion 1: oracle exactness") {
    bool ok = true;
    long checked = 0;
    for (int n = 2; n <= 5 && ok; ++n) {
        for_each_dag(n, [&](const Dag& dag) {
            if (!ok) return;
            ++checked;
            if (!oracle_run_is_exact(dag)) ok = false;
        });
    }
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 500 && ok; ++rep) {
        Dag dag = random_test_dag(rep % 2 == 0 ? 6 : 7, rng);
        ++checked;
        if (!oracle_run_is_exact(dag)) ok = false;
    }
    report(1, "PC and CPC match dag_to_pattern exactly under the oracle (" +
                  std::to_string(checked) + " DAGs)",
           ok);
}

TEST_CASE("criterion 2: unfaithful-chain counterexample") {
    FactTable t;
    t.add(0, 2, {});
    t.add(0, 2, {1});
    const std::vector<std::string> names{"A", "B", "C"};

    FactTableSource pc_src(t);
    SearchConfig pc_cfg;
    pc_cfg.variant = Variant::Pc;
    auto pc = run_search(pc_src, names, pc_cfg);
    bool ok = pc.graph.is_directed(0, 1) && pc.graph.is_directed(2, 1) &&
              !pc.graph.adjacent(0, 2);

    FactTableSource cpc_src(t);
    SearchConfig cpc_cfg;
    cpc_cfg.variant = Variant::Cpc;
    auto cpc = run_search(cpc_src, names, cpc_cfg);
    ok = ok && cpc.graph.is_undirected(0, 1) && cpc.graph.is_undirected(1, 2) &&
         cpc.graph.is_underlined(Triple::make(0, 1, 2));
    if (ok) {
        Dag chain(names);
        chain.add_edge(0, 1);
        chain.add_edge(1, 2);
        auto members = represented_dags(cpc.graph);
        ok = std::find(members.begin(), members.end(), chain) != members.end();
    }
    report(2, "PC errs to A->B<-C; CPC returns A-B-C underlined, representing "
              "the true chain",
           ok);
}

TEST_CASE("criterion 3: CPC agrees with the SGS triple oracle") {
    bool ok = true;
    long triples = 0;
    auto check_dag = [&](const Dag& dag) {
        if (!ok) return;
        DSeparationOracle src(dag);
        SearchConfig cfg;
        cfg.variant = Variant::Cpc;
        auto result = run_search(src, dag.names(), cfg);
        for (const auto& [t, cls] : result.triple_log) {
            ++triples;
            if (cls != sgs_triple_oracle(src, dag.node_count(), t)) {
                ok = false;
                return;
            }
        }
    };
    for (int n = 2; n <= 5 && ok; ++n) for_each_dag(n, check_dag);
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 400 && ok; ++rep)
        check_dag(random_test_dag(rep % 2 == 0 ? 6 : 7, rng));
    report(3, "zero disagreements over " + std::to_string(triples) +
                  " unshielded triples",
           ok);
}

TEST_CASE("criterion 4: CPC controls arrow false positives") {
    const auto s = grid_stats(sparser_records());
    const bool ok = s.usable > 0 && s.cpc_arrow_fp <= 0.5 * s.pc_arrow_fp;
    char buf[128];
    std::snprintf(buf, sizeof buf, "mean arrow_fp cpc=%.2f pc=%.2f",
                  s.cpc_arrow_fp / 25.0, s.pc_arrow_fp / 25.0);
    report(4, buf, ok);
}

TEST_CASE("criterion 5: arrow false negatives stay comparable") {
    const auto s = grid_stats(sparser_records());
    const bool ok =
        std::abs(s.cpc_arrow_fn - s.pc_arrow_fn) <= 0.2 * s.pc_arrow_fn;
    char buf[128];
    std::snprintf(buf, sizeof buf, "mean arrow_fn cpc=%.2f pc=%.2f",
                  s.cpc_arrow_fn / 25.0, s.pc_arrow_fn / 25.0);
    report(5, buf, ok);
}

TEST_CASE("criterion 6: CPC runtime within 2x of PC") {
    const auto s = grid_stats(sparser_records());
    const bool ok = s.cpc_elapsed <= 2.0 * s.pc_elapsed;
    char buf[128];
    std::snprintf(buf, sizeof buf, "total elapsed cpc=%.0fms pc=%.0fms",
                  s.cpc_elapsed, s.pc_elapsed);
    report(6, buf, ok);
}

TEST_CASE("criterion 7: unfaithful-triple percentage bands") {
    auto pct = [](const GridStats& s) {
        return s.unshielded > 0 ? s.unfaithful / s.unshielded : 0.0;
    };
    const double sparse = pct(grid_stats(sparser_records()));
    const double dense = pct(grid_stats(denser_records()));
    const bool ok = sparse >= 0.15 && sparse <= 0.45 && dense >= 0.25 &&
                    dense <= 0.55 && dense > sparse;
    char buf[128];
    std::snprintf(buf, sizeof buf, "percent unfaithful sparser=%.3f denser=%.3f",
                  sparse, dense);
    report(7, buf, ok);
}

TEST_CASE("criterion 8: Fisher-Z unit correctness") {
    bool ok = true;
    {
        Eigen::MatrixXd corr(2, 2);
        corr << 1.0, 0.1, 0.1, 1.0;
        GaussianDataset d{1000, {"A", "B"}, corr};
        auto dec = fisher_z_test(d, {0, 1, {}}, 0.05);
        ok = std::abs(*dec.statistic -
                      std::sqrt(997.0) * 0.5 * std::log(1.1 / 0.9)) < 1e-9;
    }
    ok = ok && normal_cdf(0.0) == 0.5 &&
         std::abs(normal_cdf(1.959964) - 0.975) < 1e-6 &&
         std::abs(normal_cdf(-1.0) - (1.0 - normal_cdf(1.0))) < 1e-12;
    {
        std::mt19937_64 rng(8);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int k = 0; k < 20 && ok; ++k) {
            Eigen::MatrixXd a(5, 7);
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 7; ++j) a(i, j) = gauss(rng);
            Eigen::MatrixXd cov = a * a.transpose();
            Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
            Eigen::MatrixXd corr(5, 5);
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j)
                    corr(i, j) = i == j ? 1.0 : cov(i, j) / (sd(i) * sd(j));
            GaussianDataset d{1000, {"V1", "V2", "V3", "V4", "V5"}, corr};
            for (int x = 0; x < 5 && ok; ++x)
                for (int y = x + 1; y < 5 && ok; ++y)
                    for (const auto& s : all_conditioning_sets(5, x, y))
                        if (std::abs(partial_correlation(d, {x, y, s}) -
                                     recursive_partial_correlation(corr, x, y,
                                                                   s)) >=
                            1e-10) {
                            ok = false;
                            break;
                        }
        }
    }
    report(8, "statistic formula, normal CDF grid, recursive partial "
              "correlation oracle",
           ok);
}

TEST_CASE("criterion 9: d-separation equals path enumeration") {
    bool ok = true;
    long checks = 0;
    auto check_dag = [&](const Dag& dag) {
        if (!ok) return;
        const int n = dag.node_count();
        for (int x = 0; x < n && ok; ++x)
            for (int y = x + 1; y < n && ok; ++y)
                for (const auto& s : all_conditioning_sets(n, x, y)) {
                    ++checks;
                    if (d_separated(dag, x, y, s) !=
                        brute_force_d_separated(dag, x, y, s)) {
                        ok = false;
                        break;
                    }
                }
    };
    for (int n = 2; n <= 5 && ok; ++n) for_each_dag(n, check_dag);
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 2000 && ok; ++rep)
        check_dag(random_test_dag(6, rng, 0.45));
    report(9, "zero disagreements over " + std::to_string(checks) + " queries",
           ok);
}

TEST_CASE("criterion 10: benchmark CLI is byte-deterministic") {
#ifndef CAUSAL_CLI_PATH
    report(10, "CLI binary path not configured", false);
#else
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "causal_acceptance_c10";
    fs::create_directories(dir);
    auto run = [&](const std::string& tag) {
        std::ostringstream cmd;
        cmd << CAUSAL_CLI_PATH << " benchmark --dims 5..10:5 --replicates 2"
            << " --n 300 --seed 77 --zero-elapsed"
            << " --out " << (dir / (tag + ".csv"))
            << " --aggregate " << (dir / (tag + "_agg.csv")) << " > /dev/null";
        return std::system(cmd.str().c_str());
    };
    bool ok = run("a") == 0 && run("b") == 0;
    ok = ok && slurp(dir / "a.csv") == slurp(dir / "b.csv");
    ok = ok && slurp(dir / "a_agg.csv") == slurp(dir / "b_agg.csv");
    ok = ok && !slurp(dir / "a.csv").empty();
    report(10, "two identical-flag runs produced byte-identical CSVs", ok);
#endif
}
