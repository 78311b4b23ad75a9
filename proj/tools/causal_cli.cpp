#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "causal/errors.hpp"
#include "causal/evaluate.hpp"
#include "causal/search.hpp"
#include "causal/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw causal::parse_error("cannot read file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw causal::parse_error("cannot write file: " + path);
    out << text;
}

// "5..100:5" inclusive range, or a comma list of dimensions.
std::vector<int> parse_dims(const std::string& spec) {
    std::vector<int> dims;
    auto dots = spec.find("..");
    if (dots != std::string::npos) {
        auto colon = spec.find(':', dots);
        const int start = std::stoi(spec.substr(0, dots));
        const int end = std::stoi(
            spec.substr(dots + 2, colon == std::string::npos ? std::string::npos
                                                             : colon - dots - 2));
        const int step =
            colon == std::string::npos ? 1 : std::stoi(spec.substr(colon + 1));
        if (step <= 0 || start <= 0 || end < start)
            throw causal::parse_error("bad dimension range: " + spec);
        for (int d = start; d <= end; d += step) dims.push_back(d);
    } else {
        std::istringstream in(spec);
        std::string cell;
        while (std::getline(in, cell, ',')) dims.push_back(std::stoi(cell));
    }
    if (dims.empty()) throw causal::parse_error("empty dimension list: " + spec);
    for (int d : dims)
        if (d < 2) throw causal::parse_error("dimension must be >= 2");
    return dims;
}

causal::GaussianDataset load_dataset(const std::string& path) {
    const std::string text = read_file(path);
    if (text.rfind("n:", 0) == 0)
        return causal::GaussianDataset::from_correlation_file(text);
    return causal::GaussianDataset::from_csv(text);
}

int cmd_discover(const std::string& data_file, const std::string& algorithm,
                 double alpha, std::optional<int> max_depth,
                 const std::string& out_file) {
    causal::GaussianDataset data = load_dataset(data_file);
    causal::FisherZSource src(data, alpha);
    causal::SearchConfig cfg;
    cfg.alpha = alpha;
    cfg.max_depth = max_depth;
    cfg.variant = algorithm == "pc" ? causal::Variant::Pc : causal::Variant::Cpc;
    causal::SearchResult res = causal::run_search(src, data.variables, cfg);

    write_file(out_file, causal::to_text(res.graph));
    int arrowheads = 0;
    for (const auto& [k, marks] : res.graph.edge_marks()) {
        (void)k;
        arrowheads += (marks.first == causal::Mark::Arrow) +
                      (marks.second == causal::Mark::Arrow);
    }
    std::cout << "algorithm: " << algorithm << "\n"
              << "edges: " << res.graph.edge_count() << "\n"
              << "arrowheads: " << arrowheads << "\n"
              << "underlines: " << res.graph.underlines().size() << "\n"
              << "ci queries: " << res.ci_queries_used << "\n"
              << "elapsed ms: "
              << std::chrono::duration_cast<std::chrono::milliseconds>(res.elapsed)
                     .count()
              << "\n"
              << "output: " << out_file << "\n";
    return kExitOk;
}

int cmd_simulate(int dimension, const std::string& density, std::int64_t n,
                 std::uint64_t seed, const std::string& prefix) {
    const causal::GraphSpec spec{
        dimension, density == "sparser" ? dimension : 2 * dimension, 10};
    const causal::Dag dag = causal::random_dag(spec, seed);
    const causal::Sem sem = causal::random_sem(dag, seed + 1);
    const Eigen::MatrixXd rows = causal::simulate_rows(sem, n, seed + 2);
    write_file(prefix + ".dag", causal::to_text(dag));
    write_file(prefix + ".sem", causal::to_text(sem));
    write_file(prefix + ".csv", causal::to_csv(dag.names(), rows));
    std::cout << "wrote " << prefix << ".dag, " << prefix << ".sem, " << prefix
              << ".csv (" << dag.edge_count() << " edges, " << n << " rows)\n";
    return kExitOk;
}

int cmd_benchmark(const std::string& dims, const std::string& density,
                  int replicates, std::int64_t n, double alpha,
                  std::uint64_t seed, const std::string& out_file,
                  const std::string& aggregate_file, bool zero_elapsed) {
    causal::BenchmarkConfig cfg;
    cfg.dimensions = parse_dims(dims);
    cfg.density =
        density == "sparser" ? causal::Density::Sparser : causal::Density::Denser;
    cfg.replicates = replicates;
    cfg.sample_size = n;
    cfg.alpha = alpha;
    cfg.base_seed = seed;
    const auto records = causal::run_benchmark(cfg);
    write_file(out_file, causal::records_to_csv(records, zero_elapsed));
    if (!aggregate_file.empty())
        write_file(aggregate_file,
                   causal::aggregate_to_csv(causal::aggregate(records),
                                            zero_elapsed));
    int failed = 0;
    for (const auto& r : records) failed += r.failed ? 1 : 0;
    std::cout << records.size() << " records (" << failed << " failed) -> "
              << out_file << "\n";
    // Require at least one usable replicate per (dimension, algorithm) cell.
    for (const auto& row : causal::aggregate(records))
        if (row.excluded >= replicates) return kExitNumeric;
    return kExitOk;
}

int cmd_oracle_check(const std::string& dag_file, const std::string& algorithm,
                     const std::string& out_file) {
    const causal::Dag dag = causal::parse_dag(read_file(dag_file));
    causal::DSeparationOracle oracle(dag);
    causal::SearchConfig cfg;
    cfg.variant = algorithm == "pc" ? causal::Variant::Pc : causal::Variant::Cpc;
    const causal::SearchResult res = causal::run_search(oracle, dag.names(), cfg);
    if (!out_file.empty()) write_file(out_file, causal::to_text(res.graph));

    const causal::MixedGraph pattern = causal::dag_to_pattern(dag);
    const bool pattern_match = res.graph == pattern;
    std::cout << "pattern match: " << (pattern_match ? "true" : "false");
    if (dag.node_count() <= 8) {
        bool represents = false;
        for (const causal::Dag& g : causal::represented_dags(res.graph))
            if (g == dag) {
                represents = true;
                break;
            }
        std::cout << "; represents truth: " << (represents ? "true" : "false");
    }
    std::cout << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PC / Conservative PC causal structure discovery"};
    app.require_subcommand(1);

    std::string data_file, out_file, algorithm = "cpc";
    double alpha = 0.05;
    int max_depth = -1;
    auto* discover = app.add_subcommand(
        "discover", "Run PC or CPC on a dataset (CSV or correlation file)");
    discover->add_option("data-file", data_file, "input dataset")->required();
    discover->add_option("--algorithm", algorithm, "pc or cpc")
        ->check(CLI::IsMember({"pc", "cpc"}));
    discover->add_option("--alpha", alpha, "significance level");
    discover->add_option("--max-depth", max_depth,
                         "conditioning set size cap (-1 = unlimited)");
    discover->add_option("--out", out_file, "output graph file")->required();

    int dimension = 10;
    std::string density = "sparser";
    std::int64_t n = 1000;
    std::uint64_t seed = 0;
    std::string prefix;
    auto* simulate = app.add_subcommand(
        "simulate", "Generate a random DAG, SEM, and Gaussian dataset");
    simulate->add_option("--dimension", dimension, "number of variables")
        ->required();
    simulate->add_option("--density", density, "sparser or denser")
        ->check(CLI::IsMember({"sparser", "denser"}));
    simulate->add_option("--n", n, "sample size");
    simulate->add_option("--seed", seed, "rng seed");
    simulate->add_option("--out-prefix", prefix, "output file prefix")->required();

    std::string dims = "5..100:5", agg_file;
    int replicates = 5;
    bool zero_elapsed = false;
    auto* benchmark = app.add_subcommand(
        "benchmark", "Compare PC and CPC accuracy/runtime over random models");
    benchmark->add_option("--dims", dims, "dimensions, e.g. 5..100:5 or 5,10");
    benchmark->add_option("--density", density, "sparser or denser")
        ->check(CLI::IsMember({"sparser", "denser"}));
    benchmark->add_option("--replicates", replicates, "models per dimension");
    benchmark->add_option("--n", n, "sample size");
    benchmark->add_option("--alpha", alpha, "significance level");
    benchmark->add_option("--seed", seed, "base rng seed");
    benchmark->add_option("--out", out_file, "per-replicate CSV")->required();
    benchmark->add_option("--aggregate", agg_file, "aggregate CSV");
    benchmark->add_flag("--zero-elapsed", zero_elapsed,
                        "write 0 for elapsed_ms (byte-reproducible output)");

    std::string dag_file;
    auto* oracle = app.add_subcommand(
        "oracle-check", "Run PC/CPC with the d-separation oracle on a DAG file");
    oracle->add_option("--dag", dag_file, "input DAG file")->required();
    oracle->add_option("--algorithm", algorithm, "pc or cpc")
        ->check(CLI::IsMember({"pc", "cpc"}));
    oracle->add_option("--out", out_file, "output graph file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (discover->parsed())
            return cmd_discover(data_file, algorithm, alpha,
                                max_depth < 0 ? std::nullopt
                                              : std::optional<int>(max_depth),
                                out_file);
        if (simulate->parsed())
            return cmd_simulate(dimension, density, n, seed, prefix);
        if (benchmark->parsed())
            return cmd_benchmark(dims, density, replicates, n, alpha, seed,
                                 out_file, agg_file, zero_elapsed);
        if (oracle->parsed())
            return cmd_oracle_check(dag_file, algorithm, out_file);
    } catch (const causal::degenerate_covariance_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
