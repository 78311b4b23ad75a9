#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "causal/search.hpp"
#include "causal/simulate.hpp"

namespace causal {

struct ErrorCounts {
    int arrow_fp = 0;
    int arrow_fn = 0;
    int adjacency_fp = 0;
    int adjacency_fn = 0;
    int collider_fp = 0;
    int collider_fn = 0;
    int noncollider_fp = 0;
    int noncollider_fn = 0;
    int unfaithful_count = 0;
    int unshielded_total = 0;
    std::chrono::nanoseconds elapsed{0};
};

enum class Density { Sparser, Denser };

inline const char* to_string(Density d) {
    return d == Density::Sparser ? "sparser" : "denser";
}
inline const char* to_string(Variant v) { return v == Variant::Pc ? "pc" : "cpc"; }

struct BenchmarkConfig {
    std::vector<int> dimensions;
    Density density = Density::Sparser;
    int replicates = 5;
    std::int64_t sample_size = 1000;
    double alpha = 0.05;
    RngSeed base_seed = 0;
    int max_degree = 10;
};

struct BenchmarkRecord {
    int dimension;
    Density density;
    int replicate;
    Variant algorithm;
    ErrorCounts counts;
    bool failed = false;
};

struct TripleErrors {
    int collider_fp = 0;
    int collider_fn = 0;
    int noncollider_fp = 0;
    int noncollider_fn = 0;
};

// Arrowhead errors per endpoint mark: fn for each truth arrowhead the
// output lacks (missing edge or no arrowhead); fp is the mirror image.
std::pair<int, int> count_arrow_errors(const MixedGraph& truth,
                                       const MixedGraph& output);

std::pair<int, int> count_adjacency_errors(const MixedGraph& truth,
                                           const MixedGraph& output);

// Unshielded collider/noncollider addition and removal errors; underlined
// output triples count toward none of the four.
TripleErrors count_triple_errors(const MixedGraph& truth, const MixedGraph& output);

// |underlines| / |unshielded triples|, 0 when there are none.
double percent_unfaithful(const MixedGraph& output);

ErrorCounts compare_to_truth(const MixedGraph& truth, const MixedGraph& output);

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& cfg);

struct AggregateRow {
    int dimension;
    Density density;
    Variant algorithm;
    double arrow_fp, arrow_fn, adjacency_fp, adjacency_fn;
    double collider_fp, collider_fn, noncollider_fp, noncollider_fn;
    double unfaithful_count, unshielded_total;
    double elapsed_ms;
    int excluded;  // failed replicates left out of the means
};

std::vector<AggregateRow> aggregate(const std::vector<BenchmarkRecord>& records);

// SGS-style exhaustive triple classification over all subsets of the
// remaining nodes; test oracle only. Throws capacity_error above 10 nodes.
TripleClass sgs_triple_oracle(const IndependenceSource& src, int node_count,
                              const Triple& t);

std::string records_to_csv(const std::vector<BenchmarkRecord>& records,
                           bool zero_elapsed = false);
std::string aggregate_to_csv(const std::vector<AggregateRow>& rows,
                             bool zero_elapsed = false);

}  // namespace causal
