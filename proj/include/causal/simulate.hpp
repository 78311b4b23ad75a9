#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "causal/citest.hpp"
#include "causal/graph.hpp"

namespace causal {

using RngSeed = std::uint64_t;

// Linear-Gaussian structural equation model over a DAG.
struct Sem {
    Dag dag;
    std::map<std::pair<int, int>, double> coefficients;  // keyed by dag edge
    std::vector<double> noise_std;                       // per node, > 0

    void validate() const;
};

struct GraphSpec {
    int dimension;
    int max_edges;
    int max_degree;
};

// Approximately uniform degree-capped DAG: random topological order,
// edge count uniform in {0..max_edges}, order-respecting pairs sampled
// with rejection on the degree cap.
Dag random_dag(const GraphSpec& spec, RngSeed seed);

// Edge coefficients: with probability 0.95 uniform on
// [-1.5,-0.5] u [0.5,1.5], otherwise uniform on [-0.001, 0.001].
// Unit noise standard deviations.
Sem random_sem(const Dag& g, RngSeed seed);

// n i.i.d. samples by forward substitution in topological order.
Eigen::MatrixXd simulate_rows(const Sem& m, std::int64_t n, RngSeed seed);
GaussianDataset simulate_data(const Sem& m, std::int64_t n, RngSeed seed);

// Exact population correlation: Sigma = (I-B)^-1 D (I-B)^-T, standardized.
Eigen::MatrixXd population_correlation(const Sem& m);

// SEM file format: graph text plus "coef:" and "noise:" lines.
std::string to_text(const Sem& m);
Sem parse_sem(const std::string& text);

std::string to_csv(const std::vector<std::string>& names,
                   const Eigen::MatrixXd& rows);

}  // namespace causal
