#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "causal/graph.hpp"

namespace causal {

// Query "x independent of y given s?". s is kept sorted.
struct CiQuery {
    int x;
    int y;
    std::vector<int> s;
};

struct CiDecision {
    bool independent;
    std::optional<double> p_value;
    std::optional<double> statistic;
};

// Abstract conditional-independence source. Deterministic per query;
// the tally is safe to bump from concurrent readers.
class IndependenceSource {
public:
    virtual ~IndependenceSource() = default;

    CiDecision answer(const CiQuery& q) const {
        queries_.fetch_add(1, std::memory_order_relaxed);
        return do_answer(q);
    }

    std::uint64_t query_count() const noexcept {
        return queries_.load(std::memory_order_relaxed);
    }

private:
    virtual CiDecision do_answer(const CiQuery& q) const = 0;

    mutable std::atomic<std::uint64_t> queries_{0};
};

// Sufficient statistics of a Gaussian sample: size and correlation matrix.
struct GaussianDataset {
    std::int64_t sample_count = 0;
    std::vector<std::string> variables;
    Eigen::MatrixXd correlation;

    // Throws std::invalid_argument if the matrix is not a valid
    // correlation matrix (PSD within 1e-8, unit diagonal).
    void validate() const;

    // data: rows are samples, columns follow `variables`.
    static GaussianDataset from_raw(std::vector<std::string> variables,
                                    const Eigen::MatrixXd& data);
    static GaussianDataset from_csv(const std::string& text);
    // "n: <samples>" line, variable names line, then p rows of p reals.
    static GaussianDataset from_correlation_file(const std::string& text);
    std::string to_correlation_file() const;
};

CiDecision oracle_answer(const Dag& g, const CiQuery& q);

// Partial correlation of x and y given s from the precision matrix of the
// {x,y} union s correlation submatrix. Throws degenerate_covariance_error
// on a singular submatrix.
double partial_correlation(const GaussianDataset& d, const CiQuery& q);

// z = 0.5 ln((1+r)/(1-r)); statistic = sqrt(n-|s|-3)|z|; p = 2(1 - Phi).
// Ties at p == alpha resolve to dependent.
CiDecision fisher_z_test(const GaussianDataset& d, const CiQuery& q, double alpha);

double normal_cdf(double x);

// Explicit independence facts; anything absent is dependent.
class FactTable {
public:
    void add(int x, int y, std::vector<int> s);
    bool contains(const CiQuery& q) const;
    std::size_t size() const { return independencies_.size(); }

    // One fact per line: "A _||_ C | B1,B2" (empty conditioning allowed).
    static FactTable parse(const std::string& text,
                           const std::vector<std::string>& names);

private:
    std::set<std::tuple<int, int, std::vector<int>>> independencies_;
};

CiDecision table_answer(const FactTable& t, const CiQuery& q);

class DSeparationOracle : public IndependenceSource {
public:
    explicit DSeparationOracle(Dag g) : dag_(std::move(g)) {}
    const Dag& dag() const { return dag_; }

private:
    CiDecision do_answer(const CiQuery& q) const override {
        return oracle_answer(dag_, q);
    }

    Dag dag_;
};

class FisherZSource : public IndependenceSource {
public:
    FisherZSource(GaussianDataset d, double alpha)
        : data_(std::move(d)), alpha_(alpha) {}
    const GaussianDataset& data() const { return data_; }

private:
    CiDecision do_answer(const CiQuery& q) const override {
        return fisher_z_test(data_, q, alpha_);
    }

    GaussianDataset data_;
    double alpha_;
};

class FactTableSource : public IndependenceSource {
public:
    explicit FactTableSource(FactTable t) : table_(std::move(t)) {}

private:
    CiDecision do_answer(const CiQuery& q) const override {
        return table_answer(table_, q);
    }

    FactTable table_;
};

}  // namespace causal
