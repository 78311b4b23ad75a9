#include "causal/simulate.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "causal/errors.hpp"

namespace causal {

void Sem::validate() const {
    for (const auto& [edge, coef] : coefficients) {
        (void)coef;
        if (!dag.edges().count(edge))
            throw std::invalid_argument("coefficient for a non-edge");
    }
    if (coefficients.size() != dag.edges().size())
        throw std::invalid_argument("every edge needs a coefficient");
    if (static_cast<int>(noise_std.size()) != dag.node_count())
        throw std::invalid_argument("every node needs a noise std");
    for (double s : noise_std)
        if (s <= 0.0) throw std::invalid_argument("noise std must be positive");
}

namespace {

std::vector<std::string> default_names(int d) {
    std::vector<std::string> names;
    names.reserve(d);
    for (int i = 0; i < d; ++i) names.push_back("X" + std::to_string(i + 1));
    return names;
}

}  // namespace

Dag random_dag(const GraphSpec& spec, RngSeed seed) {
    if (spec.dimension <= 0 || spec.max_edges <= 0 || spec.max_degree < 1)
        throw std::invalid_argument("invalid graph spec");
    const int d = spec.dimension;
    const long pair_count = static_cast<long>(d) * (d - 1) / 2;
    const long max_edges = std::min<long>(spec.max_edges, pair_count);

    std::mt19937_64 rng(seed);
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    std::uniform_int_distribution<long> edge_count_dist(0, max_edges);
    const long target = edge_count_dist(rng);

    Dag g(default_names(d));
    std::uniform_int_distribution<int> pos_dist(0, d - 1);
    // Only degree-cap violations count toward the give-up budget; redrawing
    // an already-placed pair is expected when the target nears pair_count, so
    // duplicates get their own (generous) termination guard instead.
    long rejections = 0;
    const long rejection_cap = 10 * std::max<long>(1, spec.max_edges);
    long attempts = 0;
    const long attempt_cap = 200 * std::max<long>(pair_count, 1);
    long placed = 0;
    while (placed < target && rejections < rejection_cap &&
           attempts < attempt_cap) {
        ++attempts;
        int i = pos_dist(rng), j = pos_dist(rng);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        const int parent = order[i], child = order[j];
        if (g.adjacent(parent, child)) continue;
        if (g.degree(parent) >= spec.max_degree ||
            g.degree(child) >= spec.max_degree) {
            ++rejections;
            continue;
        }
        g.add_edge(parent, child);
        ++placed;
    }
    return g;
}

Sem random_sem(const Dag& g, RngSeed seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> strong(0.5, 1.5);
    std::uniform_real_distribution<double> weak(-0.001, 0.001);
    Sem m;
    m.dag = g;
    for (const auto& edge : g.edges()) {
        double coef;
        if (unit(rng) < 0.95) {
            coef = strong(rng);
            if (unit(rng) < 0.5) coef = -coef;
        } else {
            coef = weak(rng);
        }
        m.coefficients[edge] = coef;
    }
    m.noise_std.assign(g.node_count(), 1.0);
    return m;
}

Eigen::MatrixXd simulate_rows(const Sem& m, std::int64_t n, RngSeed seed) {
    if (n < 4) throw std::invalid_argument("need at least 4 samples");
    m.validate();
    const int p = m.dag.node_count();
    const auto order = m.dag.topological_order();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd rows(n, p);
    for (std::int64_t r = 0; r < n; ++r) {
        for (int v : order) {
            double value = m.noise_std[v] * gauss(rng);
            for (int parent : m.dag.parents(v))
                value += m.coefficients.at({parent, v}) * rows(r, parent);
            rows(r, v) = value;
        }
    }
    return rows;
}

GaussianDataset simulate_data(const Sem& m, std::int64_t n, RngSeed seed) {
    return GaussianDataset::from_raw(m.dag.names(), simulate_rows(m, n, seed));
}

Eigen::MatrixXd population_correlation(const Sem& m) {
    m.validate();
    const int p = m.dag.node_count();
    Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(p, p);  // coef(child, parent)
    for (const auto& [edge, c] : m.coefficients) coef(edge.second, edge.first) = c;
    Eigen::MatrixXd id_minus = Eigen::MatrixXd::Identity(p, p) - coef;
    // Strictly triangular under a topological order, hence invertible.
    Eigen::MatrixXd inv = id_minus.inverse();
    assert(inv.allFinite());
    Eigen::VectorXd noise_var(p);
    for (int i = 0; i < p; ++i) noise_var(i) = m.noise_std[i] * m.noise_std[i];
    Eigen::MatrixXd sigma = inv * noise_var.asDiagonal() * inv.transpose();
    Eigen::VectorXd sd = sigma.diagonal().cwiseSqrt();
    Eigen::MatrixXd corr(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            corr(i, j) = i == j ? 1.0 : sigma(i, j) / (sd(i) * sd(j));
    return corr;
}

std::string to_text(const Sem& m) {
    std::ostringstream out;
    out << to_text(m.dag);
    char buf[64];
    for (const auto& [edge, c] : m.coefficients) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        out << "coef: " << m.dag.name(edge.first) << "->" << m.dag.name(edge.second)
            << " = " << buf << "\n";
    }
    for (int i = 0; i < m.dag.node_count(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", m.noise_std[i]);
        out << "noise: " << m.dag.name(i) << " = " << buf << "\n";
    }
    return out.str();
}

Sem parse_sem(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string graph_text;
    std::vector<std::string> coef_lines, noise_lines;
    while (std::getline(in, line)) {
        if (line.rfind("coef:", 0) == 0)
            coef_lines.push_back(line.substr(5));
        else if (line.rfind("noise:", 0) == 0)
            noise_lines.push_back(line.substr(6));
        else
            graph_text += line + "\n";
    }
    Sem m;
    m.dag = parse_dag(graph_text);
    m.noise_std.assign(m.dag.node_count(), 1.0);
    auto trim = [](std::string s) {
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
        s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
        return s;
    };
    auto lookup = [&](const std::string& nm) {
        int idx = m.dag.index_of(trim(nm));
        if (idx < 0) throw parse_error("unknown node '" + nm + "'");
        return idx;
    };
    for (const auto& l : coef_lines) {
        auto eq = l.find('=');
        auto arrow = l.find("->");
        if (eq == std::string::npos || arrow == std::string::npos || arrow > eq)
            throw parse_error("bad coef line '" + l + "'");
        int parent = lookup(l.substr(0, arrow));
        int child = lookup(l.substr(arrow + 2, eq - arrow - 2));
        m.coefficients[{parent, child}] = std::stod(l.substr(eq + 1));
    }
    for (const auto& l : noise_lines) {
        auto eq = l.find('=');
        if (eq == std::string::npos) throw parse_error("bad noise line '" + l + "'");
        m.noise_std[lookup(l.substr(0, eq))] = std::stod(l.substr(eq + 1));
    }
    m.validate();
    return m;
}

std::string to_csv(const std::vector<std::string>& names,
                   const Eigen::MatrixXd& rows) {
    if (rows.cols() != static_cast<Eigen::Index>(names.size()))
        throw std::invalid_argument("column count mismatch");
    std::ostringstream out;
    for (std::size_t i = 0; i < names.size(); ++i)
        out << (i ? "," : "") << names[i];
    out << "\n";
    char buf[64];
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < rows.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.10g", rows(r, c));
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace causal
