#pragma once

// Test-only reference implementations, kept independent of the library's
// production code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <random>
#include <vector>

#include "causal/citest.hpp"
#include "causal/graph.hpp"

namespace causal::testing {

// d-separation by enumerating every simple path and checking activeness
// clause by clause: non-colliders must avoid s, colliders must be s or an
// ancestor of some member of s.
inline bool brute_force_d_separated(const Dag& g, int x, int y,
                                    const std::vector<int>& s) {
    const int n = g.node_count();
    std::vector<char> in_s(n, 0);
    for (int v : s) in_s[v] = 1;

    auto is_ancestor_of_s = [&](int v) {
        if (in_s[v]) return true;
        std::deque<int> q{v};
        std::vector<char> seen(n, 0);
        seen[v] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int c : g.children(u)) {
                if (in_s[c]) return true;
                if (!seen[c]) {
                    seen[c] = 1;
                    q.push_back(c);
                }
            }
        }
        return false;
    };

    auto path_active = [&](const std::vector<int>& path) {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            const int prev = path[i - 1], v = path[i], next = path[i + 1];
            const bool collider = g.has_edge(prev, v) && g.has_edge(next, v);
            if (collider) {
                if (!is_ancestor_of_s(v)) return false;
            } else {
                if (in_s[v]) return false;
            }
        }
        return true;
    };

    std::vector<char> visited(n, 0);
    std::vector<int> path{x};
    visited[x] = 1;
    bool connected = false;
    std::function<void()> dfs = [&]() {
        if (connected) return;
        const int v = path.back();
        if (v == y) {
            if (path_active(path)) connected = true;
            return;
        }
        for (int u : adjacents(g, v)) {
            if (visited[u]) continue;
            visited[u] = 1;
            path.push_back(u);
            dfs();
            path.pop_back();
            visited[u] = 0;
        }
    };
    dfs();
    return !connected;
}

// Recursive partial-correlation elimination:
// r_xy.s = (r_xy.s' - r_xw.s' r_yw.s') / sqrt((1-r_xw.s'^2)(1-r_yw.s'^2))
// where w is the last element of s and s' = s without w.
inline double recursive_partial_correlation(const Eigen::MatrixXd& corr, int x,
                                            int y, std::vector<int> s) {
    if (s.empty()) return corr(x, y);
    const int w = s.back();
    s.pop_back();
    const double rxy = recursive_partial_correlation(corr, x, y, s);
    const double rxw = recursive_partial_correlation(corr, x, w, s);
    const double ryw = recursive_partial_correlation(corr, y, w, s);
    return (rxy - rxw * ryw) / std::sqrt((1 - rxw * rxw) * (1 - ryw * ryw));
}

// Enumerate every DAG on n labeled nodes (base-3 state per unordered pair).
inline void for_each_dag(int n, const std::function<void(const Dag&)>& fn) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, char('A' + i)));

    std::vector<int> state(pairs.size(), 0);  // 0 none, 1 i->j, 2 j->i
    while (true) {
        Dag g(names);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            if (state[k] == 1) g.add_edge(pairs[k].first, pairs[k].second);
            else if (state[k] == 2) g.add_edge(pairs[k].second, pairs[k].first);
        }
        if (g.is_acyclic()) fn(g);
        std::size_t k = 0;
        while (k < state.size() && state[k] == 2) state[k++] = 0;
        if (k == state.size()) break;
        ++state[k];
    }
}

inline Dag random_test_dag(int n, std::mt19937_64& rng, double edge_prob = 0.35) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, char('A' + i)));
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Dag g(names);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (unit(rng) < edge_prob) g.add_edge(order[i], order[j]);
    return g;
}

// Every subset of {0..n-1} \ {x, y}, as sorted vectors.
inline std::vector<std::vector<int>> all_conditioning_sets(int n, int x, int y) {
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (v != x && v != y) rest.push_back(v);
    std::vector<std::vector<int>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << rest.size()); ++mask) {
        std::vector<int> s;
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (mask & (std::size_t{1} << i)) s.push_back(rest[i]);
        out.push_back(std::move(s));
    }
    return out;
}

// The complete d-separation fact table of g (the Markov facts).
inline FactTable d_separation_facts(const Dag& g) {
    FactTable t;
    const int n = g.node_count();
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (const auto& s : all_conditioning_sets(n, x, y))
                if (d_separated(g, x, y, s)) t.add(x, y, s);
    return t;
}

}  // namespace causal::testing
