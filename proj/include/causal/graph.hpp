#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace causal {

// Endpoint mark on a mixed-graph edge. tail--tail is undirected,
// tail--arrow is directed, arrow--arrow records an orientation conflict.
enum class Mark : std::uint8_t { Tail, Arrow };

// Unshielded triple <a, b, c> with midpoint b, canonicalized so a < c.
struct Triple {
    int a;
    int b;
    int c;

    static Triple make(int a, int b, int c);

    auto operator<=>(const Triple&) const = default;
};

// Directed acyclic graph over named nodes. Edges run parent -> child.
// Acyclicity is the caller's invariant; topological_order() verifies it.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::vector<std::string> names);

    int node_count() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const;
    const std::vector<std::string>& names() const { return names_; }
    int index_of(const std::string& name) const;  // -1 if absent

    void add_edge(int parent, int child);
    void remove_edge(int parent, int child);
    bool has_edge(int parent, int child) const;
    bool adjacent(int i, int j) const;
    const std::vector<int>& parents(int i) const;
    const std::vector<int>& children(int i) const;
    const std::set<std::pair<int, int>>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int degree(int i) const;

    bool is_acyclic() const;
    // Throws std::invalid_argument if the edge relation is cyclic.
    std::vector<int> topological_order() const;

    bool operator==(const Dag&) const = default;

private:
    void check_node(int i) const;

    std::vector<std::string> names_;
    std::set<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
};

// Pattern / e-pattern: per-edge endpoint marks plus underlined triples.
class MixedGraph {
public:
    using EdgeMap = std::map<std::pair<int, int>, std::pair<Mark, Mark>>;

    MixedGraph() = default;
    explicit MixedGraph(std::vector<std::string> names);
    static MixedGraph complete(std::vector<std::string> names);

    int node_count() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const;
    const std::vector<std::string>& names() const { return names_; }
    int index_of(const std::string& name) const;

    void add_undirected(int i, int j);
    void add_directed(int from, int to);
    void add_edge(int i, int j, Mark at_i, Mark at_j);
    void remove_edge(int i, int j);
    bool adjacent(int i, int j) const;
    int edge_count() const { return static_cast<int>(edges_.size()); }

    // Mark sitting at endpoint `at` of edge {at, other}.
    Mark mark_at(int at, int other) const;
    void set_mark(int at, int other, Mark m);

    bool is_undirected(int i, int j) const;
    bool is_directed(int from, int to) const;  // tail at from, arrow at to
    bool has_arrowhead_at(int at, int other) const;

    std::vector<int> adjacent_nodes(int i) const;
    const EdgeMap& edge_marks() const { return edges_; }

    const std::set<Triple>& underlines() const { return underlines_; }
    void add_underline(const Triple& t);
    void remove_underline(const Triple& t);
    bool is_underlined(const Triple& t) const;

    bool operator==(const MixedGraph&) const = default;

private:
    void check_node(int i) const;
    static std::pair<int, int> key(int i, int j);

    std::vector<std::string> names_;
    EdgeMap edges_;
    std::set<Triple> underlines_;
};

// ADJ(g, x): nodes sharing an edge with x, any direction / any marks.
std::vector<int> adjacents(const Dag& g, int x);
std::vector<int> adjacents(const MixedGraph& g, int x);

// True iff no path between x and y is active given s (reachability over
// (node, travel-direction) states; a collider in s itself counts as an
// ancestor of s).
bool d_separated(const Dag& g, int x, int y, const std::vector<int>& s);

std::set<Triple> unshielded_triples(const Dag& g);
std::set<Triple> unshielded_triples(const MixedGraph& g);

bool is_collider_in_dag(const Dag& g, const Triple& t);

// Skeleton of g with all edges tail--tail.
MixedGraph skeleton_of(const Dag& g);

// The pattern (CPDAG) of g: unshielded colliders oriented, Meek closure
// applied, everything else undirected.
MixedGraph dag_to_pattern(const Dag& g);

// All DAGs represented by the e-pattern: same adjacencies, directed edges
// honored, every unshielded collider of the DAG is a collider or an
// underlined triple of e. Throws capacity_error above `cap` nodes.
std::vector<Dag> represented_dags(const MixedGraph& e, int cap = 8);

// Graph text format.
std::string to_text(const Dag& g);
std::string to_text(const MixedGraph& g);
MixedGraph parse_mixed_graph(const std::string& text);
Dag parse_dag(const std::string& text);

}  // namespace causal
