#include "causal/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "causal/errors.hpp"
#include "causal/search.hpp"

namespace causal {

Triple Triple::make(int a, int b, int c) {
    if (a == b || b == c || a == c)
        throw std::invalid_argument("triple nodes must be distinct");
    if (a > c) std::swap(a, c);
    return Triple{a, b, c};
}

Dag::Dag(std::vector<std::string> names) : names_(std::move(names)) {
    parents_.resize(names_.size());
    children_.resize(names_.size());
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != names_.size())
        throw std::invalid_argument("duplicate node name");
}

const std::string& Dag::name(int i) const {
    check_node(i);
    return names_[i];
}

int Dag::index_of(const std::string& name) const {
    for (int i = 0; i < node_count(); ++i)
        if (names_[i] == name) return i;
    return -1;
}

void Dag::check_node(int i) const {
    if (i < 0 || i >= node_count())
        throw std::invalid_argument("node index out of range");
}

void Dag::add_edge(int parent, int child) {
    check_node(parent);
    check_node(child);
    if (parent == child) throw std::invalid_argument("self-loop");
    if (edges_.count({parent, child}) || edges_.count({child, parent}))
        throw std::invalid_argument("duplicate edge");
    edges_.insert({parent, child});
    auto& ps = parents_[child];
    ps.insert(std::lower_bound(ps.begin(), ps.end(), parent), parent);
    auto& cs = children_[parent];
    cs.insert(std::lower_bound(cs.begin(), cs.end(), child), child);
}

void Dag::remove_edge(int parent, int child) {
    if (!edges_.erase({parent, child}))
        throw std::invalid_argument("no such edge");
    auto& ps = parents_[child];
    ps.erase(std::find(ps.begin(), ps.end(), parent));
    auto& cs = children_[parent];
    cs.erase(std::find(cs.begin(), cs.end(), child));
}

bool Dag::has_edge(int parent, int child) const {
    return edges_.count({parent, child}) != 0;
}

bool Dag::adjacent(int i, int j) const {
    return has_edge(i, j) || has_edge(j, i);
}

const std::vector<int>& Dag::parents(int i) const {
    check_node(i);
    return parents_[i];
}

const std::vector<int>& Dag::children(int i) const {
    check_node(i);
    return children_[i];
}

int Dag::degree(int i) const {
    check_node(i);
    return static_cast<int>(parents_[i].size() + children_[i].size());
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> indeg(node_count(), 0);
    for (const auto& [p, c] : edges_) indeg[c]++;
    std::deque<int> ready;
    for (int i = 0; i < node_count(); ++i)
        if (indeg[i] == 0) ready.push_back(i);
    std::vector<int> order;
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (int c : children_[v])
            if (--indeg[c] == 0) ready.push_back(c);
    }
    if (static_cast<int>(order.size()) != node_count())
        throw std::invalid_argument("edge relation is cyclic");
    return order;
}

bool Dag::is_acyclic() const {
    try {
        topological_order();
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

MixedGraph::MixedGraph(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != names_.size())
        throw std::invalid_argument("duplicate node name");
}

MixedGraph MixedGraph::complete(std::vector<std::string> names) {
    MixedGraph g(std::move(names));
    for (int i = 0; i < g.node_count(); ++i)
        for (int j = i + 1; j < g.node_count(); ++j) g.add_undirected(i, j);
    return g;
}

const std::string& MixedGraph::name(int i) const {
    check_node(i);
    return names_[i];
}

int MixedGraph::index_of(const std::string& name) const {
    for (int i = 0; i < node_count(); ++i)
        if (names_[i] == name) return i;
    return -1;
}

void MixedGraph::check_node(int i) const {
    if (i < 0 || i >= node_count())
        throw std::invalid_argument("node index out of range");
}

std::pair<int, int> MixedGraph::key(int i, int j) {
    return i < j ? std::pair{i, j} : std::pair{j, i};
}

void MixedGraph::add_edge(int i, int j, Mark at_i, Mark at_j) {
    check_node(i);
    check_node(j);
    if (i == j) throw std::invalid_argument("self-loop");
    auto k = key(i, j);
    if (edges_.count(k)) throw std::invalid_argument("duplicate edge");
    edges_[k] = (i < j) ? std::pair{at_i, at_j} : std::pair{at_j, at_i};
}

void MixedGraph::add_undirected(int i, int j) { add_edge(i, j, Mark::Tail, Mark::Tail); }

void MixedGraph::add_directed(int from, int to) { add_edge(from, to, Mark::Tail, Mark::Arrow); }

void MixedGraph::remove_edge(int i, int j) {
    if (!edges_.erase(key(i, j))) throw std::invalid_argument("no such edge");
}

bool MixedGraph::adjacent(int i, int j) const { return edges_.count(key(i, j)) != 0; }

Mark MixedGraph::mark_at(int at, int other) const {
    auto it = edges_.find(key(at, other));
    if (it == edges_.end()) throw std::invalid_argument("no such edge");
    return at < other ? it->second.first : it->second.second;
}

void MixedGraph::set_mark(int at, int other, Mark m) {
    auto it = edges_.find(key(at, other));
    if (it == edges_.end()) throw std::invalid_argument("no such edge");
    (at < other ? it->second.first : it->second.second) = m;
}

bool MixedGraph::is_undirected(int i, int j) const {
    auto it = edges_.find(key(i, j));
    return it != edges_.end() && it->second.first == Mark::Tail &&
           it->second.second == Mark::Tail;
}

bool MixedGraph::is_directed(int from, int to) const {
    return adjacent(from, to) && mark_at(from, to) == Mark::Tail &&
           mark_at(to, from) == Mark::Arrow;
}

bool MixedGraph::has_arrowhead_at(int at, int other) const {
    return adjacent(at, other) && mark_at(at, other) == Mark::Arrow;
}

std::vector<int> MixedGraph::adjacent_nodes(int i) const {
    check_node(i);
    std::vector<int> out;
    for (const auto& [k, marks] : edges_) {
        if (k.first == i) out.push_back(k.second);
        else if (k.second == i) out.push_back(k.first);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void MixedGraph::add_underline(const Triple& t) {
    auto canon = Triple::make(t.a, t.b, t.c);
    if (!adjacent(canon.a, canon.b) || !adjacent(canon.c, canon.b) ||
        adjacent(canon.a, canon.c))
        throw std::invalid_argument("underlined triple must be unshielded");
    underlines_.insert(canon);
}

void MixedGraph::remove_underline(const Triple& t) {
    underlines_.erase(Triple::make(t.a, t.b, t.c));
}

bool MixedGraph::is_underlined(const Triple& t) const {
    return underlines_.count(Triple::make(t.a, t.b, t.c)) != 0;
}

std::vector<int> adjacents(const Dag& g, int x) {
    if (x < 0 || x >= g.node_count())
        throw std::invalid_argument("unknown node");
    std::vector<int> out(g.parents(x));
    out.insert(out.end(), g.children(x).begin(), g.children(x).end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> adjacents(const MixedGraph& g, int x) { return g.adjacent_nodes(x); }

bool d_separated(const Dag& g, int x, int y, const std::vector<int>& s) {
    const int n = g.node_count();
    auto check = [&](int v) {
        if (v < 0 || v >= n) throw std::invalid_argument("unknown node");
    };
    check(x);
    check(y);
    if (x == y) throw std::invalid_argument("x and y must differ");
    std::vector<char> in_s(n, 0);
    for (int v : s) {
        check(v);
        if (v == x || v == y)
            throw std::invalid_argument("conditioning set contains an endpoint");
        in_s[v] = 1;
    }

    // Ancestors of s, including s itself.
    std::vector<char> anc(n, 0);
    {
        std::deque<int> q(s.begin(), s.end());
        for (int v : s) anc[v] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int p : g.parents(v))
                if (!anc[p]) {
                    anc[p] = 1;
                    q.push_back(p);
                }
        }
    }

    // State (node, arrived-from-child?). Start at x as if from a child.
    constexpr int kUp = 0, kDown = 1;
    std::vector<std::array<char, 2>> seen(n, {0, 0});
    std::deque<std::pair<int, int>> q;
    q.push_back({x, kUp});
    seen[x][kUp] = 1;
    auto push = [&](int v, int dir) {
        if (v == y) return true;
        if (!seen[v][dir]) {
            seen[v][dir] = 1;
            q.push_back({v, dir});
        }
        return false;
    };
    while (!q.empty()) {
        auto [v, dir] = q.front();
        q.pop_front();
        if (dir == kUp) {
            if (!in_s[v]) {
                for (int p : g.parents(v))
                    if (push(p, kUp)) return false;
                for (int c : g.children(v))
                    if (push(c, kDown)) return false;
            }
        } else {
            if (!in_s[v])
                for (int c : g.children(v))
                    if (push(c, kDown)) return false;
            if (anc[v])
                for (int p : g.parents(v))
                    if (push(p, kUp)) return false;
        }
    }
    return true;
}

namespace {

template <typename G>
std::set<Triple> unshielded_triples_impl(const G& g) {
    std::set<Triple> out;
    for (int b = 0; b < g.node_count(); ++b) {
        auto adj = adjacents(g, b);
        for (std::size_t i = 0; i < adj.size(); ++i)
            for (std::size_t j = i + 1; j < adj.size(); ++j)
                if (!g.adjacent(adj[i], adj[j]))
                    out.insert(Triple::make(adj[i], b, adj[j]));
    }
    return out;
}

}  // namespace

std::set<Triple> unshielded_triples(const Dag& g) { return unshielded_triples_impl(g); }
std::set<Triple> unshielded_triples(const MixedGraph& g) { return unshielded_triples_impl(g); }

bool is_collider_in_dag(const Dag& g, const Triple& t) {
    if (!g.adjacent(t.a, t.b) || !g.adjacent(t.c, t.b) || g.adjacent(t.a, t.c))
        throw std::invalid_argument("triple is not unshielded");
    return g.has_edge(t.a, t.b) && g.has_edge(t.c, t.b);
}

MixedGraph skeleton_of(const Dag& g) {
    MixedGraph out(g.names());
    for (const auto& [p, c] : g.edges()) out.add_undirected(p, c);
    return out;
}

MixedGraph dag_to_pattern(const Dag& g) {
    MixedGraph out = skeleton_of(g);
    for (const Triple& t : unshielded_triples(g)) {
        if (is_collider_in_dag(g, t)) {
            out.set_mark(t.b, t.a, Mark::Arrow);
            out.set_mark(t.b, t.c, Mark::Arrow);
        }
    }
    return meek_closure(out);
}

std::vector<Dag> represented_dags(const MixedGraph& e, int cap) {
    if (e.node_count() > cap)
        throw capacity_error("represented_dags: node count exceeds enumeration cap");

    std::vector<std::pair<int, int>> fixed;  // parent -> child
    std::vector<std::pair<int, int>> free;   // orientation to choose
    for (const auto& [k, marks] : e.edge_marks()) {
        auto [i, j] = k;
        if (marks.first == Mark::Tail && marks.second == Mark::Arrow)
            fixed.push_back({i, j});
        else if (marks.first == Mark::Arrow && marks.second == Mark::Tail)
            fixed.push_back({j, i});
        else
            free.push_back({i, j});
    }

    std::set<Triple> e_colliders;
    for (const Triple& t : unshielded_triples(e))
        if (e.has_arrowhead_at(t.b, t.a) && e.has_arrowhead_at(t.b, t.c))
            e_colliders.insert(t);

    std::vector<Dag> out;
    const std::size_t combos = std::size_t{1} << free.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
        Dag cand(e.names());
        for (const auto& [p, c] : fixed) cand.add_edge(p, c);
        for (std::size_t b = 0; b < free.size(); ++b) {
            auto [i, j] = free[b];
            if (mask & (std::size_t{1} << b))
                cand.add_edge(j, i);
            else
                cand.add_edge(i, j);
        }
        if (!cand.is_acyclic()) continue;
        bool ok = true;
        for (const Triple& t : unshielded_triples(cand)) {
            if (is_collider_in_dag(cand, t) && !e_colliders.count(t) &&
                !e.is_underlined(t)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(std::move(cand));
    }
    std::sort(out.begin(), out.end(),
              [](const Dag& a, const Dag& b) { return a.edges() < b.edges(); });
    return out;
}

namespace {

std::string strip(std::string line) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    return line;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(strip(cur));
    return out;
}

}  // namespace

std::string to_text(const MixedGraph& g) {
    std::ostringstream out;
    out << "nodes: ";
    for (int i = 0; i < g.node_count(); ++i)
        out << (i ? "," : "") << g.name(i);
    out << "\n";
    std::vector<std::string> lines;
    for (const auto& [k, marks] : g.edge_marks()) {
        auto [i, j] = k;
        std::string line;
        if (marks.first == Mark::Tail && marks.second == Mark::Arrow)
            line = g.name(i) + " --> " + g.name(j);
        else if (marks.first == Mark::Arrow && marks.second == Mark::Tail)
            line = g.name(j) + " --> " + g.name(i);
        else if (marks.first == Mark::Arrow)  // both arrows
            line = (g.name(i) < g.name(j))
                       ? g.name(i) + " <-> " + g.name(j)
                       : g.name(j) + " <-> " + g.name(i);
        else
            line = (g.name(i) < g.name(j))
                       ? g.name(i) + " --- " + g.name(j)
                       : g.name(j) + " --- " + g.name(i);
        lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out << l << "\n";
    lines.clear();
    for (const Triple& t : g.underlines())
        lines.push_back("underline: " + g.name(t.a) + "," + g.name(t.b) + "," +
                        g.name(t.c));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out << l << "\n";
    return out.str();
}

std::string to_text(const Dag& g) {
    std::ostringstream out;
    out << "nodes: ";
    for (int i = 0; i < g.node_count(); ++i)
        out << (i ? "," : "") << g.name(i);
    out << "\n";
    std::vector<std::string> lines;
    for (const auto& [p, c] : g.edges())
        lines.push_back(g.name(p) + " --> " + g.name(c));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out << l << "\n";
    return out.str();
}

MixedGraph parse_mixed_graph(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    MixedGraph g;
    bool have_nodes = false;
    std::vector<std::array<int, 3>> pending_underlines;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip(raw);
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) {
            throw parse_error("line " + std::to_string(lineno) + ": " + msg);
        };
        if (line.rfind("nodes:", 0) == 0) {
            if (have_nodes) fail("duplicate nodes line");
            auto names = split(line.substr(6), ',');
            if (names.empty() || names[0].empty()) fail("empty node list");
            g = MixedGraph(names);
            have_nodes = true;
            continue;
        }
        if (!have_nodes) fail("nodes line must come first");
        auto lookup = [&](const std::string& nm) {
            int idx = g.index_of(nm);
            if (idx < 0) fail("unknown node '" + nm + "'");
            return idx;
        };
        if (line.rfind("underline:", 0) == 0) {
            auto parts = split(line.substr(10), ',');
            if (parts.size() != 3) fail("underline needs three nodes");
            pending_underlines.push_back(
                {lookup(parts[0]), lookup(parts[1]), lookup(parts[2])});
            continue;
        }
        for (const char* op : {" --> ", " --- ", " <-> "}) {
            auto pos = line.find(op);
            if (pos == std::string::npos) continue;
            int a = lookup(strip(line.substr(0, pos)));
            int b = lookup(strip(line.substr(pos + 5)));
            if (op[1] == '-' && op[3] == '>')
                g.add_directed(a, b);
            else if (op[1] == '<')
                g.add_edge(a, b, Mark::Arrow, Mark::Arrow);
            else
                g.add_undirected(a, b);
            goto next_line;
        }
        fail("unrecognized line '" + line + "'");
    next_line:;
    }
    if (!have_nodes) throw parse_error("missing nodes line");
    for (const auto& [a, b, c] : pending_underlines)
        g.add_underline(Triple::make(a, b, c));
    return g;
}

Dag parse_dag(const std::string& text) {
    MixedGraph m = parse_mixed_graph(text);
    Dag g(m.names());
    for (const auto& [k, marks] : m.edge_marks()) {
        auto [i, j] = k;
        if (marks.first == Mark::Tail && marks.second == Mark::Arrow)
            g.add_edge(i, j);
        else if (marks.first == Mark::Arrow && marks.second == Mark::Tail)
            g.add_edge(j, i);
        else
            throw parse_error("DAG file may only contain directed edges");
    }
    if (!m.underlines().empty())
        throw parse_error("DAG file may not contain underlines");
    if (!g.is_acyclic()) throw parse_error("graph is cyclic");
    return g;
}

}  // namespace causal
