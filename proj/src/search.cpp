#include "causal/search.hpp"

#include <algorithm>
#include <stdexcept>

namespace causal {

namespace {

// Lexicographic k-subsets of a sorted pool; calls fn(subset) until it
// returns true (stop requested).
template <typename Fn>
bool for_each_subset_of_size(const std::vector<int>& pool, int k, Fn&& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return false;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (fn(subset)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<int> minus_one(const std::vector<int>& xs, int drop) {
    std::vector<int> out;
    out.reserve(xs.size());
    for (int v : xs)
        if (v != drop) out.push_back(v);
    return out;
}

// Add an arrowhead at `at` on edge {from, at}, honoring the conflict policy.
void orient_into(MixedGraph& g, int from, int at, ConflictPolicy policy) {
    if (g.mark_at(at, from) == Mark::Arrow) return;
    if (g.mark_at(from, at) == Mark::Arrow) {
        // Orienting against an existing arrowhead.
        switch (policy) {
            case ConflictPolicy::PreferExisting:
                return;
            case ConflictPolicy::OverwriteLast:
                g.set_mark(from, at, Mark::Tail);
                g.set_mark(at, from, Mark::Arrow);
                return;
            case ConflictPolicy::Record:
                g.set_mark(at, from, Mark::Arrow);  // becomes arrow--arrow
                return;
        }
    }
    g.set_mark(at, from, Mark::Arrow);
}

bool edge_is_oriented(const MixedGraph& g, int i, int j) {
    return g.is_directed(i, j) || g.is_directed(j, i);
}

}  // namespace

void SepsetMap::record(int x, int y, std::vector<int> s) {
    std::sort(s.begin(), s.end());
    entries_[{std::min(x, y), std::max(x, y)}] = std::move(s);
}

const std::vector<int>* SepsetMap::find(int x, int y) const {
    auto it = entries_.find({std::min(x, y), std::max(x, y)});
    return it == entries_.end() ? nullptr : &it->second;
}

std::pair<MixedGraph, SepsetMap> skeleton_search(const IndependenceSource& src,
                                                 const std::vector<std::string>& nodes,
                                                 const SearchConfig& cfg) {
    if (nodes.empty()) throw std::invalid_argument("empty node list");
    if (nodes.size() < 2) throw std::invalid_argument("need at least two nodes");
    MixedGraph u = MixedGraph::complete(nodes);
    SepsetMap sep;
    const int p = u.node_count();

    int depth = 0;
    while (true) {
        if (cfg.max_depth && depth > *cfg.max_depth) break;
        for (int i = 0; i < p; ++i) {
            for (int j = i + 1; j < p; ++j) {
                if (!u.adjacent(i, j)) continue;
                bool removed = false;
                for (int x : {i, j}) {
                    const int y = (x == i) ? j : i;
                    auto pool = minus_one(u.adjacent_nodes(x), y);
                    if (static_cast<int>(pool.size()) < depth) continue;
                    removed = for_each_subset_of_size(
                        pool, depth, [&](const std::vector<int>& s) {
                            if (src.answer(CiQuery{x, y, s}).independent) {
                                u.remove_edge(i, j);
                                sep.record(i, j, s);
                                return true;
                            }
                            return false;
                        });
                    if (removed) break;
                }
            }
        }
        ++depth;
        bool any = false;
        for (const auto& [k, marks] : u.edge_marks()) {
            (void)marks;
            if (static_cast<int>(u.adjacent_nodes(k.first).size()) - 1 >= depth ||
                static_cast<int>(u.adjacent_nodes(k.second).size()) - 1 >= depth) {
                any = true;
                break;
            }
        }
        if (!any) break;
    }
    return {std::move(u), std::move(sep)};
}

MixedGraph pc_orient_colliders(const MixedGraph& skel, const SepsetMap& sep,
                               ConflictPolicy policy) {
    MixedGraph out = skel;
    for (const Triple& t : unshielded_triples(skel)) {
        const auto* s = sep.find(t.a, t.c);
        if (!s)
            throw std::logic_error("missing sepset for unshielded triple " +
                                   skel.name(t.a) + "," + skel.name(t.b) + "," +
                                   skel.name(t.c));
        if (std::find(s->begin(), s->end(), t.b) == s->end()) {
            orient_into(out, t.a, t.b, policy);
            orient_into(out, t.c, t.b, policy);
        }
    }
    return out;
}

std::pair<MixedGraph, std::map<Triple, TripleClass>> cpc_classify_triples(
    const MixedGraph& skel, const SepsetMap& sep, const IndependenceSource& src,
    const SearchConfig& cfg) {
    MixedGraph out = skel;
    std::map<Triple, TripleClass> log;
    for (const Triple& t : unshielded_triples(skel)) {
        const auto* recorded = sep.find(t.a, t.c);
        if (!recorded)
            throw std::logic_error("missing sepset for unshielded triple " +
                                   skel.name(t.a) + "," + skel.name(t.b) + "," +
                                   skel.name(t.c));
        bool b_in_all =
            std::find(recorded->begin(), recorded->end(), t.b) != recorded->end();
        bool b_in_none = !b_in_all;

        auto consider = [&](const std::vector<int>& s) {
            if (!src.answer(CiQuery{t.a, t.c, s}).independent) return false;
            if (std::find(s.begin(), s.end(), t.b) != s.end())
                b_in_none = false;
            else
                b_in_all = false;
            return !b_in_all && !b_in_none;  // already unfaithful, stop
        };
        for (int x : {t.a, t.c}) {
            const int other = (x == t.a) ? t.c : t.a;
            auto pool = minus_one(skel.adjacent_nodes(x), other);
            const int cap = cfg.max_depth
                                ? std::min<int>(*cfg.max_depth,
                                                static_cast<int>(pool.size()))
                                : static_cast<int>(pool.size());
            bool stop = false;
            for (int n = 0; n <= cap && !stop; ++n)
                stop = for_each_subset_of_size(pool, n, consider);
            if (stop) break;
        }

        TripleClass cls;
        if (b_in_none) {
            cls = TripleClass::Collider;
            orient_into(out, t.a, t.b, cfg.conflict_policy);
            orient_into(out, t.c, t.b, cfg.conflict_policy);
        } else if (b_in_all) {
            cls = TripleClass::Noncollider;
        } else {
            cls = TripleClass::Unfaithful;
            out.add_underline(t);
        }
        log.emplace(t, cls);
    }
    return {std::move(out), std::move(log)};
}

MixedGraph meek_closure(const MixedGraph& g) {
    MixedGraph out = g;
    const int p = out.node_count();
    bool changed = true;
    while (changed) {
        changed = false;
        // R1: a -> b, b - c, a and c non-adjacent, <a,b,c> not underlined.
        for (int a = 0; a < p; ++a) {
            for (int b : out.adjacent_nodes(a)) {
                if (!out.is_directed(a, b)) continue;
                for (int c : out.adjacent_nodes(b)) {
                    if (c == a || !out.is_undirected(b, c)) continue;
                    if (out.adjacent(a, c)) continue;
                    if (out.is_underlined(Triple::make(a, b, c))) continue;
                    out.set_mark(c, b, Mark::Arrow);
                    changed = true;
                }
            }
        }
        // R2: a -> b -> c with a - c.
        for (const auto& [k, marks] : out.edge_marks()) {
            (void)marks;
            for (auto [a, c] : {std::pair{k.first, k.second}, {k.second, k.first}}) {
                if (!out.is_undirected(a, c)) continue;
                for (int b : out.adjacent_nodes(a)) {
                    if (b == c) continue;
                    if (out.is_directed(a, b) && out.is_directed(b, c)) {
                        out.set_mark(c, a, Mark::Arrow);
                        changed = true;
                        break;
                    }
                }
            }
        }
        // R3: a - b, a - c, a - d, c -> b, d -> b, c and d non-adjacent,
        // <c,a,d> not underlined.
        for (const auto& [k, marks] : out.edge_marks()) {
            (void)marks;
            for (auto [a, b] : {std::pair{k.first, k.second}, {k.second, k.first}}) {
                if (!out.is_undirected(a, b)) continue;
                auto adj = out.adjacent_nodes(a);
                bool done = false;
                for (std::size_t ci = 0; ci < adj.size() && !done; ++ci) {
                    int c = adj[ci];
                    if (c == b || !out.is_undirected(a, c) || !out.is_directed(c, b))
                        continue;
                    for (std::size_t di = 0; di < adj.size() && !done; ++di) {
                        int d = adj[di];
                        if (d == b || d == c || !out.is_undirected(a, d) ||
                            !out.is_directed(d, b))
                            continue;
                        if (out.adjacent(c, d)) continue;
                        if (out.is_underlined(Triple::make(c, a, d))) continue;
                        out.set_mark(b, a, Mark::Arrow);
                        changed = true;
                        done = true;
                    }
                }
            }
        }
    }
    return out;
}

MixedGraph prune_resolved_underlines(const MixedGraph& g) {
    MixedGraph out = g;
    for (const Triple& t : g.underlines())
        if (edge_is_oriented(out, t.a, t.b) && edge_is_oriented(out, t.c, t.b))
            out.remove_underline(t);
    return out;
}

SearchResult run_search(const IndependenceSource& src,
                        const std::vector<std::string>& nodes,
                        const SearchConfig& cfg) {
    const auto queries_before = src.query_count();
    const auto start = std::chrono::steady_clock::now();

    auto [skel, sep] = skeleton_search(src, nodes, cfg);
    SearchResult result;
    if (cfg.variant == Variant::Pc) {
        result.graph = pc_orient_colliders(skel, sep, cfg.conflict_policy);
        for (const Triple& t : unshielded_triples(skel)) {
            const auto* s = sep.find(t.a, t.c);
            bool collider =
                s && std::find(s->begin(), s->end(), t.b) == s->end();
            result.triple_log.emplace(
                t, collider ? TripleClass::Collider : TripleClass::Noncollider);
        }
    } else {
        auto [g, log] = cpc_classify_triples(skel, sep, src, cfg);
        result.graph = std::move(g);
        result.triple_log = std::move(log);
    }
    result.graph = meek_closure(result.graph);
    if (cfg.variant == Variant::Cpc)
        result.graph = prune_resolved_underlines(result.graph);

    result.sepsets = std::move(sep);
    result.elapsed = std::chrono::steady_clock::now() - start;
    result.ci_queries_used = src.query_count() - queries_before;
    return result;
}

}  // namespace causal
