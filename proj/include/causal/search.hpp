#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causal/citest.hpp"
#include "causal/graph.hpp"

namespace causal {

enum class Variant { Pc, Cpc };
enum class ConflictPolicy { Record, OverwriteLast, PreferExisting };

struct SearchConfig {
    double alpha = 0.05;
    std::optional<int> max_depth;
    Variant variant = Variant::Pc;
    ConflictPolicy conflict_policy = ConflictPolicy::Record;
};

// Sepset(X, Y) records from the adjacency phase, keyed by unordered pair.
class SepsetMap {
public:
    void record(int x, int y, std::vector<int> s);
    const std::vector<int>* find(int x, int y) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::pair<int, int>, std::vector<int>> entries_;
};

enum class TripleClass { Collider, Noncollider, Unfaithful };

struct SearchResult {
    MixedGraph graph;
    SepsetMap sepsets;
    std::map<Triple, TripleClass> triple_log;
    std::uint64_t ci_queries_used = 0;
    std::chrono::nanoseconds elapsed{0};
};

// Adjacency phase (depth-ascending sepset search over potential parents).
std::pair<MixedGraph, SepsetMap> skeleton_search(const IndependenceSource& src,
                                                 const std::vector<std::string>& nodes,
                                                 const SearchConfig& cfg);

// Orient every unshielded triple <A,B,C> as a collider iff B is not in
// Sepset(A, C).
MixedGraph pc_orient_colliders(const MixedGraph& skel, const SepsetMap& sep,
                               ConflictPolicy policy = ConflictPolicy::Record);

// Conservative classification: re-test A against C over all subsets of
// either endpoint's potential parents and trichotomize on the witness set.
std::pair<MixedGraph, std::map<Triple, TripleClass>> cpc_classify_triples(
    const MixedGraph& skel, const SepsetMap& sep, const IndependenceSource& src,
    const SearchConfig& cfg);

// Meek rules R1-R3 to fixpoint. Underlined triples never serve as the
// unshielded-noncollider premise of a rule.
MixedGraph meek_closure(const MixedGraph& g);

// Drop underlines whose triples ended up with both edges directed.
MixedGraph prune_resolved_underlines(const MixedGraph& g);

SearchResult run_search(const IndependenceSource& src,
                        const std::vector<std::string>& nodes,
                        const SearchConfig& cfg);

}  // namespace causal
