#include "causal/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "causal/errors.hpp"

namespace causal {

namespace {

void check_same_nodes(const MixedGraph& a, const MixedGraph& b) {
    if (a.names() != b.names())
        throw std::invalid_argument("graphs are over different node sets");
}

enum class TripleStatus { Collider, Noncollider, Underlined };

// Status of <t> in g when t is unshielded there; nullopt if the
// adjacencies among the three nodes differ from the unshielded shape.
std::optional<TripleStatus> triple_status(const MixedGraph& g, const Triple& t) {
    if (!g.adjacent(t.a, t.b) || !g.adjacent(t.c, t.b) || g.adjacent(t.a, t.c))
        return std::nullopt;
    if (g.is_underlined(t)) return TripleStatus::Underlined;
    if (g.has_arrowhead_at(t.b, t.a) && g.has_arrowhead_at(t.b, t.c))
        return TripleStatus::Collider;
    return TripleStatus::Noncollider;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngSeed derive_seed(RngSeed base, std::uint64_t a, std::uint64_t b,
                    std::uint64_t c) {
    return splitmix64(splitmix64(splitmix64(base ^ a) ^ b) ^ c);
}

}  // namespace

std::pair<int, int> count_arrow_errors(const MixedGraph& truth,
                                       const MixedGraph& output) {
    check_same_nodes(truth, output);
    int fp = 0, fn = 0;
    for (const auto& [k, marks] : truth.edge_marks()) {
        auto [i, j] = k;
        if (marks.second == Mark::Arrow &&
            (!output.adjacent(i, j) || !output.has_arrowhead_at(j, i)))
            ++fn;
        if (marks.first == Mark::Arrow &&
            (!output.adjacent(i, j) || !output.has_arrowhead_at(i, j)))
            ++fn;
    }
    for (const auto& [k, marks] : output.edge_marks()) {
        auto [i, j] = k;
        if (marks.second == Mark::Arrow &&
            (!truth.adjacent(i, j) || !truth.has_arrowhead_at(j, i)))
            ++fp;
        if (marks.first == Mark::Arrow &&
            (!truth.adjacent(i, j) || !truth.has_arrowhead_at(i, j)))
            ++fp;
    }
    return {fp, fn};
}

std::pair<int, int> count_adjacency_errors(const MixedGraph& truth,
                                           const MixedGraph& output) {
    check_same_nodes(truth, output);
    int fp = 0, fn = 0;
    for (const auto& [k, marks] : output.edge_marks()) {
        (void)marks;
        if (!truth.adjacent(k.first, k.second)) ++fp;
    }
    for (const auto& [k, marks] : truth.edge_marks()) {
        (void)marks;
        if (!output.adjacent(k.first, k.second)) ++fn;
    }
    return {fp, fn};
}

TripleErrors count_triple_errors(const MixedGraph& truth, const MixedGraph& output) {
    check_same_nodes(truth, output);
    TripleErrors e;
    for (const Triple& t : unshielded_triples(output)) {
        auto out_st = *triple_status(output, t);
        if (out_st == TripleStatus::Underlined) continue;
        auto truth_st = triple_status(truth, t);
        if (truth_st && *truth_st == TripleStatus::Underlined) continue;
        const bool matches =
            truth_st && *truth_st == out_st;
        if (matches) continue;
        if (out_st == TripleStatus::Collider)
            ++e.collider_fp;
        else
            ++e.noncollider_fp;
    }
    for (const Triple& t : unshielded_triples(truth)) {
        auto truth_st = *triple_status(truth, t);
        if (truth_st == TripleStatus::Underlined) continue;
        auto out_st = triple_status(output, t);
        if (out_st && *out_st == TripleStatus::Underlined) continue;
        const bool matches = out_st && *out_st == truth_st;
        if (matches) continue;
        if (truth_st == TripleStatus::Collider)
            ++e.collider_fn;
        else
            ++e.noncollider_fn;
    }
    return e;
}

double percent_unfaithful(const MixedGraph& output) {
    const auto total = unshielded_triples(output).size();
    if (total == 0) return 0.0;
    return static_cast<double>(output.underlines().size()) /
           static_cast<double>(total);
}

ErrorCounts compare_to_truth(const MixedGraph& truth, const MixedGraph& output) {
    ErrorCounts c;
    std::tie(c.arrow_fp, c.arrow_fn) = count_arrow_errors(truth, output);
    std::tie(c.adjacency_fp, c.adjacency_fn) = count_adjacency_errors(truth, output);
    const auto t = count_triple_errors(truth, output);
    c.collider_fp = t.collider_fp;
    c.collider_fn = t.collider_fn;
    c.noncollider_fp = t.noncollider_fp;
    c.noncollider_fn = t.noncollider_fn;
    c.unfaithful_count = static_cast<int>(output.underlines().size());
    c.unshielded_total = static_cast<int>(unshielded_triples(output).size());
    return c;
}

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.dimensions.empty() || cfg.replicates <= 0)
        throw std::invalid_argument("invalid benchmark config");
    std::vector<BenchmarkRecord> records;
    const std::uint64_t density_tag = cfg.density == Density::Sparser ? 1 : 2;
    for (int d : cfg.dimensions) {
        for (int rep = 0; rep < cfg.replicates; ++rep) {
            const RngSeed cell =
                derive_seed(cfg.base_seed, density_tag, std::uint64_t(d),
                            std::uint64_t(rep));
            const GraphSpec spec{d, cfg.density == Density::Sparser ? d : 2 * d,
                                 cfg.max_degree};
            const Dag dag = random_dag(spec, splitmix64(cell ^ 1));
            const Sem sem = random_sem(dag, splitmix64(cell ^ 2));
            const MixedGraph truth = dag_to_pattern(dag);
            for (Variant alg : {Variant::Pc, Variant::Cpc}) {
                BenchmarkRecord rec{d, cfg.density, rep, alg, {}, false};
                try {
                    const GaussianDataset data =
                        simulate_data(sem, cfg.sample_size, splitmix64(cell ^ 3));
                    FisherZSource src(data, cfg.alpha);
                    SearchConfig scfg;
                    scfg.alpha = cfg.alpha;
                    scfg.variant = alg;
                    const SearchResult res =
                        run_search(src, dag.names(), scfg);
                    rec.counts = compare_to_truth(truth, res.graph);
                    rec.counts.elapsed = res.elapsed;
                    // Count the triples the search itself judged unfaithful;
                    // underline pruning is presentation-level and would hide
                    // triples whose ambiguity was later resolved.
                    rec.counts.unfaithful_count = 0;
                    for (const auto& [t, cls] : res.triple_log)
                        if (cls == TripleClass::Unfaithful)
                            ++rec.counts.unfaithful_count;
                } catch (const degenerate_covariance_error&) {
                    rec.failed = true;
                }
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

std::vector<AggregateRow> aggregate(const std::vector<BenchmarkRecord>& records) {
    if (records.empty()) throw std::invalid_argument("no records to aggregate");
    std::map<std::tuple<int, int, int>, std::pair<AggregateRow, int>> groups;
    for (const auto& r : records) {
        auto key = std::tuple{r.dimension, static_cast<int>(r.density),
                              static_cast<int>(r.algorithm)};
        auto& [row, n] = groups
                             .try_emplace(key,
                                          AggregateRow{r.dimension, r.density,
                                                       r.algorithm, 0, 0, 0, 0, 0,
                                                       0, 0, 0, 0, 0, 0, 0},
                                          0)
                             .first->second;
        if (r.failed) {
            ++row.excluded;
            continue;
        }
        const auto& c = r.counts;
        row.arrow_fp += c.arrow_fp;
        row.arrow_fn += c.arrow_fn;
        row.adjacency_fp += c.adjacency_fp;
        row.adjacency_fn += c.adjacency_fn;
        row.collider_fp += c.collider_fp;
        row.collider_fn += c.collider_fn;
        row.noncollider_fp += c.noncollider_fp;
        row.noncollider_fn += c.noncollider_fn;
        row.unfaithful_count += c.unfaithful_count;
        row.unshielded_total += c.unshielded_total;
        row.elapsed_ms +=
            std::chrono::duration<double, std::milli>(c.elapsed).count();
        ++n;
    }
    std::vector<AggregateRow> out;
    for (auto& [key, entry] : groups) {
        (void)key;
        auto& [row, n] = entry;
        if (n > 0) {
            const double inv = 1.0 / n;
            row.arrow_fp *= inv;
            row.arrow_fn *= inv;
            row.adjacency_fp *= inv;
            row.adjacency_fn *= inv;
            row.collider_fp *= inv;
            row.collider_fn *= inv;
            row.noncollider_fp *= inv;
            row.noncollider_fn *= inv;
            row.unfaithful_count *= inv;
            row.unshielded_total *= inv;
            row.elapsed_ms *= inv;
        }
        out.push_back(row);
    }
    return out;
}

TripleClass sgs_triple_oracle(const IndependenceSource& src, int node_count,
                              const Triple& t) {
    if (node_count > 10)
        throw capacity_error("sgs_triple_oracle: node count exceeds cap");
    std::vector<int> rest;
    for (int v = 0; v < node_count; ++v)
        if (v != t.a && v != t.c) rest.push_back(v);
    bool b_in_all = true, b_in_none = true;
    const std::size_t combos = std::size_t{1} << rest.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
        std::vector<int> s;
        bool has_b = false;
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (mask & (std::size_t{1} << i)) {
                s.push_back(rest[i]);
                if (rest[i] == t.b) has_b = true;
            }
        if (!src.answer(CiQuery{t.a, t.c, s}).independent) continue;
        if (has_b)
            b_in_none = false;
        else
            b_in_all = false;
    }
    if (b_in_none) return TripleClass::Collider;
    if (b_in_all) return TripleClass::Noncollider;
    return TripleClass::Unfaithful;
}

std::string records_to_csv(const std::vector<BenchmarkRecord>& records,
                           bool zero_elapsed) {
    std::ostringstream out;
    out << "dimension,density,algorithm,replicate,arrow_fp,arrow_fn,adj_fp,adj_fn,"
           "collider_fp,collider_fn,noncollider_fp,noncollider_fn,unfaithful,"
           "unshielded_total,elapsed_ms,failed\n";
    for (const auto& r : records) {
        const auto& c = r.counts;
        const long ms =
            zero_elapsed
                ? 0
                : std::chrono::duration_cast<std::chrono::milliseconds>(c.elapsed)
                      .count();
        out << r.dimension << ',' << to_string(r.density) << ','
            << to_string(r.algorithm) << ',' << r.replicate << ',' << c.arrow_fp
            << ',' << c.arrow_fn << ',' << c.adjacency_fp << ',' << c.adjacency_fn
            << ',' << c.collider_fp << ',' << c.collider_fn << ','
            << c.noncollider_fp << ',' << c.noncollider_fn << ','
            << c.unfaithful_count << ',' << c.unshielded_total << ',' << ms << ','
            << (r.failed ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows,
                             bool zero_elapsed) {
    std::ostringstream out;
    out << "dimension,density,algorithm,arrow_fp,arrow_fn,adj_fp,adj_fn,"
           "collider_fp,collider_fn,noncollider_fp,noncollider_fn,unfaithful,"
           "unshielded_total,elapsed_ms,failed\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.4f", v);
        out << ',' << buf;
    };
    for (const auto& r : rows) {
        out << r.dimension << ',' << to_string(r.density) << ','
            << to_string(r.algorithm);
        put(r.arrow_fp);
        put(r.arrow_fn);
        put(r.adjacency_fp);
        put(r.adjacency_fn);
        put(r.collider_fp);
        put(r.collider_fn);
        put(r.noncollider_fp);
        put(r.noncollider_fn);
        put(r.unfaithful_count);
        put(r.unshielded_total);
        put(zero_elapsed ? 0.0 : r.elapsed_ms);
        out << ',' << r.excluded << "\n";
    }
    return out.str();
}

}  // namespace causal
