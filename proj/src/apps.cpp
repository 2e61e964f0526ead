#include "spgsim/apps.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace spgsim {

void MclParams::validate() const {
    if (iterations < 1) throw ParameterError("mcl: iterations must be >= 1");
    if (prune_threshold < 0.0) throw ParameterError("mcl: negative prune threshold");
}

std::string MclResult::clusters_csv() const {
    std::ostringstream out;
    out << "vertex,cluster\n";
    for (std::size_t v = 0; v < cluster_of.size(); ++v)
        out << v << ',' << cluster_of[v] << '\n';
    return out.str();
}

namespace {

struct UnionFind {
    std::vector<index_t> parent;

    explicit UnionFind(index_t n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    index_t find(index_t x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(index_t a, index_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);  // keep the smallest vertex as the root
        parent[static_cast<std::size_t>(b)] = a;
    }
};

}  // namespace

std::pair<std::vector<index_t>, index_t> connected_components(const CsrMatrix& m) {
    if (m.nrows != m.ncols) throw DimensionError("connected_components: matrix not square");
    UnionFind uf(m.nrows);
    for (index_t i = 0; i < m.nrows; ++i)
        for (index_t t = m.rowptr[static_cast<std::size_t>(i)];
             t < m.rowptr[static_cast<std::size_t>(i) + 1]; ++t)
            uf.unite(i, m.colind[static_cast<std::size_t>(t)]);
    std::vector<index_t> label(static_cast<std::size_t>(m.nrows), -1);
    index_t next = 0;
    for (index_t v = 0; v < m.nrows; ++v) {
        const index_t root = uf.find(v);
        if (label[static_cast<std::size_t>(root)] < 0)
            label[static_cast<std::size_t>(root)] = next++;
        label[static_cast<std::size_t>(v)] = label[static_cast<std::size_t>(root)];
    }
    return {label, next};
}

MclResult mcl(const CsrMatrix& a, const MclParams& params, Algo algo, int procs,
              int gpus_per_node, const TopologySpec& topo) {
    params.validate();
    if (a.nrows != a.ncols) throw DimensionError("mcl: matrix not square");
    for (const double v : a.values)
        if (v < 0.0) throw ParameterError("mcl: matrix must be nonnegative");

    MclResult res;
    CsrMatrix m = a;
    for (int it = 0; it < params.iterations; ++it) {
        DriverResult dr = run_algo(algo, m, m, procs, gpus_per_node, topo);  // expansion
        m = column_normalize(dr.c);
        m = prune(m, params.prune_threshold);
        m = elementwise_power(m, params.inflation_exponent);
        m = column_normalize(m);

        RunConfig cfg;
        cfg.algo = algo_name(algo);
        cfg.procs = procs;
        cfg.gpus_per_node = gpus_per_node;
        cfg.topology = topo;
        cfg.matrix_a = "mcl-iteration-" + std::to_string(it);
        cfg.square = true;
        res.iteration_reports.push_back(make_report(std::move(cfg), dr, nullptr, std::nullopt));
    }
    auto [labels, count] = connected_components(m);
    res.cluster_of = std::move(labels);
    res.n_clusters = count;
    res.final_matrix = std::move(m);
    return res;
}

CsrMatrix make_restriction(index_t nrows, index_t agg_size) {
    if (agg_size < 1) throw ParameterError("make_restriction: agg_size must be >= 1");
    const index_t ncols = (nrows + agg_size - 1) / agg_size;
    CsrMatrix r = CsrMatrix::zeros(nrows, ncols);
    r.colind.resize(static_cast<std::size_t>(nrows));
    r.values.assign(static_cast<std::size_t>(nrows), 1.0);
    for (index_t i = 0; i < nrows; ++i) {
        r.rowptr[static_cast<std::size_t>(i) + 1] = i + 1;
        r.colind[static_cast<std::size_t>(i)] = i / agg_size;
    }
    return r;
}

std::string PermutationStudy::to_csv() const {
    std::ostringstream out;
    out << "algo,variant,gi_nnz_sent,li_nnz_sent,total_nnz_sent,gi_bytes_sent,li_bytes_sent,"
           "makespan_seconds,verified\n";
    for (const auto& run : runs) {
        for (const bool permuted : {false, true}) {
            const RunReport& rep = permuted ? run.permuted : run.original;
            const LedgerCell gi = rep.ledger.total_sent(LinkClass::GI);
            const LedgerCell li = rep.ledger.total_sent(LinkClass::LI);
            out << run.algo << ',' << (permuted ? "permuted" : "original") << ',' << gi.nnz << ','
                << li.nnz << ',' << gi.nnz + li.nnz << ',' << gi.bytes << ',' << li.bytes << ','
                << rep.makespan_seconds << ',' << (rep.verified.value_or(false) ? "true" : "false")
                << '\n';
        }
    }
    return out.str();
}

PermutationStudy permutation_study(const CsrMatrix& a, std::uint64_t seed,
                                   const std::vector<Algo>& algos, int procs, int gpus_per_node,
                                   const TopologySpec& topo) {
    if (a.nrows != a.ncols) throw DimensionError("permutation_study: matrix not square");
    PermutationStudy study;
    study.seed = seed;
    const Permutation perm = Permutation::random(a.nrows, seed);
    const CsrMatrix ap = permute_symmetric(a, perm);
    const CsrMatrix oracle = spgemm_local(a, a);
    const CsrMatrix oracle_p = spgemm_local(ap, ap);

    for (const Algo algo : algos) {
        PermutationRun run;
        run.algo = algo_name(algo);
        for (const bool permuted : {false, true}) {
            const CsrMatrix& m = permuted ? ap : a;
            DriverResult dr = run_algo(algo, m, m, procs, gpus_per_node, topo);
            const bool ok = allclose(dr.c, permuted ? oracle_p : oracle, 1e-12);
            RunConfig cfg;
            cfg.algo = run.algo;
            cfg.procs = procs;
            cfg.gpus_per_node = gpus_per_node;
            cfg.topology = topo;
            cfg.matrix_a = permuted ? "permuted" : "original";
            cfg.square = true;
            cfg.seed = seed;
            (permuted ? run.permuted : run.original) =
                make_report(std::move(cfg), dr, nullptr, ok);
        }
        study.runs.push_back(std::move(run));
    }
    return study;
}

}  // namespace spgsim
