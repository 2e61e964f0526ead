#pragma once

#include <utility>
#include <vector>

#include "spgsim/report.hpp"

namespace spgsim {

struct MclParams {
    int iterations = 10;
    double prune_threshold = 0.002;
    double inflation_exponent = 2.0;

    void validate() const;  // iterations >= 1, threshold >= 0
};

struct MclResult {
    std::vector<index_t> cluster_of;  // vertex -> cluster id
    index_t n_clusters = 0;
    CsrMatrix final_matrix;
    std::vector<RunReport> iteration_reports;

    std::string clusters_csv() const;  // "vertex,cluster" rows
};

// Markov clustering: each iteration squares the matrix with the chosen
// distributed driver, normalizes columns, prunes entries below the
// threshold, applies the element-wise power, and re-normalizes. Clusters
// are the weakly connected components of the final pattern.
MclResult mcl(const CsrMatrix& a, const MclParams& params, Algo algo, int procs,
              int gpus_per_node, const TopologySpec& topo);

// Piecewise-constant aggregation operator: nrows x ceil(nrows/agg_size),
// entry (i, i/agg_size) = 1.
CsrMatrix make_restriction(index_t nrows, index_t agg_size);

// Component labels over the undirected nonzero pattern, numbered in
// ascending order of each component's smallest vertex.
std::pair<std::vector<index_t>, index_t> connected_components(const CsrMatrix& m);

struct PermutationRun {
    std::string algo;
    RunReport original;
    RunReport permuted;
};

struct PermutationStudy {
    std::uint64_t seed = 0;
    std::vector<PermutationRun> runs;

    std::string to_csv() const;  // volumes and makespans side by side
};

// Runs each driver on `a` and on the symmetric random permutation of `a`,
// verifying both results against the serial kernel.
PermutationStudy permutation_study(const CsrMatrix& a, std::uint64_t seed,
                                   const std::vector<Algo>& algos, int procs, int gpus_per_node,
                                   const TopologySpec& topo);

}  // namespace spgsim
