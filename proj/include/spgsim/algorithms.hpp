#pragma once

#include <string>
#include <vector>

#include "spgsim/engine.hpp"
#include "spgsim/partition.hpp"

namespace spgsim {

enum class Algo { trident, summa, oned };

const char* algo_name(Algo a);
Algo algo_from_name(const std::string& name);  // throws ParameterError

/// Static Cannon access pattern: at round r, process (i,j,k) works on inner
/// block s = (r + i + j) mod q, fetching A from (i,s,k) and B from (s,j,k).
/// The (i+j) offset is the stagger that aligns tiles for round 0.
struct TridentSchedule {
    int q = 0;

    explicit TridentSchedule(int q) : q(q) {}
    int inner_block(int i, int j, int r) const { return (r + i + j) % q; }
    int a_owner(const TridentGrid& g, int i, int j, int k, int r) const {
        return g.rank_of(i, inner_block(i, j, r), k);
    }
    int b_owner(const TridentGrid& g, int i, int j, int k, int r) const {
        return g.rank_of(inner_block(i, j, r), j, k);
    }
};

struct DriverResult {
    CsrMatrix c;  // reassembled global product
    CommLedger ledger;
    EventTimeline timeline;
    double makespan = 0.0;
    int rounds = 0;
};

// Hybrid 2D+1D driver: per round, paired internode point-to-point transfers
// bring the A and B slices (k-th slice to k-th slice), an intranode
// allgather reconstructs the full B block, and each process accumulates
// C_ijk += A_isk * B_sj locally. C never moves.
DriverResult trident_spgemm(const CsrMatrix& a, const CsrMatrix& b, const TridentGrid& grid,
                            const TopologySpec& topo,
                            const std::vector<double>& node_start_delay = {});

// Sparse SUMMA baseline: sqrt(P) bulk-synchronous stages; stage r broadcasts
// A(i,r) along each process row and B(r,j) along each process column. Every
// receiver is charged one point-to-point receive of the full tile; receives
// of one stage start together (pipelined broadcast, no tree modeled).
DriverResult summa_spgemm(const CsrMatrix& a, const CsrMatrix& b, int procs, int gpus_per_node,
                          const TopologySpec& topo);

// Sparsity-aware 1D baseline: row blocks; each process requests exactly the
// remote B rows named by its A block's column indices (index request, then
// one sub-CSR payload per owner).
DriverResult oned_spgemm(const CsrMatrix& a, const CsrMatrix& b, int procs, int gpus_per_node,
                         const TopologySpec& topo);

DriverResult run_algo(Algo algo, const CsrMatrix& a, const CsrMatrix& b, int procs,
                      int gpus_per_node, const TopologySpec& topo);

}  // namespace spgsim
