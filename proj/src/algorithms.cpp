#include "spgsim/algorithms.hpp"

#include <algorithm>
#include <cmath>

namespace spgsim {

const char* algo_name(Algo a) {
    switch (a) {
        case Algo::trident: return "trident";
        case Algo::summa: return "summa";
        case Algo::oned: return "oned";
    }
    return "?";
}

Algo algo_from_name(const std::string& name) {
    if (name == "trident") return Algo::trident;
    if (name == "summa") return Algo::summa;
    if (name == "oned") return Algo::oned;
    throw ParameterError("unknown algorithm '" + name + "'");
}

DriverResult trident_spgemm(const CsrMatrix& a, const CsrMatrix& b, const TridentGrid& grid,
                            const TopologySpec& topo,
                            const std::vector<double>& node_start_delay) {
    if (a.ncols != b.nrows)
        throw DimensionError("trident_spgemm: a.ncols=" + std::to_string(a.ncols) +
                             " != b.nrows=" + std::to_string(b.nrows));
    const int P = grid.procs;
    const int q = grid.q;
    const int lam = grid.gpus_per_node;
    const TridentSchedule sched(q);

    // Inner-dimension blocks come from the coarse q-grid applied to A's
    // columns and B's rows, so rectangular operands tile consistently.
    PartitionResult pa = partition(a, Scheme::trident, P, lam);
    PartitionResult pb = partition(b, Scheme::trident, P, lam);

    // Full coarse tiles B_sj as the intranode allgather reconstructs them:
    // the vertical concatenation of the lambda row slices.
    std::vector<CsrMatrix> b_coarse(static_cast<std::size_t>(q) * static_cast<std::size_t>(q));
    for (int s = 0; s < q; ++s)
        for (int j = 0; j < q; ++j) {
            std::vector<const CsrMatrix*> slices;
            slices.reserve(static_cast<std::size_t>(lam));
            for (int k = 0; k < lam; ++k)
                slices.push_back(&pb.tiles[static_cast<std::size_t>(grid.rank_of(s, j, k))]);
            b_coarse[static_cast<std::size_t>(s) * static_cast<std::size_t>(q) +
                     static_cast<std::size_t>(j)] = vconcat(slices);
        }

    SimPlan plan;
    plan.procs = P;
    plan.node_of = node_assignment(Scheme::trident, P, lam);
    plan.node_start_delay = node_start_delay;
    plan.rounds.resize(static_cast<std::size_t>(P));
    for (int rank = 0; rank < P; ++rank) {
        const auto c = grid.coords_of(rank);
        auto& rounds = plan.rounds[static_cast<std::size_t>(rank)];
        rounds.resize(static_cast<std::size_t>(q));
        for (int r = 0; r < q; ++r) {
            const int oa = sched.a_owner(grid, c.i, c.j, c.k, r);
            const int ob = sched.b_owner(grid, c.i, c.j, c.k, r);
            const CsrMatrix& ta = pa.tiles[static_cast<std::size_t>(oa)];
            const CsrMatrix& tb = pb.tiles[static_cast<std::size_t>(ob)];
            RoundSpec& spec = rounds[static_cast<std::size_t>(r)];
            spec.fetches = {{Operand::A, oa, ta.nrows, ta.nnz()},
                            {Operand::B, ob, tb.nrows, tb.nnz()}};
            spec.allgather = true;
            spec.ag_rows = tb.nrows;  // each process contributes the B slice it fetched
            spec.ag_nnz = tb.nnz();
        }
    }

    const TileMap cmap = make_tile_map(a.nrows, b.ncols, Scheme::trident, P, lam);
    std::vector<CsrMatrix> c_tiles(static_cast<std::size_t>(P));
    for (int rank = 0; rank < P; ++rank) {
        const auto& rect = cmap.tiles[static_cast<std::size_t>(rank)];
        c_tiles[static_cast<std::size_t>(rank)] =
            CsrMatrix::zeros(rect.row_end - rect.row_begin, rect.col_end - rect.col_begin);
    }

    SimResult sim = run_simulation(plan, topo, [&](int rank, int r) {
        const auto c = grid.coords_of(rank);
        const int s = sched.inner_block(c.i, c.j, r);
        const CsrMatrix& a_tile = pa.tiles[static_cast<std::size_t>(grid.rank_of(c.i, s, c.k))];
        const CsrMatrix& b_sj = b_coarse[static_cast<std::size_t>(s) * static_cast<std::size_t>(q) +
                                         static_cast<std::size_t>(c.j)];
        CsrMatrix& acc = c_tiles[static_cast<std::size_t>(rank)];
        acc = spgeam(acc, spgemm_local(a_tile, b_sj));
    });

    DriverResult out;
    out.c = reassemble(c_tiles, cmap);
    out.ledger = std::move(sim.ledger);
    out.timeline = std::move(sim.timeline);
    out.makespan = sim.makespan;
    out.rounds = q;
    return out;
}

DriverResult summa_spgemm(const CsrMatrix& a, const CsrMatrix& b, int procs, int gpus_per_node,
                          const TopologySpec& topo) {
    if (a.ncols != b.nrows)
        throw DimensionError("summa_spgemm: a.ncols=" + std::to_string(a.ncols) +
                             " != b.nrows=" + std::to_string(b.nrows));
    topo.validate();
    const int pr = static_cast<int>(std::lround(std::sqrt(static_cast<double>(procs))));
    if (pr * pr != procs)
        throw GridError("summa: P=" + std::to_string(procs) + " is not a perfect square");

    PartitionResult pa = partition(a, Scheme::grid2d, procs, 1);
    PartitionResult pb = partition(b, Scheme::grid2d, procs, 1);
    const std::vector<int> node_of = node_assignment(Scheme::grid2d, procs, gpus_per_node);

    DriverResult out;
    out.rounds = pr;
    out.ledger = CommLedger(procs, node_of);

    const TileMap cmap = make_tile_map(a.nrows, b.ncols, Scheme::grid2d, procs, 1);
    std::vector<CsrMatrix> c_tiles(static_cast<std::size_t>(procs));
    for (int rank = 0; rank < procs; ++rank) {
        const auto& rect = cmap.tiles[static_cast<std::size_t>(rank)];
        c_tiles[static_cast<std::size_t>(rank)] =
            CsrMatrix::zeros(rect.row_end - rect.row_begin, rect.col_end - rect.col_begin);
    }

    // Bulk-synchronous stages: a stage begins once every process finished the
    // previous one. Receives of a stage start together; each receiver pays
    // alpha + bytes/beta for its link class.
    std::vector<double> done(static_cast<std::size_t>(procs), 0.0);
    for (int r = 0; r < pr; ++r) {
        const double stage_start = *std::max_element(done.begin(), done.end());
        for (int rank = 0; rank < procs; ++rank) {
            const int i = rank / pr;
            const int j = rank % pr;
            const int owner_a = i * pr + r;
            const int owner_b = r * pr + j;
            double cost_a = 0.0, cost_b = 0.0;
            const CsrMatrix& ta = pa.tiles[static_cast<std::size_t>(owner_a)];
            const CsrMatrix& tb = pb.tiles[static_cast<std::size_t>(owner_b)];
            if (owner_a != rank) {
                const LinkClass c = classify(owner_a, rank, node_of);
                const auto bytes = topo.payload_bytes(ta.nrows, ta.nnz());
                cost_a = topo.alpha(c) + static_cast<double>(bytes) / topo.beta(c);
                out.ledger.record_transfer(owner_a, rank, ta.nrows, ta.nnz(), topo);
                out.timeline.events.push_back({EventType::transfer_complete, owner_a, rank, r,
                                               Operand::A, c, stage_start, stage_start + cost_a,
                                               ta.nnz(), bytes});
            }
            if (owner_b != rank) {
                const LinkClass c = classify(owner_b, rank, node_of);
                const auto bytes = topo.payload_bytes(tb.nrows, tb.nnz());
                cost_b = topo.alpha(c) + static_cast<double>(bytes) / topo.beta(c);
                out.ledger.record_transfer(owner_b, rank, tb.nrows, tb.nnz(), topo);
                out.timeline.events.push_back({EventType::transfer_complete, owner_b, rank, r,
                                               Operand::B, c, stage_start, stage_start + cost_b,
                                               tb.nnz(), bytes});
            }
            done[static_cast<std::size_t>(rank)] = stage_start + std::max(cost_a, cost_b);
            c_tiles[static_cast<std::size_t>(rank)] =
                spgeam(c_tiles[static_cast<std::size_t>(rank)], spgemm_local(ta, tb));
            out.timeline.events.push_back({EventType::compute_complete, rank, rank, r, Operand::A,
                                           LinkClass::SELF, done[static_cast<std::size_t>(rank)],
                                           done[static_cast<std::size_t>(rank)], 0, 0});
        }
    }
    for (int rank = 0; rank < procs; ++rank)
        out.ledger.set_completion(rank, done[static_cast<std::size_t>(rank)]);
    out.makespan = out.ledger.makespan();
    out.c = reassemble(c_tiles, cmap);
    return out;
}

DriverResult oned_spgemm(const CsrMatrix& a, const CsrMatrix& b, int procs, int gpus_per_node,
                         const TopologySpec& topo) {
    if (a.ncols != b.nrows)
        throw DimensionError("oned_spgemm: a.ncols=" + std::to_string(a.ncols) +
                             " != b.nrows=" + std::to_string(b.nrows));
    if (procs <= 0) throw GridError("oned: P must be positive");

    PartitionResult pa = partition(a, Scheme::rows1d, procs, 1);
    PartitionResult pb = partition(b, Scheme::rows1d, procs, 1);
    const std::vector<index_t>& bbounds = pb.map.row_bounds;  // B row blocks over the inner dim

    const auto owner_of_row = [&](index_t row) {
        return static_cast<int>(std::upper_bound(bbounds.begin(), bbounds.end(), row) -
                                bbounds.begin()) -
               1;
    };

    // Remote B rows each process needs, grouped by owner: the distinct column
    // indices of its A block outside its own row range.
    std::vector<std::vector<std::vector<index_t>>> needed(
        static_cast<std::size_t>(procs),
        std::vector<std::vector<index_t>>(static_cast<std::size_t>(procs)));
    for (int p = 0; p < procs; ++p) {
        const CsrMatrix& ta = pa.tiles[static_cast<std::size_t>(p)];
        std::vector<index_t> cols(ta.colind.begin(), ta.colind.end());
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        for (const index_t col : cols) {
            const int owner = owner_of_row(col);
            if (owner != p) needed[static_cast<std::size_t>(p)][static_cast<std::size_t>(owner)].push_back(col);
        }
    }

    SimPlan plan;
    plan.procs = procs;
    plan.node_of = node_assignment(Scheme::rows1d, procs, gpus_per_node);
    plan.rounds.assign(static_cast<std::size_t>(procs), {RoundSpec{}});
    for (int p = 0; p < procs; ++p) {
        RoundSpec& round = plan.rounds[static_cast<std::size_t>(p)].front();
        for (int owner = 0; owner < procs; ++owner) {
            const auto& rows = needed[static_cast<std::size_t>(p)][static_cast<std::size_t>(owner)];
            if (rows.empty()) continue;
            const CsrMatrix& tb = pb.tiles[static_cast<std::size_t>(owner)];
            index_t nnz = 0;
            for (const index_t row : rows) {
                const index_t lr = row - bbounds[static_cast<std::size_t>(owner)];
                nnz += tb.rowptr[static_cast<std::size_t>(lr) + 1] -
                       tb.rowptr[static_cast<std::size_t>(lr)];
            }
            round.fetches.push_back(
                {Operand::B, owner, static_cast<index_t>(rows.size()), nnz});
        }
    }

    const TileMap cmap = make_tile_map(a.nrows, b.ncols, Scheme::rows1d, procs, 1);
    std::vector<CsrMatrix> c_tiles(static_cast<std::size_t>(procs));

    SimResult sim = run_simulation(plan, topo, [&](int p, int) {
        // Assemble the gathered right operand: own block plus every
        // requested remote row, indexed over the full inner dimension.
        CsrMatrix gathered = CsrMatrix::zeros(b.nrows, b.ncols);
        std::vector<bool> have(static_cast<std::size_t>(b.nrows), false);
        const index_t own_lo = bbounds[static_cast<std::size_t>(p)];
        const index_t own_hi = bbounds[static_cast<std::size_t>(p) + 1];
        for (index_t g = own_lo; g < own_hi; ++g) have[static_cast<std::size_t>(g)] = true;
        for (int owner = 0; owner < procs; ++owner)
            for (const index_t g : needed[static_cast<std::size_t>(p)][static_cast<std::size_t>(owner)])
                have[static_cast<std::size_t>(g)] = true;
        for (index_t g = 0; g < b.nrows; ++g) {
            if (have[static_cast<std::size_t>(g)]) {
                const int owner = owner_of_row(g);
                const CsrMatrix& tb = pb.tiles[static_cast<std::size_t>(owner)];
                const index_t lr = g - bbounds[static_cast<std::size_t>(owner)];
                for (index_t t = tb.rowptr[static_cast<std::size_t>(lr)];
                     t < tb.rowptr[static_cast<std::size_t>(lr) + 1]; ++t) {
                    gathered.colind.push_back(tb.colind[static_cast<std::size_t>(t)]);
                    gathered.values.push_back(tb.values[static_cast<std::size_t>(t)]);
                }
            }
            gathered.rowptr[static_cast<std::size_t>(g) + 1] =
                static_cast<index_t>(gathered.colind.size());
        }
        c_tiles[static_cast<std::size_t>(p)] =
            spgemm_local(pa.tiles[static_cast<std::size_t>(p)], gathered);
    });

    DriverResult out;
    out.c = reassemble(c_tiles, cmap);
    out.ledger = std::move(sim.ledger);
    out.timeline = std::move(sim.timeline);
    out.makespan = sim.makespan;
    out.rounds = 1;
    return out;
}

DriverResult run_algo(Algo algo, const CsrMatrix& a, const CsrMatrix& b, int procs,
                      int gpus_per_node, const TopologySpec& topo) {
    switch (algo) {
        case Algo::trident:
            return trident_spgemm(a, b, TridentGrid::create(procs, gpus_per_node), topo);
        case Algo::summa: return summa_spgemm(a, b, procs, gpus_per_node, topo);
        case Algo::oned: return oned_spgemm(a, b, procs, gpus_per_node, topo);
    }
    throw ParameterError("run_algo: bad algorithm");
}

}  // namespace spgsim
