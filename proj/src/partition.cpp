#include "spgsim/partition.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace spgsim {
namespace {

int isqrt_exact(int v) {
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v))));
    return r * r == v ? r : -1;
}

// Index of the block containing x, given block boundary array.
std::size_t block_of(const std::vector<index_t>& bounds, index_t x) {
    const auto it = std::upper_bound(bounds.begin(), bounds.end(), x);
    return static_cast<std::size_t>(it - bounds.begin()) - 1;
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::trident: return "trident";
        case Scheme::grid2d: return "grid2d";
        case Scheme::rows1d: return "rows1d";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "trident") return Scheme::trident;
    if (name == "grid2d" || name == "summa") return Scheme::grid2d;
    if (name == "rows1d" || name == "oned") return Scheme::rows1d;
    throw ParameterError("unknown scheme '" + name + "'");
}

TridentGrid TridentGrid::create(int procs, int gpus_per_node) {
    if (procs <= 0 || gpus_per_node <= 0)
        throw GridError("trident grid: process and GPU counts must be positive");
    if (procs % gpus_per_node != 0)
        throw GridError("trident grid: P=" + std::to_string(procs) +
                        " not divisible by gpus_per_node=" + std::to_string(gpus_per_node));
    const int q = isqrt_exact(procs / gpus_per_node);
    if (q < 0)
        throw GridError("trident grid: P/gpus_per_node=" +
                        std::to_string(procs / gpus_per_node) + " is not a perfect square");
    TridentGrid g;
    g.procs = procs;
    g.gpus_per_node = gpus_per_node;
    g.q = q;
    return g;
}

TridentGrid::Coords TridentGrid::coords_of(int rank) const {
    const int node = rank / gpus_per_node;
    return {node / q, node % q, rank % gpus_per_node};
}

std::vector<int> node_assignment(Scheme scheme, int procs, int gpus_per_node) {
    std::vector<int> nodes(static_cast<std::size_t>(procs));
    if (scheme == Scheme::trident) {
        const TridentGrid g = TridentGrid::create(procs, gpus_per_node);
        for (int r = 0; r < procs; ++r) nodes[static_cast<std::size_t>(r)] = g.node_of(r);
    } else {
        if (gpus_per_node <= 0) throw GridError("gpus_per_node must be positive");
        for (int r = 0; r < procs; ++r) nodes[static_cast<std::size_t>(r)] = r / gpus_per_node;
    }
    return nodes;
}

std::vector<index_t> block_bounds(index_t dim, index_t nblocks) {
    std::vector<index_t> bounds(static_cast<std::size_t>(nblocks) + 1, 0);
    for (index_t b = 0; b < nblocks; ++b) {
        const index_t size = dim / nblocks + (b < dim % nblocks ? 1 : 0);
        bounds[static_cast<std::size_t>(b) + 1] = bounds[static_cast<std::size_t>(b)] + size;
    }
    return bounds;
}

std::string TileMap::to_json() const {
    nlohmann::ordered_json j;
    j["scheme"] = scheme_name(scheme);
    j["procs"] = procs;
    j["gpus_per_node"] = gpus_per_node;
    j["nrows"] = nrows;
    j["ncols"] = ncols;
    j["row_bounds"] = row_bounds;
    j["col_bounds"] = col_bounds;
    return j.dump();
}

static TileMap build_map(const CsrMatrix& m, Scheme scheme, int procs, int gpus_per_node) {
    TileMap map;
    map.scheme = scheme;
    map.procs = procs;
    map.gpus_per_node = scheme == Scheme::trident ? gpus_per_node : 1;
    map.nrows = m.nrows;
    map.ncols = m.ncols;
    if (procs <= 0) throw GridError("partition: process count must be positive");

    if (scheme == Scheme::trident) {
        const TridentGrid g = TridentGrid::create(procs, gpus_per_node);
        const auto coarse_rows = block_bounds(m.nrows, g.q);
        map.col_bounds = block_bounds(m.ncols, g.q);
        // Each coarse row block is cut into lambda contiguous slices.
        map.row_bounds.assign(1, 0);
        for (int i = 0; i < g.q; ++i) {
            const index_t base = coarse_rows[static_cast<std::size_t>(i)];
            const index_t size = coarse_rows[static_cast<std::size_t>(i) + 1] - base;
            const auto fine = block_bounds(size, g.gpus_per_node);
            for (int k = 1; k <= g.gpus_per_node; ++k)
                map.row_bounds.push_back(base + fine[static_cast<std::size_t>(k)]);
        }
        map.tiles.resize(static_cast<std::size_t>(procs));
        for (int rank = 0; rank < procs; ++rank) {
            const auto c = g.coords_of(rank);
            const std::size_t fine_idx = static_cast<std::size_t>(c.i) *
                                             static_cast<std::size_t>(g.gpus_per_node) +
                                         static_cast<std::size_t>(c.k);
            map.tiles[static_cast<std::size_t>(rank)] = {
                map.row_bounds[fine_idx], map.row_bounds[fine_idx + 1],
                map.col_bounds[static_cast<std::size_t>(c.j)],
                map.col_bounds[static_cast<std::size_t>(c.j) + 1]};
        }
    } else if (scheme == Scheme::grid2d) {
        const int pr = isqrt_exact(procs);
        if (pr < 0)
            throw GridError("grid2d: P=" + std::to_string(procs) + " is not a perfect square");
        map.row_bounds = block_bounds(m.nrows, pr);
        map.col_bounds = block_bounds(m.ncols, pr);
        map.tiles.resize(static_cast<std::size_t>(procs));
        for (int rank = 0; rank < procs; ++rank) {
            const int i = rank / pr;
            const int j = rank % pr;
            map.tiles[static_cast<std::size_t>(rank)] = {
                map.row_bounds[static_cast<std::size_t>(i)],
                map.row_bounds[static_cast<std::size_t>(i) + 1],
                map.col_bounds[static_cast<std::size_t>(j)],
                map.col_bounds[static_cast<std::size_t>(j) + 1]};
        }
    } else {
        map.row_bounds = block_bounds(m.nrows, procs);
        map.col_bounds = {0, m.ncols};
        map.tiles.resize(static_cast<std::size_t>(procs));
        for (int rank = 0; rank < procs; ++rank)
            map.tiles[static_cast<std::size_t>(rank)] = {
                map.row_bounds[static_cast<std::size_t>(rank)],
                map.row_bounds[static_cast<std::size_t>(rank) + 1], 0, m.ncols};
    }
    return map;
}

TileMap make_tile_map(index_t nrows, index_t ncols, Scheme scheme, int procs, int gpus_per_node) {
    CsrMatrix shape = CsrMatrix::zeros(nrows, ncols);
    return build_map(shape, scheme, procs, gpus_per_node);
}

PartitionResult partition(const CsrMatrix& m, Scheme scheme, int procs, int gpus_per_node) {
    PartitionResult res;
    res.map = build_map(m, scheme, procs, gpus_per_node);
    res.tiles.resize(static_cast<std::size_t>(procs));

    // Ranks covering each fine row slice, ordered by ascending column block.
    const std::size_t nslices = res.map.row_bounds.size() - 1;
    std::vector<std::vector<int>> slice_ranks(nslices);
    for (int rank = 0; rank < procs; ++rank) {
        const auto& t = res.map.tiles[static_cast<std::size_t>(rank)];
        slice_ranks[block_of(res.map.row_bounds, t.row_begin)].push_back(rank);
        res.tiles[static_cast<std::size_t>(rank)] =
            CsrMatrix::zeros(t.row_end - t.row_begin, t.col_end - t.col_begin);
    }
    for (auto& ranks : slice_ranks)
        std::sort(ranks.begin(), ranks.end(), [&](int a, int b) {
            return res.map.tiles[static_cast<std::size_t>(a)].col_begin <
                   res.map.tiles[static_cast<std::size_t>(b)].col_begin;
        });

    for (index_t i = 0; i < m.nrows; ++i) {
        if (m.rowptr[static_cast<std::size_t>(i)] == m.rowptr[static_cast<std::size_t>(i) + 1]) {
            continue;
        }
        const auto& ranks = slice_ranks[block_of(res.map.row_bounds, i)];
        index_t t = m.rowptr[static_cast<std::size_t>(i)];
        const index_t end = m.rowptr[static_cast<std::size_t>(i) + 1];
        for (const int rank : ranks) {
            const auto& rect = res.map.tiles[static_cast<std::size_t>(rank)];
            CsrMatrix& tile = res.tiles[static_cast<std::size_t>(rank)];
            while (t < end && m.colind[static_cast<std::size_t>(t)] < rect.col_end) {
                tile.colind.push_back(m.colind[static_cast<std::size_t>(t)] - rect.col_begin);
                tile.values.push_back(m.values[static_cast<std::size_t>(t)]);
                ++t;
            }
        }
    }
    // Finish local rowptrs: entries were appended row-major per tile.
    for (int rank = 0; rank < procs; ++rank) {
        const auto& rect = res.map.tiles[static_cast<std::size_t>(rank)];
        CsrMatrix& tile = res.tiles[static_cast<std::size_t>(rank)];
        tile.rowptr.assign(static_cast<std::size_t>(tile.nrows) + 1, 0);
        std::size_t pos = 0;
        (void)rect;
        // Recount per local row by re-walking the global rows of this tile.
        for (index_t gr = rect.row_begin; gr < rect.row_end; ++gr) {
            index_t cnt = 0;
            index_t lo = m.rowptr[static_cast<std::size_t>(gr)];
            const index_t hi = m.rowptr[static_cast<std::size_t>(gr) + 1];
            // binary search the [col_begin, col_end) span of this global row
            const auto* cbeg = m.colind.data() + lo;
            const auto* cend = m.colind.data() + hi;
            cnt = std::lower_bound(cbeg, cend, rect.col_end) -
                  std::lower_bound(cbeg, cend, rect.col_begin);
            tile.rowptr[static_cast<std::size_t>(gr - rect.row_begin) + 1] =
                tile.rowptr[static_cast<std::size_t>(gr - rect.row_begin)] + cnt;
            pos += static_cast<std::size_t>(cnt);
        }
        if (pos != tile.colind.size()) throw Error("partition internal accounting error");
    }
    return res;
}

CsrMatrix reassemble(const std::vector<CsrMatrix>& tiles, const TileMap& map) {
    if (static_cast<int>(tiles.size()) != map.procs)
        throw IncompleteTileSet("reassemble: expected " + std::to_string(map.procs) +
                                " tiles, got " + std::to_string(tiles.size()));
    for (int rank = 0; rank < map.procs; ++rank) {
        const auto& rect = map.tiles[static_cast<std::size_t>(rank)];
        const auto& t = tiles[static_cast<std::size_t>(rank)];
        if (t.nrows != rect.row_end - rect.row_begin || t.ncols != rect.col_end - rect.col_begin)
            throw IncompleteTileSet("reassemble: tile " + std::to_string(rank) +
                                    " does not match its map rectangle");
    }
    const std::size_t nslices = map.row_bounds.size() - 1;
    std::vector<std::vector<int>> slice_ranks(nslices);
    for (int rank = 0; rank < map.procs; ++rank)
        slice_ranks[block_of(map.row_bounds, map.tiles[static_cast<std::size_t>(rank)].row_begin)]
            .push_back(rank);
    for (auto& ranks : slice_ranks)
        std::sort(ranks.begin(), ranks.end(), [&](int a, int b) {
            return map.tiles[static_cast<std::size_t>(a)].col_begin <
                   map.tiles[static_cast<std::size_t>(b)].col_begin;
        });

    CsrMatrix m = CsrMatrix::zeros(map.nrows, map.ncols);
    for (index_t i = 0; i < map.nrows; ++i) {
        for (const int rank : slice_ranks[block_of(map.row_bounds, i)]) {
            const auto& rect = map.tiles[static_cast<std::size_t>(rank)];
            const auto& tile = tiles[static_cast<std::size_t>(rank)];
            const index_t li = i - rect.row_begin;
            for (index_t t = tile.rowptr[static_cast<std::size_t>(li)];
                 t < tile.rowptr[static_cast<std::size_t>(li) + 1]; ++t) {
                m.colind.push_back(tile.colind[static_cast<std::size_t>(t)] + rect.col_begin);
                m.values.push_back(tile.values[static_cast<std::size_t>(t)]);
            }
        }
        m.rowptr[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(m.colind.size());
    }
    return m;
}

ImbalanceReport imbalance(const CsrMatrix& m, Scheme scheme, int procs, int gpus_per_node) {
    const TileMap map = build_map(m, scheme, procs, gpus_per_node);
    std::vector<index_t> per_rank(static_cast<std::size_t>(procs), 0);

    // rank lookup by (fine row slice, col block)
    const std::size_t ncb = map.col_bounds.size() - 1;
    std::vector<int> rank_at(static_cast<std::size_t>(map.row_bounds.size() - 1) * ncb, -1);
    for (int rank = 0; rank < procs; ++rank) {
        const auto& rect = map.tiles[static_cast<std::size_t>(rank)];
        const std::size_t rs = block_of(map.row_bounds, rect.row_begin);
        const std::size_t cb = block_of(map.col_bounds, rect.col_begin);
        rank_at[rs * ncb + cb] = rank;
    }
    for (index_t i = 0; i < m.nrows; ++i) {
        const std::size_t rs = block_of(map.row_bounds, i);
        for (index_t t = m.rowptr[static_cast<std::size_t>(i)];
             t < m.rowptr[static_cast<std::size_t>(i) + 1]; ++t) {
            const std::size_t cb = block_of(map.col_bounds, m.colind[static_cast<std::size_t>(t)]);
            per_rank[static_cast<std::size_t>(rank_at[rs * ncb + cb])]++;
        }
    }
    ImbalanceReport rep;
    const index_t total = m.nnz();
    rep.max_nnz = *std::max_element(per_rank.begin(), per_rank.end());
    rep.avg_nnz = static_cast<double>(total) / static_cast<double>(procs);
    rep.ratio = total == 0 ? 1.0 : static_cast<double>(rep.max_nnz) / rep.avg_nnz;
    return rep;
}

}  // namespace spgsim
