#pragma once

#include <string>
#include <vector>

#include "spgsim/csr.hpp"

namespace spgsim {

enum class Scheme { trident, grid2d, rows1d };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);  // throws ParameterError

/// Process coordinates on the hybrid q x q x lambda grid, q = sqrt(P/lambda).
/// Coarse 2D tiles live on nodes; the lambda row slices of a coarse tile live
/// on the GPUs of that node, so slices of one tile always share a node.
struct TridentGrid {
    int procs = 0;
    int gpus_per_node = 1;
    int q = 0;

    struct Coords {
        int i, j, k;
    };

    // Throws GridError naming the violated constraint.
    static TridentGrid create(int procs, int gpus_per_node);

    int rank_of(int i, int j, int k) const { return (i * q + j) * gpus_per_node + k; }
    Coords coords_of(int rank) const;
    int node_of(int rank) const { return rank / gpus_per_node; }
    int node_count() const { return q * q; }
    int rounds() const { return q; }
};

// Node id per rank for a scheme: trident groups the lambda slices of a
// coarse tile; baselines pack consecutive ranks into nodes of lambda
// (row-major), since they are hierarchy-oblivious.
std::vector<int> node_assignment(Scheme scheme, int procs, int gpus_per_node);

struct TileRect {
    index_t row_begin, row_end, col_begin, col_end;
    bool operator==(const TileRect&) const = default;
};

/// Where every process's tile sits in the global index space. Tiles are
/// disjoint and cover the matrix exactly; tile data uses local indices and
/// the map owns the local<->global translation.
struct TileMap {
    Scheme scheme = Scheme::grid2d;
    int procs = 0;
    int gpus_per_node = 1;
    index_t nrows = 0;
    index_t ncols = 0;
    // Fine row boundaries: trident has q*lambda+1 entries (each coarse block
    // split into lambda slices), grid2d sqrt(P)+1, rows1d P+1.
    std::vector<index_t> row_bounds;
    // Column boundaries: q+1 / sqrt(P)+1 / {0, ncols}.
    std::vector<index_t> col_bounds;
    std::vector<TileRect> tiles;  // indexed by rank

    std::string to_json() const;  // scheme + boundaries, for report embedding
};

struct PartitionResult {
    TileMap map;
    std::vector<CsrMatrix> tiles;  // indexed by rank, local indices
};

// Boundaries use ceiling division: the first (dim mod g) blocks get one
// extra row/column.
std::vector<index_t> block_bounds(index_t dim, index_t nblocks);

TileMap make_tile_map(index_t nrows, index_t ncols, Scheme scheme, int procs, int gpus_per_node);

PartitionResult partition(const CsrMatrix& m, Scheme scheme, int procs, int gpus_per_node);

// Inverse of partition(); bit-identical round trip. Throws IncompleteTileSet
// if the tile vector does not match the map.
CsrMatrix reassemble(const std::vector<CsrMatrix>& tiles, const TileMap& map);

struct ImbalanceReport {
    index_t max_nnz = 0;
    double avg_nnz = 0.0;
    double ratio = 1.0;  // max/avg; 1.0 by convention when total nnz is zero
};

ImbalanceReport imbalance(const CsrMatrix& m, Scheme scheme, int procs, int gpus_per_node);

}  // namespace spgsim
