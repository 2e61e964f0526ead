#pragma once

#include <optional>
#include <string>

#include "spgsim/algorithms.hpp"

namespace spgsim {

struct RunConfig {
    std::string algo;
    int procs = 0;
    int gpus_per_node = 4;
    TopologySpec topology;
    std::string matrix_a;  // path or generator description
    std::string matrix_b;  // empty when squaring
    bool square = false;
    std::uint64_t seed = 0;
};

/// nnz count plus an order-independent 64-bit hash of (row, col, value)
/// triples with values quantized at 1e-9 absolute. Drivers computing the
/// same product agree on it up to that quantization.
struct ResultChecksum {
    index_t nnz = 0;
    std::uint64_t hash = 0;

    bool operator==(const ResultChecksum&) const = default;
};

ResultChecksum result_checksum(const CsrMatrix& m);

/// Serialized experiment outcome. Contains no timestamps, so identical runs
/// serialize byte-identically.
struct RunReport {
    RunConfig config;
    int rounds = 0;
    double makespan_seconds = 0.0;
    CommLedger ledger;
    index_t result_nrows = 0;
    index_t result_ncols = 0;
    ResultChecksum checksum;
    std::optional<bool> verified;
    std::string tilemap_json;

    std::string to_json() const;
};

RunReport make_report(RunConfig config, const DriverResult& result, const TileMap* map,
                      std::optional<bool> verified);

}  // namespace spgsim
