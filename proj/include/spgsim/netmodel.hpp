#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spgsim/csr.hpp"

namespace spgsim {

enum class LinkClass { SELF, LI, GI };

const char* link_name(LinkClass c);

/// Two-level interconnect parameters: alpha-beta cost per link class plus
/// wire widths for payload accounting.
struct TopologySpec {
    int nodes = 0;
    int gpus_per_node = 4;
    double alpha_li = 5e-7;    // seconds per message
    double alpha_gi = 2e-6;
    double beta_li = 200e9;    // bytes per second
    double beta_gi = 25e9;
    int index_width = 4;       // bytes per column index / rowptr offset
    int value_width = 8;       // bytes per value

    // Preset mirrors a 4-GPU node with an 8x intranode bandwidth advantage
    // and a 4x latency gap.
    static TopologySpec preset(int nodes = 0, int gpus_per_node = 4);

    void validate() const;  // throws ParameterError on inconsistent parameters

    double alpha(LinkClass c) const { return c == LinkClass::LI ? alpha_li : alpha_gi; }
    double beta(LinkClass c) const { return c == LinkClass::LI ? beta_li : beta_gi; }

    // Wire size of a CSR tile: nnz * (index + value width) + rowptr bytes.
    std::int64_t payload_bytes(index_t payload_rows, index_t payload_nnz) const {
        return payload_nnz * (index_width + value_width) + (payload_rows + 1) * index_width;
    }

    std::string to_json() const;
    // Accepts a bare topology object or a file with a "topology" section.
    static TopologySpec from_json_text(const std::string& text);
    // Minimal TOML reader: [topology] section with key = value lines.
    static TopologySpec from_toml_text(const std::string& text);
    static TopologySpec from_file(const std::string& path);  // picks by extension
};

// Link class of a transfer: SELF for identical ranks (zero-cost local copy,
// ledgered under neither class), LI within a node, GI across nodes.
LinkClass classify(int sender, int receiver, const std::vector<int>& node_of);

struct LedgerCell {
    std::uint64_t messages = 0;
    std::uint64_t nnz = 0;
    std::uint64_t bytes = 0;

    void add(const LedgerCell& o) {
        messages += o.messages;
        nnz += o.nnz;
        bytes += o.bytes;
    }
};

/// Per-process, per-link-class accounting of every simulated transfer, plus
/// the logical completion time. A ledger is owned by one simulation run.
class CommLedger {
public:
    CommLedger() = default;
    CommLedger(int procs, std::vector<int> node_of);

    int procs() const { return static_cast<int>(node_of_.size()); }
    const std::vector<int>& node_of() const { return node_of_; }

    // Payload transfer: counted as one message with nnz/bytes on both the
    // sender's sent side and the receiver's received side. SELF transfers
    // are ignored.
    void record_transfer(int sender, int receiver, index_t payload_rows, index_t payload_nnz,
                         const TopologySpec& topo);
    // Request-queue control message: one alpha, zero bytes in the volume
    // ledger; still counted in the message counters.
    void record_control(int sender, int receiver);

    void set_completion(int rank, double t);
    double completion(int rank) const { return completion_[static_cast<std::size_t>(rank)]; }
    double makespan() const;

    const LedgerCell& sent(int rank, LinkClass c) const;
    const LedgerCell& received(int rank, LinkClass c) const;
    LedgerCell total_sent(LinkClass c) const;
    LedgerCell total_received(LinkClass c) const;

    // One row per (process, class): process, class, messages, nnz, bytes, time.
    std::string to_csv() const;

private:
    LedgerCell& cell(std::vector<LedgerCell>& v, int rank, LinkClass c);
    std::vector<int> node_of_;
    std::vector<LedgerCell> sent_;      // 2 cells per process: [LI, GI]
    std::vector<LedgerCell> received_;
    std::vector<double> completion_;
};

/// Closed-form trident volumes under the uniform-tile assumption
/// (exactly nnz/P nonzeros per tile).
struct VolumePrediction {
    bool assumes_uniform = true;
    int q = 0;
    // Idealized per-iteration figures: both operand fetches remote.
    double gi_nnz_per_process_per_iter = 0;   // 2 nnz / P
    double li_nnz_per_process_per_iter = 0;   // (lambda-1) nnz / P
    // Idealized whole-run internode volume, 2 nnz / (sqrt(P) sqrt(lambda)).
    double gi_nnz_per_node_total = 0;
    // Reference per-process figure for the 2D baseline, nnz / sqrt(P).
    double summa_gi_nnz_per_process = 0;
    // Engine-exact totals: one round per sweep has a self-owned A fetch and
    // one a self-owned B fetch, which cost nothing on the wire.
    double gi_nnz_per_process_total_exact = 0;  // 2 (q-1) nnz / P
    double li_nnz_per_process_total_exact = 0;  // q (lambda-1) nnz / P
};

VolumePrediction predict_trident_volume(index_t nnz, int procs, int gpus_per_node);

}  // namespace spgsim
