#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spgsim/netmodel.hpp"

namespace spgsim {

enum class Operand { A, B };

const char* operand_name(Operand o);

enum class EventType {
    enqueue_request,
    serve_request,
    transfer_complete,
    allgather_complete,
    compute_complete,
};

const char* event_name(EventType t);

struct TimelineEvent {
    EventType type;
    int src = -1;  // sender / owner rank; node id for allgather events
    int dst = -1;  // receiver rank; -1 for allgather events
    int round = 0;
    Operand operand = Operand::A;
    LinkClass link = LinkClass::SELF;
    double t_start = 0.0;
    double t_end = 0.0;
    index_t nnz = 0;
    std::int64_t bytes = 0;

    bool operator==(const TimelineEvent&) const = default;
};

struct EventTimeline {
    std::vector<TimelineEvent> events;

    // One JSON object per line: type, actors, round, t_start, t_end, bytes
    // plus operand/link/nnz detail.
    std::string to_jsonl() const;
};

/// One tile to obtain before a round can compute. A fetch whose owner is the
/// requesting process itself is a zero-cost local copy: no event, no ledger
/// volume.
struct FetchSpec {
    Operand tag = Operand::A;
    int owner = -1;
    index_t payload_rows = 0;
    index_t payload_nnz = 0;
};

struct RoundSpec {
    std::vector<FetchSpec> fetches;
    bool allgather = false;      // node-wide collective after the fetches
    index_t ag_rows = 0;         // this process's contribution
    index_t ag_nnz = 0;
};

/// A static communication script per process. The engine plays all scripts
/// against one event queue: per-process main progress, one server lane per
/// (process, operand) that serves queued requests FIFO, and per-node
/// allgather barriers. Nodes never synchronize with each other.
struct SimPlan {
    int procs = 0;
    std::vector<int> node_of;                      // rank -> node
    std::vector<std::vector<RoundSpec>> rounds;    // [rank][round]
    std::vector<double> node_start_delay;          // optional, per node

    void validate() const;  // RoutingError / ScheduleError on bad plans
};

struct SimResult {
    CommLedger ledger;
    EventTimeline timeline;
    double makespan = 0.0;
    int rounds_executed = 0;
};

// Runs the plan to completion. on_compute(rank, round) fires when a round's
// operands are in place (simulated compute takes zero modeled time; the
// model charges communication only). Throws DeadlockError if no event is
// eligible while work remains.
SimResult run_simulation(const SimPlan& plan, const TopologySpec& topo,
                         const std::function<void(int rank, int round)>& on_compute);

}  // namespace spgsim
