#include "spgsim/engine.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace spgsim {

const char* operand_name(Operand o) { return o == Operand::A ? "A" : "B"; }

const char* event_name(EventType t) {
    switch (t) {
        case EventType::enqueue_request: return "enqueue-request";
        case EventType::serve_request: return "serve-request";
        case EventType::transfer_complete: return "transfer-complete";
        case EventType::allgather_complete: return "allgather-complete";
        case EventType::compute_complete: return "compute-complete";
    }
    return "?";
}

std::string EventTimeline::to_jsonl() const {
    std::ostringstream out;
    for (const auto& e : events) {
        nlohmann::ordered_json j;
        j["type"] = event_name(e.type);
        j["actors"] = {e.src, e.dst};
        j["round"] = e.round;
        j["t_start"] = e.t_start;
        j["t_end"] = e.t_end;
        j["bytes"] = e.bytes;
        j["operand"] = operand_name(e.operand);
        j["link"] = link_name(e.link);
        j["nnz"] = e.nnz;
        out << j.dump() << '\n';
    }
    return out.str();
}

void SimPlan::validate() const {
    if (procs <= 0) throw ScheduleError("plan: no processes");
    if (static_cast<int>(node_of.size()) != procs || static_cast<int>(rounds.size()) != procs)
        throw ScheduleError("plan: node_of/rounds size mismatch");
    for (int r = 0; r < procs; ++r)
        for (const auto& round : rounds[static_cast<std::size_t>(r)])
            for (const auto& f : round.fetches)
                if (f.owner < 0 || f.owner >= procs)
                    throw RoutingError("plan: rank " + std::to_string(r) +
                                       " requests a tile from unknown owner " +
                                       std::to_string(f.owner));
    // Allgather rounds must line up within each node.
    const int nnodes = node_of.empty() ? 0 : *std::max_element(node_of.begin(), node_of.end()) + 1;
    std::vector<std::vector<int>> members(static_cast<std::size_t>(nnodes));
    for (int r = 0; r < procs; ++r) members[static_cast<std::size_t>(node_of[static_cast<std::size_t>(r)])].push_back(r);
    for (const auto& m : members) {
        if (m.empty()) continue;
        std::size_t max_rounds = 0;
        for (const int r : m) max_rounds = std::max(max_rounds, rounds[static_cast<std::size_t>(r)].size());
        for (std::size_t ri = 0; ri < max_rounds; ++ri) {
            bool any_ag = false;
            bool all_have = true;
            for (const int r : m) {
                if (ri >= rounds[static_cast<std::size_t>(r)].size()) {
                    all_have = false;
                    continue;
                }
                any_ag = any_ag || rounds[static_cast<std::size_t>(r)][ri].allgather;
            }
            if (!any_ag) continue;
            if (!all_have)
                throw ScheduleError("plan: allgather round " + std::to_string(ri) +
                                    " missing on some node members");
            for (const int r : m)
                if (!rounds[static_cast<std::size_t>(r)][ri].allgather)
                    throw ScheduleError("plan: rank " + std::to_string(r) +
                                        " skips the allgather of round " + std::to_string(ri));
        }
    }
}

namespace {

enum class EvKind { round_start, request_arrive, transfer_done, allgather_done };

struct Ev {
    double time;
    std::uint64_t seq;   // deterministic insertion order, breaks time ties
    EvKind kind;
    int rank = -1;       // round_start/transfer_done: the progressing process
    int round = 0;
    Operand tag = Operand::A;
    int peer = -1;       // request_arrive: requester; transfer_done: owner
    int node = -1;       // allgather_done
};

struct EvLater {
    bool operator()(const Ev& a, const Ev& b) const {
        return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
};

struct ProcState {
    int round = 0;          // current round index
    int waiting = 0;        // outstanding fetches for the current round
    double ready = 0.0;     // max completion time of this round's inputs
    bool done = false;
};

struct Lane {
    double busy_until = 0.0;
};

struct AgBarrier {
    int arrived = 0;
    double max_ready = 0.0;
    // contribution (rows, nnz) per member rank, in node-member order
    std::vector<std::pair<index_t, index_t>> contrib;
};

}  // namespace

SimResult run_simulation(const SimPlan& plan, const TopologySpec& topo,
                         const std::function<void(int, int)>& on_compute) {
    plan.validate();
    topo.validate();

    const int P = plan.procs;
    SimResult res;
    res.ledger = CommLedger(P, plan.node_of);
    for (int r = 0; r < P; ++r)
        res.rounds_executed = std::max(res.rounds_executed,
                                       static_cast<int>(plan.rounds[static_cast<std::size_t>(r)].size()));

    const int nnodes =
        plan.node_of.empty() ? 0 : *std::max_element(plan.node_of.begin(), plan.node_of.end()) + 1;
    std::vector<std::vector<int>> members(static_cast<std::size_t>(nnodes));
    for (int r = 0; r < P; ++r)
        members[static_cast<std::size_t>(plan.node_of[static_cast<std::size_t>(r)])].push_back(r);

    std::vector<ProcState> st(static_cast<std::size_t>(P));
    std::vector<Lane> lanes(static_cast<std::size_t>(P) * 2);  // [rank][operand]
    std::map<std::pair<int, int>, AgBarrier> barriers;         // (node, round) -> barrier
    std::priority_queue<Ev, std::vector<Ev>, EvLater> queue;
    std::uint64_t seq = 0;

    auto push = [&](Ev e) {
        e.seq = seq++;
        queue.push(e);
    };

    auto lane_of = [&](int rank, Operand tag) -> Lane& {
        return lanes[static_cast<std::size_t>(rank) * 2 + (tag == Operand::B ? 1 : 0)];
    };

    // Progress a process whose current round has all inputs available.
    std::function<void(int, double)> finish_round = [&](int rank, double t) {
        ProcState& s = st[static_cast<std::size_t>(rank)];
        on_compute(rank, s.round);
        res.timeline.events.push_back({EventType::compute_complete, rank, rank, s.round,
                                       Operand::A, LinkClass::SELF, t, t, 0, 0});
        s.round++;
        if (s.round >= static_cast<int>(plan.rounds[static_cast<std::size_t>(rank)].size())) {
            s.done = true;
            res.ledger.set_completion(rank, t);
        } else {
            push({t, 0, EvKind::round_start, rank, s.round});
        }
    };

    auto round_inputs_ready = [&](int rank, double t) {
        ProcState& s = st[static_cast<std::size_t>(rank)];
        const RoundSpec& round = plan.rounds[static_cast<std::size_t>(rank)][static_cast<std::size_t>(s.round)];
        if (!round.allgather) {
            finish_round(rank, t);
            return;
        }
        const int node = plan.node_of[static_cast<std::size_t>(rank)];
        AgBarrier& bar = barriers[{node, s.round}];
        if (bar.contrib.empty())
            bar.contrib.resize(members[static_cast<std::size_t>(node)].size(), {0, 0});
        const auto& mem = members[static_cast<std::size_t>(node)];
        const auto self_idx = static_cast<std::size_t>(
            std::find(mem.begin(), mem.end(), rank) - mem.begin());
        bar.contrib[self_idx] = {round.ag_rows, round.ag_nnz};
        bar.arrived++;
        bar.max_ready = std::max(bar.max_ready, t);
        if (bar.arrived == static_cast<int>(mem.size())) {
            // Completion: everyone ready, then the slowest member's serial
            // receive chain of the other lambda-1 slices over LI.
            double worst = 0.0;
            for (std::size_t k = 0; k < mem.size(); ++k) {
                double sum = 0.0;
                for (std::size_t k2 = 0; k2 < mem.size(); ++k2) {
                    if (k2 == k) continue;
                    sum += topo.alpha_li +
                           static_cast<double>(topo.payload_bytes(bar.contrib[k2].first,
                                                                  bar.contrib[k2].second)) /
                               topo.beta_li;
                }
                worst = std::max(worst, sum);
            }
            push({bar.max_ready + worst, 0, EvKind::allgather_done, -1, s.round, Operand::B, -1,
                  node});
        }
    };

    // Kick off round 0 everywhere.
    for (int r = 0; r < P; ++r) {
        if (plan.rounds[static_cast<std::size_t>(r)].empty()) {
            st[static_cast<std::size_t>(r)].done = true;
            res.ledger.set_completion(r, 0.0);
            continue;
        }
        const int node = plan.node_of[static_cast<std::size_t>(r)];
        const double t0 = node < static_cast<int>(plan.node_start_delay.size())
                              ? plan.node_start_delay[static_cast<std::size_t>(node)]
                              : 0.0;
        push({t0, 0, EvKind::round_start, r, 0});
    }

    while (!queue.empty()) {
        const Ev ev = queue.top();
        queue.pop();
        switch (ev.kind) {
            case EvKind::round_start: {
                ProcState& s = st[static_cast<std::size_t>(ev.rank)];
                const RoundSpec& round =
                    plan.rounds[static_cast<std::size_t>(ev.rank)][static_cast<std::size_t>(s.round)];
                s.waiting = 0;
                s.ready = ev.time;
                for (const auto& f : round.fetches) {
                    if (f.owner == ev.rank) continue;  // local copy, free
                    const LinkClass c = classify(ev.rank, f.owner, plan.node_of);
                    const double arrive = ev.time + topo.alpha(c);
                    res.ledger.record_control(ev.rank, f.owner);
                    res.timeline.events.push_back({EventType::enqueue_request, ev.rank, f.owner,
                                                   s.round, f.tag, c, ev.time, arrive, 0, 0});
                    push({arrive, 0, EvKind::request_arrive, f.owner, s.round, f.tag, ev.rank});
                    s.waiting++;
                }
                if (s.waiting == 0) round_inputs_ready(ev.rank, ev.time);
                break;
            }
            case EvKind::request_arrive: {
                // ev.rank = owner, ev.peer = requester. Requests are served in
                // arrival order; each serve occupies the owner's per-operand
                // server lane for the whole transfer.
                const int owner = ev.rank;
                const int requester = ev.peer;
                const auto& round =
                    plan.rounds[static_cast<std::size_t>(requester)][static_cast<std::size_t>(ev.round)];
                const FetchSpec* f = nullptr;
                for (const auto& g : round.fetches)
                    if (g.owner == owner && g.tag == ev.tag) f = &g;
                if (f == nullptr) throw ScheduleError("engine: request without matching fetch");
                Lane& lane = lane_of(owner, ev.tag);
                const double start = std::max(lane.busy_until, ev.time);
                const LinkClass c = classify(owner, requester, plan.node_of);
                const auto bytes = topo.payload_bytes(f->payload_rows, f->payload_nnz);
                const double done = start + topo.alpha(c) + static_cast<double>(bytes) / topo.beta(c);
                lane.busy_until = done;
                res.ledger.record_transfer(owner, requester, f->payload_rows, f->payload_nnz, topo);
                res.timeline.events.push_back({EventType::serve_request, owner, requester, ev.round,
                                               ev.tag, c, start, start, 0, 0});
                res.timeline.events.push_back({EventType::transfer_complete, owner, requester,
                                               ev.round, ev.tag, c, start, done, f->payload_nnz,
                                               bytes});
                push({done, 0, EvKind::transfer_done, requester, ev.round, ev.tag, owner});
                break;
            }
            case EvKind::transfer_done: {
                ProcState& s = st[static_cast<std::size_t>(ev.rank)];
                if (s.done || s.round != ev.round)
                    throw ScheduleError("engine: transfer completed for the wrong round");
                s.ready = std::max(s.ready, ev.time);
                if (--s.waiting == 0) round_inputs_ready(ev.rank, ev.time);
                break;
            }
            case EvKind::allgather_done: {
                const auto& mem = members[static_cast<std::size_t>(ev.node)];
                AgBarrier& bar = barriers[{ev.node, ev.round}];
                index_t total_nnz = 0;
                std::int64_t total_bytes = 0;
                for (std::size_t k = 0; k < mem.size(); ++k) {
                    for (std::size_t k2 = 0; k2 < mem.size(); ++k2) {
                        if (k2 == k) continue;
                        res.ledger.record_transfer(mem[k2], mem[k], bar.contrib[k2].first,
                                                   bar.contrib[k2].second, topo);
                        total_nnz += bar.contrib[k2].second;
                        total_bytes += topo.payload_bytes(bar.contrib[k2].first, bar.contrib[k2].second);
                    }
                }
                res.timeline.events.push_back({EventType::allgather_complete, ev.node, -1, ev.round,
                                               Operand::B, LinkClass::LI, bar.max_ready, ev.time,
                                               total_nnz, total_bytes});
                for (const int rank : mem) finish_round(rank, ev.time);
                barriers.erase({ev.node, ev.round});
                break;
            }
        }
    }

    std::ostringstream blocked;
    for (int r = 0; r < P; ++r) {
        const ProcState& s = st[static_cast<std::size_t>(r)];
        if (!s.done) {
            if (blocked.tellp() > 0) blocked << "; ";
            blocked << "rank " << r << " blocked at round " << s.round << " ("
                    << (s.waiting > 0 ? std::to_string(s.waiting) + " fetches outstanding"
                                      : "waiting on allgather peers")
                    << ")";
        }
    }
    if (blocked.tellp() > 0) throw DeadlockError("simulation deadlock: " + blocked.str());

    res.makespan = res.ledger.makespan();
    return res;
}

}  // namespace spgsim
