#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ccs {

// One routing invocation as seen by the accounting layer. The log doubles as
// a traffic fingerprint: two runs are communication-identical iff their logs
// are equal.
struct InvocationRecord {
    char kind;  // 'r' route, 'g' gen_route, 'q' query_route, 'm' rmq
    uint64_t max_send = 0;
    uint64_t max_recv = 0;
    uint64_t total_words = 0;
    uint64_t rounds = 0;

    bool operator==(const InvocationRecord&) const = default;
};

// Authoritative account of everything the model charges for.
struct RoundLedger {
    uint64_t rounds_charged = 0;
    uint64_t max_send_load = 0;   // peak over all invocations
    uint64_t max_recv_load = 0;
    uint64_t aux_nodes_peak = 0;
    uint64_t comparisons = 0;
    uint64_t raw_rounds = 0;      // rounds physically executed by the explicit backend
    // Per raw round, the heaviest ordered-pair traffic. The full
    // (round, src, dst) -> words map is validated during execution; only
    // its per-round peak is kept, which is what the capacity invariant
    // constrains.
    std::vector<uint64_t> raw_round_peak;
    std::vector<InvocationRecord> invocations;

    void note_loads(uint64_t send, uint64_t recv) {
        if (send > max_send_load) max_send_load = send;
        if (recv > max_recv_load) max_recv_load = recv;
    }

    void reset() { *this = RoundLedger{}; }
};

}  // namespace ccs
