#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "ccs/clique.hpp"
#include "ccs/oracle.hpp"
#include "ccs/rng.hpp"

using namespace ccs;

namespace {

SimConfig cfg_n(uint32_t n, RoutingBackend b = RoutingBackend::abstract) {
    SimConfig c;
    c.n_nodes = n;
    c.backend = b;
    return c;
}

std::vector<std::vector<uint64_t>> inbox_words(const Inboxes& boxes) {
    std::vector<std::vector<uint64_t>> out(boxes.size());
    for (size_t v = 0; v < boxes.size(); ++v)
        for (const Msg& m : boxes[v])
            out[v].insert(out[v].end(), m.words.begin(), m.words.end());
    return out;
}

RoutingDemand random_demand(uint32_t n, uint64_t max_load, uint64_t seed) {
    // random messages, then trimmed so every send/recv load stays <= max_load
    CounterRng rng(seed, 77);
    RoutingDemand d;
    std::vector<uint64_t> send(n, 0), recv(n, 0);
    for (int tries = 0; tries < 4000; ++tries) {
        uint32_t s = uint32_t(rng.next_below(n));
        uint32_t t = uint32_t(rng.next_below(n));
        uint64_t len = rng.next_in(1, 4);
        if (s == t) continue;
        if (send[s] + len > max_load || recv[t] + len > max_load) continue;
        std::vector<uint64_t> words(len);
        for (auto& w : words) w = rng.next_below(1000);
        send[s] += len;
        recv[t] += len;
        d.send(s, t, std::move(words));
    }
    return d;
}

}  // namespace

TEST_CASE("route: empty demand charges nothing") {
    Clique cq(cfg_n(4));
    Inboxes boxes = cq.route(RoutingDemand{});
    CHECK(cq.ledger().rounds_charged == 0);
    for (const auto& box : boxes) CHECK(box.empty());
}

TEST_CASE("route: one word to each other node charges 3 rounds") {
    Clique cq(cfg_n(4));
    RoutingDemand d;
    for (uint32_t v = 1; v < 4; ++v) d.send(0, v, uint64_t(v));
    Inboxes boxes = cq.route(d);
    CHECK(cq.ledger().rounds_charged == 3);  // ceil(3/4) + 2
    for (uint32_t v = 1; v < 4; ++v) {
        REQUIRE(boxes[v].size() == 1);
        CHECK(boxes[v][0].words[0] == v);
    }
}

TEST_CASE("route: load above c_L*n is rejected") {
    Clique cq(cfg_n(4));
    RoutingDemand d;
    for (uint64_t i = 0; i < cq.config().load_limit() + 1; ++i) d.send(1, 0, uint64_t(1));
    CHECK_THROWS_AS(cq.route(d), LoadExceeded);
}

TEST_CASE("route: word width is validated on every send") {
    Clique cq(cfg_n(4));  // 4 * ceil(log2 4) = 8 bits
    RoutingDemand d;
    d.send(0, 1, cq.word_limit() + 1);
    CHECK_THROWS_AS(cq.route(d), WordTooWide);
}

TEST_CASE("route: backends deliver identical content within the round bound") {
    const uint32_t n = 8;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        RoutingDemand d = random_demand(n, 3 * n, seed);
        Clique a(cfg_n(n, RoutingBackend::abstract));
        Clique e(cfg_n(n, RoutingBackend::explicit_matching));
        auto wa = inbox_words(a.route(d));
        auto we = inbox_words(e.route(d));
        CHECK(wa == we);
        CHECK(e.ledger().rounds_charged <= 2 * 3 + 2);  // 2*ceil(3n/n)+2
        CHECK(e.ledger().raw_rounds == e.ledger().rounds_charged);
    }
}

TEST_CASE("route: self messages are delivered but never charged") {
    Clique cq(cfg_n(4));
    RoutingDemand d;
    d.send(2, 2, uint64_t(9));
    Inboxes boxes = cq.route(d);
    CHECK(cq.ledger().rounds_charged == 0);
    REQUIRE(boxes[2].size() == 1);
    CHECK(boxes[2][0].words[0] == 9);
}

TEST_CASE("route: determinism across repeated runs") {
    RoutingDemand d = random_demand(8, 16, 42);
    Clique a(cfg_n(8)), b(cfg_n(8));
    CHECK(inbox_words(a.route(d)) == inbox_words(b.route(d)));
    CHECK(a.ledger().rounds_charged == b.ledger().rounds_charged);
    CHECK(a.ledger().invocations == b.ledger().invocations);
}

TEST_CASE("route: inbox order is (src, origin index)") {
    Clique cq(cfg_n(4));
    RoutingDemand d;
    d.send(3, 0, uint64_t(30));
    d.send(1, 0, uint64_t(10));
    d.send(3, 0, uint64_t(31));
    d.send(2, 0, uint64_t(20));
    Inboxes boxes = cq.route(d);
    REQUIRE(boxes[0].size() == 4);
    CHECK(boxes[0][0].words[0] == 10);
    CHECK(boxes[0][1].words[0] == 20);
    CHECK(boxes[0][2].words[0] == 30);
    CHECK(boxes[0][3].words[0] == 31);
}

TEST_CASE("gen_route: range broadcast reaches the whole range") {
    Clique cq(cfg_n(8));
    GenDemand d(8);
    d.cast(0, 1, 7, 42);
    Inboxes boxes = cq.gen_route(d);
    CHECK(cq.ledger().rounds_charged == 4);
    for (uint32_t v = 1; v < 8; ++v) {
        REQUIRE(boxes[v].size() == 1);
        CHECK(boxes[v][0].words[0] == 42);
    }
}

TEST_CASE("gen_route: everyone broadcasts a value") {
    const uint32_t n = 8;
    Clique cq(cfg_n(n));
    GenDemand d(n);
    for (uint32_t v = 0; v < n; ++v) d.cast(v, 0, n - 1, 100 + v);
    Inboxes boxes = cq.gen_route(d);
    CHECK(cq.ledger().rounds_charged == 4);
    for (uint32_t v = 0; v < n; ++v) {
        REQUIRE(boxes[v].size() == n);  // self delivery included in content
        for (uint32_t u = 0; u < n; ++u) CHECK(boxes[v][u].words[0] == 100 + u);
    }
}

TEST_CASE("gen_route: target overload boundary at c_L*n") {
    const uint32_t n = 8;
    Clique cq(cfg_n(n));
    // every node targets node 0 with n words: 8n = c_L*n exactly, allowed
    GenDemand ok(n);
    for (uint32_t v = 1; v < n; ++v)
        for (uint32_t k = 0; k < n; ++k) ok.send(v, 0, k);
    for (uint32_t k = 0; k < n; ++k) ok.send(0, 1, k);  // node 0 sends elsewhere
    Inboxes boxes = cq.gen_route(ok);
    CHECK(boxes[0].size() == (n - 1) * n);

    SimConfig tight = cfg_n(n);
    tight.load_factor = 6;  // now 8n > 6n
    Clique cq2(tight);
    GenDemand bad(n);
    for (uint32_t v = 1; v < n; ++v)
        for (uint32_t k = 0; k < n; ++k) bad.send(v, 0, k);
    CHECK_THROWS_AS(cq2.gen_route(bad), TargetOverloaded);
}

TEST_CASE("with_aux_nodes: charge doubling and composition") {
    Clique cq(cfg_n(8));
    GenDemand d(8);
    d.cast(0, 0, 7, 1);

    cq.with_aux_nodes(0, [&]() { cq.gen_route(d); });
    CHECK(cq.ledger().rounds_charged == 4);  // k = 0: no doubling

    cq.with_aux_nodes(8, [&]() { cq.gen_route(d); });
    CHECK(cq.ledger().rounds_charged == 4 + 8);

    cq.with_aux_nodes(8, [&]() { cq.with_aux_nodes(8, [&]() { cq.gen_route(d); }); });
    CHECK(cq.ledger().rounds_charged == 4 + 8 + 16);
    CHECK(cq.ledger().aux_nodes_peak == 16);

    CHECK_THROWS_AS(cq.with_aux_nodes(cq.config().aux_limit() + 1, []() {}), AuxBudgetExceeded);
}

TEST_CASE("parallel: branches share rounds") {
    Clique cq(cfg_n(8));
    GenDemand d(8);
    d.cast(0, 0, 7, 1);
    std::vector<std::function<void()>> branches;
    branches.push_back([&]() { cq.gen_route(d); });
    branches.push_back([&]() {
        cq.gen_route(d);
        cq.gen_route(d);
    });
    cq.parallel(branches);
    CHECK(cq.ledger().rounds_charged == 8);  // max(4, 8)
}

TEST_CASE("query_route: answers align with queries") {
    const uint32_t n = 8;
    Clique cq(cfg_n(n));
    std::vector<std::vector<Query>> queries(n);
    for (uint32_t v = 0; v < n; ++v)
        for (uint32_t k = 0; k < 4; ++k) queries[v].push_back({(v + k) % n, 10 * v + k});
    Resolver doubler = [](uint32_t node, uint64_t content) -> std::optional<uint64_t> {
        return content * 2 + node % 2;
    };
    std::vector<uint64_t> state(n, 8);
    auto answers = cq.query_route(queries, doubler, state);
    for (uint32_t v = 0; v < n; ++v) {
        REQUIRE(answers[v].size() == 4);
        for (uint32_t k = 0; k < 4; ++k)
            CHECK(answers[v][k] == (10 * v + k) * 2 + ((v + k) % n) % 2);
    }
}

TEST_CASE("query_route: hot node gets n auxiliary copies") {
    const uint32_t n = 8;
    Clique cq(cfg_n(n));
    std::vector<std::vector<Query>> queries(n);
    for (uint32_t v = 0; v < n; ++v)
        for (uint32_t k = 0; k < n; ++k) queries[v].push_back({0, uint64_t(v * n + k)});
    Resolver echo = [](uint32_t, uint64_t c) -> std::optional<uint64_t> { return c; };
    std::vector<uint64_t> state(n, 4);
    auto answers = cq.query_route(queries, echo, state);
    CHECK(cq.ledger().aux_nodes_peak == n);  // ceil(n*n / n) copies of node 0
    for (uint32_t v = 0; v < n; ++v)
        for (uint32_t k = 0; k < n; ++k) CHECK(answers[v][k] == v * n + k);
}

TEST_CASE("query_route: zero queries cost only the fixed overhead") {
    Clique cq(cfg_n(8));
    std::vector<std::vector<Query>> queries(8);
    Resolver echo = [](uint32_t, uint64_t c) -> std::optional<uint64_t> { return c; };
    auto answers = cq.query_route(queries, echo, std::vector<uint64_t>(8, 0));
    CHECK(cq.ledger().rounds_charged == 4);  // count broadcast only
    for (const auto& a : answers) CHECK(a.empty());
}

TEST_CASE("query_route: rejected content raises Unresolvable") {
    Clique cq(cfg_n(8));
    std::vector<std::vector<Query>> queries(8);
    queries[3].push_back({5, 99});
    Resolver never = [](uint32_t, uint64_t) -> std::optional<uint64_t> { return std::nullopt; };
    CHECK_THROWS_AS(cq.query_route(queries, never, std::vector<uint64_t>(8, 0)), Unresolvable);
}

TEST_CASE("distributed_rmq: fixtures") {
    Clique cq(cfg_n(3));
    DistWords a;
    a.piece = {{3, 1}, {2, 5}, {0, 4}};
    std::vector<std::vector<std::pair<uint64_t, uint64_t>>> q(3);
    q[0].push_back({1, 6});  // global minimum
    q[1].push_back({4, 4});  // singleton
    q[2].push_back({2, 4});
    auto ans = cq.distributed_rmq(a, q);
    CHECK(ans[0][0] == 0);
    CHECK(ans[1][0] == 5);
    CHECK(ans[2][0] == 1);
}

TEST_CASE("distributed_rmq: 500 random queries match the linear-scan oracle") {
    const uint32_t n = 8;
    Clique cq(cfg_n(n));
    CounterRng rng(7, 99);
    std::vector<uint64_t> flat(20 * n);
    for (auto& x : flat) x = rng.next_below(1000);
    DistWords arr = DistWords::chop(flat, n);
    std::vector<std::vector<std::pair<uint64_t, uint64_t>>> q(n);
    for (int k = 0; k < 500; ++k) {
        uint64_t i = rng.next_in(1, flat.size());
        uint64_t j = rng.next_in(i, flat.size());
        q[k % n].push_back({i, j});
    }
    auto ans = cq.distributed_rmq(arr, q);
    for (uint32_t v = 0; v < n; ++v)
        for (size_t k = 0; k < q[v].size(); ++k)
            CHECK(ans[v][k] == oracle::naive_rmq(flat, q[v][k].first, q[v][k].second));
}

TEST_CASE("distributed_rmq: invalid ranges are rejected") {
    Clique cq(cfg_n(4));
    DistWords a = DistWords::chop({1, 2, 3, 4}, 4);
    std::vector<std::vector<std::pair<uint64_t, uint64_t>>> q(4);
    q[0].push_back({2, 9});
    CHECK_THROWS_AS(cq.distributed_rmq(a, q), IndexOutOfRange);
}

TEST_CASE("explicit backend respects the per-pair capacity") {
    SimConfig c = cfg_n(8, RoutingBackend::explicit_matching);
    c.words_per_pair = 2;
    Clique cq(c);
    RoutingDemand d = random_demand(8, 24, 5);
    cq.route(d);
    CHECK(cq.ledger().raw_rounds == cq.ledger().rounds_charged);
    CHECK(cq.ledger().raw_rounds >= 1);
    // the ledger records, per executed raw round, the heaviest pair
    REQUIRE(cq.ledger().raw_round_peak.size() == cq.ledger().raw_rounds);
    for (uint64_t peak : cq.ledger().raw_round_peak) {
        CHECK(peak >= 1);
        CHECK(peak <= c.words_per_pair);
    }
}
