#include <sstream>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "helpers.hpp"
#include "srds/sim_net.hpp"

using namespace srds;
using testutil::bytes_of;

namespace {

std::shared_ptr<const Bytes> payload(const std::string& s) {
    return share_bytes(testutil::bytes_of(s));
}

}  // namespace

TEST_CASE("wire accounting covers framing plus payload") {
    NetEngine net(4);
    net.begin_round("r1");
    net.send(0, 1, 7, 42, payload("hello"));
    net.send(0, 2, 7, 42, payload("hi"));
    net.deliver({});

    const CommMetrics& m = net.metrics();
    CHECK(m.party[0].bytes_sent == (16 + 5) + (16 + 2));
    CHECK(m.party[0].msgs_sent == 2);
    CHECK(m.party[0].peers_out.size() == 2);
    CHECK(m.party[1].bytes_received == 16 + 5);
    CHECK(m.party[2].bytes_received == 16 + 2);
    CHECK(m.total_bytes == 39);
    CHECK(m.total_msgs == 2);
    CHECK(m.max_bits_sent() == 8 * 39);
    CHECK(net.inbox(1).size() == 1);
    CHECK(net.inbox(1)[0].kind == 7);
    CHECK(net.inbox(1)[0].channel == 42);
    CHECK(net.inbox(3).empty());
}

TEST_CASE("self delivery reaches the inbox without touching the wire") {
    NetEngine net(2);
    net.begin_round("self");
    net.send(0, 0, 1, 0, payload("note to self"));
    net.deliver({});
    CHECK(net.inbox(0).size() == 1);
    const CommMetrics& m = net.metrics();
    CHECK(m.party[0].bytes_sent == 0);
    CHECK(m.party[0].bytes_received == 0);
    CHECK(m.party[0].msgs_received == 0);
    CHECK(m.party[0].peers_out.empty());
    CHECK(m.total_msgs == 0);
    CHECK(m.conserved());
}

TEST_CASE("filters file every message as processed or filtered") {
    NetEngine net(3);
    net.begin_round("f");
    for (int i = 0; i < 6; ++i) net.send(0, 1, uint8_t(i % 2), 0, payload("x"));
    net.deliver([](uint32_t, const Envelope& e) { return e.kind == 0; });

    const PartyMetrics& p1 = net.metrics().party[1];
    CHECK(p1.msgs_received == 6);
    CHECK(p1.msgs_processed == 3);
    CHECK(p1.msgs_filtered == 3);
    CHECK(net.metrics().conserved());
    CHECK(net.inbox(1).size() == 3);

    // Next round replaces inbox contents.
    net.begin_round("g");
    net.send(2, 1, 0, 0, payload("y"));
    net.deliver({});
    CHECK(net.inbox(1).size() == 1);
    CHECK(net.metrics().conserved());
}

TEST_CASE("rushing view exposes the round's queued envelopes before delivery") {
    NetEngine net(3);
    net.begin_round("rush");
    net.send(0, 2, 1, 5, payload("early"));
    net.send(1, 2, 1, 5, payload("later"));
    auto view = net.pending_to(2);
    REQUIRE(view.size() == 2);
    CHECK(view[0]->from == 0);
    CHECK(view[1]->from == 1);
    CHECK(net.pending_to(0).empty());
    net.deliver({});
    CHECK(net.pending_to(2).empty());
}

TEST_CASE("unknown parties are engine errors") {
    NetEngine net(2);
    net.begin_round("e");
    CHECK_THROWS_AS(net.send(0, 5, 0, 0, payload("x")), EngineError);
    CHECK_THROWS_AS(net.send(5, 0, 0, 0, payload("x")), EngineError);
}

TEST_CASE("traces are one JSON object per envelope") {
    std::ostringstream trace;
    NetEngine net(2, &trace);
    net.begin_round("t");
    net.send(0, 1, 3, 9, payload("abc"));
    net.send(1, 0, 4, 9, payload("defg"));
    net.deliver({});

    std::istringstream lines(trace.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        nlohmann::json j = nlohmann::json::parse(line);
        CHECK(j["round"] == 1);
        CHECK(j["label"] == "t");
        CHECK(j.contains("from"));
        CHECK(j.contains("len"));
        ++count;
    }
    CHECK(count == 2);
}
