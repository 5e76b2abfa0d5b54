#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <unordered_set>
#include <vector>

#include "srds/bytes.hpp"
#include "srds/errors.hpp"

namespace srds {

namespace wire {
constexpr uint8_t kCascade = 0x10;  // committee-to-committee value forwarding
constexpr uint8_t kBase = 0x11;     // base signature to a leaf committee
constexpr uint8_t kShare = 0x12;    // intra-committee element broadcast
constexpr uint8_t kUp = 0x13;       // aggregate to the parent committee
constexpr uint8_t kBoost = 0x14;    // certificate fan-out triple
constexpr uint8_t kEcho = 0x15;     // strawman echo protocol
}  // namespace wire

struct Envelope {
    int round = 0;
    uint32_t from = 0;
    uint32_t to = 0;
    uint8_t kind = 0;
    uint32_t channel = 0;  // tree node id or auxiliary tag
    std::shared_ptr<const Bytes> payload;

    size_t wire_size() const { return kEnvelopeOverhead + (payload ? payload->size() : 0); }
    static constexpr size_t kEnvelopeOverhead = 16;  // round/from/to/kind/channel framing
};

struct PartyMetrics {
    uint64_t bytes_sent = 0, bytes_received = 0;
    uint64_t msgs_sent = 0, msgs_received = 0;
    uint64_t msgs_processed = 0, msgs_filtered = 0;
    std::unordered_set<uint32_t> peers_out;
};

struct CommMetrics {
    std::vector<PartyMetrics> party;
    uint64_t total_bytes = 0;
    uint64_t total_msgs = 0;

    explicit CommMetrics(uint32_t n = 0) : party(n) {}

    uint64_t max_bits_sent() const {
        uint64_t m = 0;
        for (const auto& p : party) m = std::max(m, p.bytes_sent * 8);
        return m;
    }
    size_t max_peers_out() const {
        size_t m = 0;
        for (const auto& p : party) m = std::max(m, p.peers_out.size());
        return m;
    }
    std::vector<size_t> peer_counts() const {
        std::vector<size_t> v;
        v.reserve(party.size());
        for (const auto& p : party) v.push_back(p.peers_out.size());
        return v;
    }
    // Conservation: every received message is either processed or filtered.
    bool conserved() const {
        for (const auto& p : party)
            if (p.msgs_processed + p.msgs_filtered != p.msgs_received) return false;
        return true;
    }
};

// Synchronous rounds with a rushing adversary: within a round, honest
// parties emit first, the adversary may read every envelope addressed to a
// corrupt recipient before emitting its own, then delivery happens at once.
// Recipient-side filters see only envelope bytes (kind, channel, payload),
// never sender key material or internal state.
class NetEngine {
public:
    using Filter = std::function<bool(uint32_t self, const Envelope&)>;

    explicit NetEngine(uint32_t n, std::ostream* trace = nullptr)
        : n_(n), metrics_(n), inboxes_(n), trace_(trace) {}

    int round() const { return round_; }
    uint32_t parties() const { return n_; }

    void begin_round(const char* label) {
        ++round_;
        label_ = label;
        pending_.clear();
    }

    void send(uint32_t from, uint32_t to, uint8_t kind, uint32_t channel,
              std::shared_ptr<const Bytes> payload) {
        if (from >= n_ || to >= n_) throw EngineError("net: unknown party in send");
        Envelope e{round_, from, to, kind, channel, std::move(payload)};
        if (from != to) {  // self-delivery is a local hand-off, not wire traffic
            auto& pm = metrics_.party[from];
            pm.bytes_sent += e.wire_size();
            ++pm.msgs_sent;
            pm.peers_out.insert(to);
            metrics_.total_bytes += e.wire_size();
            ++metrics_.total_msgs;
        }
        if (trace_) trace_line(e);
        pending_.push_back(std::move(e));
    }

    // Rushing view: envelopes queued this round for the given recipient.
    std::vector<const Envelope*> pending_to(uint32_t to) const {
        std::vector<const Envelope*> v;
        for (const auto& e : pending_)
            if (e.to == to) v.push_back(&e);
        return v;
    }

    // Applies the filter and moves surviving envelopes into inboxes,
    // replacing their previous contents.
    void deliver(const Filter& filter) {
        for (auto& box : inboxes_) box.clear();
        for (auto& e : pending_) {
            if (e.from != e.to) {
                auto& pm = metrics_.party[e.to];
                pm.bytes_received += e.wire_size();
                ++pm.msgs_received;
                if (filter && !filter(e.to, e)) {
                    ++pm.msgs_filtered;
                    continue;
                }
                ++pm.msgs_processed;
            } else if (filter && !filter(e.to, e)) {
                continue;
            }
            inboxes_[e.to].push_back(std::move(e));
        }
        pending_.clear();
    }

    const std::vector<Envelope>& inbox(uint32_t party) const { return inboxes_[party]; }
    CommMetrics& metrics() { return metrics_; }
    const CommMetrics& metrics() const { return metrics_; }

private:
    void trace_line(const Envelope& e) {
        *trace_ << "{\"round\":" << e.round << ",\"label\":\"" << label_ << "\",\"from\":" << e.from
                << ",\"to\":" << e.to << ",\"kind\":" << int(e.kind)
                << ",\"channel\":" << e.channel
                << ",\"len\":" << (e.payload ? e.payload->size() : 0) << "}\n";
    }

    uint32_t n_;
    CommMetrics metrics_;
    std::vector<Envelope> pending_;
    std::vector<std::vector<Envelope>> inboxes_;
    int round_ = 0;
    const char* label_ = "";
    std::ostream* trace_;
};

inline std::shared_ptr<const Bytes> share_bytes(Bytes b) {
    return std::make_shared<const Bytes>(std::move(b));
}

}  // namespace srds
