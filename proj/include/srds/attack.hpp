#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srds/ba_protocol.hpp"
#include "srds/errors.hpp"
#include "srds/prf_subset.hpp"
#include "srds/primitive.hpp"
#include "srds/sim_net.hpp"

namespace srds {

// ------------------------------------------------------------- strawman

// Certified-echo-without-signatures: a CRS-only two-round protocol whose
// last round is a seeded low-fan-out boost. Round 1 sends the input bit to
// the party's CRS subset; round 2 echoes the majority view to the same
// subset; a party outputs the majority of what it heard last, with ties
// resolved toward its own view. The point of shipping it: without private
// setup, last-round messages can be precomputed and replayed.
struct StrawmanInjection {
    uint32_t from = 0, to = 0;
    uint8_t bit = 0;
};

struct StrawmanResult {
    std::vector<uint8_t> outputs;  // per party
    // per party: (sender, bit) received in the last round, arrival order
    std::vector<std::vector<std::pair<uint32_t, uint8_t>>> last_round;
    CommMetrics metrics;
};

inline StrawmanResult run_strawman(uint32_t n, uint32_t fan, const Seed& crs,
                                   const std::vector<uint8_t>& inputs,
                                   const std::vector<char>& silent,
                                   const std::vector<StrawmanInjection>& injections = {}) {
    if (inputs.size() != n || silent.size() != n)
        throw ConfigError("strawman: per-party vector size mismatch");
    Seed subset_seed = derive(crs, "echo-subset", 0);
    std::vector<std::vector<uint32_t>> subset(n);
    for (uint32_t i = 0; i < n; ++i) subset[i] = prf_subset(subset_seed, i, n, fan);

    NetEngine net(n);
    auto bit_payload = [](uint8_t b) { return share_bytes(Bytes{b}); };
    auto tally = [](const std::vector<Envelope>& inbox, uint8_t own) {
        int ones = 0, zeros = 0;
        for (const Envelope& e : inbox) (((*e.payload)[0] & 1) ? ones : zeros)++;
        if (ones > zeros) return uint8_t(1);
        if (zeros > ones) return uint8_t(0);
        return own;
    };

    net.begin_round("echo-1");
    for (uint32_t i = 0; i < n; ++i) {
        if (silent[i]) continue;
        auto payload = bit_payload(inputs[i] & 1);
        for (uint32_t to : subset[i]) net.send(i, to, wire::kEcho, 0, payload);
    }
    net.deliver([](uint32_t, const Envelope& e) {
        return e.kind == wire::kEcho && e.payload && e.payload->size() == 1;
    });
    std::vector<uint8_t> echo(n, 0);
    for (uint32_t i = 0; i < n; ++i) echo[i] = tally(net.inbox(i), inputs[i] & 1);

    net.begin_round("echo-2");
    for (const StrawmanInjection& inj : injections)  // rushing: replays land first
        net.send(inj.from, inj.to, wire::kEcho, 0, bit_payload(inj.bit & 1));
    for (uint32_t i = 0; i < n; ++i) {
        if (silent[i]) continue;
        auto payload = bit_payload(echo[i]);
        for (uint32_t to : subset[i]) net.send(i, to, wire::kEcho, 0, payload);
    }
    net.deliver([](uint32_t, const Envelope& e) {
        return e.kind == wire::kEcho && e.payload && e.payload->size() == 1;
    });

    StrawmanResult res;
    res.outputs.assign(n, 0);
    res.last_round.assign(n, {});
    for (uint32_t i = 0; i < n; ++i) {
        for (const Envelope& e : net.inbox(i))
            res.last_round[i].push_back({e.from, uint8_t((*e.payload)[0] & 1)});
        res.outputs[i] = tally(net.inbox(i), echo[i]);
    }
    res.metrics = net.metrics();
    return res;
}

// --------------------------------------------- isolation-confusion attack

// Three-phase strategy: (1) pick a random silent set J of size beta*n/2;
// (2) simulate the protocol in-head for both preagreement values with J
// silent, recording who talks to each party in the last round and what they
// say; (3) corrupt I = J ∪ C⁰ ∪ C¹ \ {i*} for a target i* with a small
// recorded neighbor set, and in the real run replay the opposite-world
// last-round messages to i*. Against the strawman this flips i*'s output;
// against the full protocol the replayed certificates fail verification
// because they were built under the adversary's guessed setup.
struct AttackConfig {
    uint32_t n = 256;
    uint32_t reps = 200;
    uint64_t seed = 1;
    uint32_t strawman_fan = 8;
    double beta = 0.3;               // corruption budget fraction
    std::string scheme_kind = "owf"; // full-protocol target only
};

struct AttackOutcome {
    std::string target;     // "strawman" | "ba"
    uint32_t trials = 0;    // attacks actually carried out
    uint32_t violations = 0;
    uint32_t aborts = 0;    // recorded neighbor sets exceeded the budget
    uint32_t injected = 0;  // trials with at least one replayed message
    double violation_rate = 0;
    double mean_neighbor_median = 0;  // per-rep median |C⁰_j ∪ C¹_j|, averaged
};

namespace detail_attack {

// Median of the per-party recorded neighbor-set sizes.
inline double median_size(std::vector<size_t> sizes) {
    if (sizes.empty()) return 0;
    std::sort(sizes.begin(), sizes.end());
    size_t mid = sizes.size() / 2;
    if (sizes.size() % 2) return double(sizes[mid]);
    return (double(sizes[mid - 1]) + double(sizes[mid])) / 2;
}

// Pick the attack target: an honest party with a small but non-trivial
// recorded neighbor set (at least two replayable senders, at most 4*fan so
// the corruption budget holds).
inline std::optional<uint32_t> pick_target(const std::vector<std::vector<uint32_t>>& neighbors,
                                           const std::vector<char>& in_j, uint32_t fan,
                                           PrfStream& pick) {
    std::vector<uint32_t> candidates;
    for (uint32_t j = 0; j < neighbors.size(); ++j) {
        if (in_j[j]) continue;
        size_t deg = neighbors[j].size();
        if (deg >= 2 && deg <= size_t(4) * fan) candidates.push_back(j);
    }
    if (candidates.empty()) return std::nullopt;
    return candidates[size_t(pick.next_below(candidates.size()))];
}

}  // namespace detail_attack

inline AttackOutcome attack_strawman(const AttackConfig& cfg) {
    const uint32_t n = cfg.n;
    const uint32_t fan = cfg.strawman_fan;
    const uint32_t budget = uint32_t(cfg.beta * n);
    AttackOutcome out;
    out.target = "strawman";
    double median_acc = 0;
    for (uint32_t rep = 0; rep < cfg.reps; ++rep) {
        Seed rep_seed = derive(seed_from_u64(cfg.seed), "rep", rep);
        Seed crs = derive(rep_seed, "crs", 0);
        uint8_t b = uint8_t(rep & 1);
        std::vector<char> in_j = sample_corrupt(n, uint32_t(cfg.beta * n / 2),
                                                derive(rep_seed, "jset", 0));

        // Phase 2: both in-head worlds under the true CRS (it is public).
        std::vector<std::vector<uint32_t>> neighbors(n);
        std::vector<std::map<uint32_t, uint8_t>> opposite_bits(n);  // (1-b)-world messages
        for (uint8_t world = 0; world <= 1; ++world) {
            auto sim = run_strawman(n, fan, crs, std::vector<uint8_t>(n, world), in_j);
            for (uint32_t j = 0; j < n; ++j) {
                for (auto& [from, bit] : sim.last_round[j]) {
                    if (std::find(neighbors[j].begin(), neighbors[j].end(), from) ==
                        neighbors[j].end())
                        neighbors[j].push_back(from);
                    if (world == (1 - b)) opposite_bits[j][from] = bit;
                }
            }
        }
        std::vector<size_t> sizes;
        for (uint32_t j = 0; j < n; ++j)
            if (!in_j[j]) sizes.push_back(neighbors[j].size());
        median_acc += detail_attack::median_size(sizes);

        PrfStream pick(tag::kPrg, derive(rep_seed, "pick", 0), 0);
        auto target = detail_attack::pick_target(neighbors, in_j, fan, pick);
        if (!target) {
            ++out.aborts;
            continue;
        }
        uint32_t istar = *target;

        // Phase 3: corrupt J plus the recorded senders, replay to i*.
        std::vector<char> corrupt = in_j;
        for (uint32_t from : neighbors[istar])
            if (from != istar) corrupt[from] = 1;
        uint32_t t = uint32_t(std::count(corrupt.begin(), corrupt.end(), char(1)));
        if (t > budget) {
            ++out.aborts;
            continue;
        }
        std::vector<StrawmanInjection> replay;
        for (auto& [from, bit] : opposite_bits[istar])
            if (corrupt[from]) replay.push_back({from, istar, bit});
        auto real = run_strawman(n, fan, crs, std::vector<uint8_t>(n, b), corrupt, replay);
        ++out.trials;
        if (!replay.empty()) ++out.injected;
        if (real.outputs[istar] != b) ++out.violations;
    }
    out.violation_rate = out.trials ? double(out.violations) / out.trials : 0;
    out.mean_neighbor_median = cfg.reps ? median_acc / cfg.reps : 0;
    return out;
}

inline AttackOutcome attack_ba(const AttackConfig& cfg) {
    TreeProfile profile = ba_profile(cfg.n);
    const uint32_t n = cfg.n;
    const uint32_t budget = uint32_t(cfg.beta * n);
    AttackOutcome out;
    out.target = "ba";
    double median_acc = 0;
    for (uint32_t rep = 0; rep < cfg.reps; ++rep) {
        Seed rep_seed = derive(seed_from_u64(cfg.seed), "rep", rep);
        int b = int(rep & 1);
        std::vector<char> in_j = sample_corrupt(n, uint32_t(cfg.beta * n / 2),
                                                derive(rep_seed, "jset", 0));

        // Phase 2: the adversary cannot see the true private setup, so it
        // simulates both worlds under its own guessed seed.
        BaSetupCache guessed_setup;
        std::vector<std::vector<uint32_t>> neighbors(n);
        std::vector<std::map<uint32_t, Bytes>> opposite_payload(n);
        for (int world = 0; world <= 1; ++world) {
            BaConfig sim;
            sim.profile = profile;
            sim.scheme_kind = cfg.scheme_kind;
            sim.seed = derive(rep_seed, "guess", 0);
            sim.inputs.assign(n, world);
            sim.adversary = BaAdversaryKind::Silent;
            sim.corrupt_override = in_j;
            sim.record_boost = true;
            BaOutcome head = run_ba(sim, &guessed_setup);
            for (const BoostRecord& r : head.boost_log) {
                if (std::find(neighbors[r.to].begin(), neighbors[r.to].end(), r.from) ==
                    neighbors[r.to].end())
                    neighbors[r.to].push_back(r.from);
                if (world == 1 - b) opposite_payload[r.to][r.from] = r.payload;
            }
        }
        std::vector<size_t> sizes;
        for (uint32_t j = 0; j < n; ++j)
            if (!in_j[j]) sizes.push_back(neighbors[j].size());
        median_acc += detail_attack::median_size(sizes);

        PrfStream pick(tag::kPrg, derive(rep_seed, "pick", 0), 0);
        auto target = detail_attack::pick_target(neighbors, in_j, profile.fan_out, pick);
        if (!target) {
            ++out.aborts;
            continue;
        }
        uint32_t istar = *target;

        std::vector<char> corrupt = in_j;
        for (uint32_t from : neighbors[istar])
            if (from != istar) corrupt[from] = 1;
        uint32_t t = uint32_t(std::count(corrupt.begin(), corrupt.end(), char(1)));
        if (t > budget) {
            ++out.aborts;
            continue;
        }

        std::vector<std::pair<uint32_t, Bytes>> replay;
        for (auto& [from, payload] : opposite_payload[istar])
            if (corrupt[from]) replay.push_back({from, payload});

        BaConfig real;
        real.profile = profile;
        real.scheme_kind = cfg.scheme_kind;
        real.seed = derive(rep_seed, "real", 0);
        real.inputs.assign(n, b);
        real.adversary = BaAdversaryKind::Silent;
        real.corrupt_override = corrupt;
        real.t = t;
        real.boost_injector = [&](NetEngine& net) {
            for (auto& [from, payload] : replay)
                net.send(from, istar, wire::kBoost, 0, share_bytes(payload));
        };
        BaOutcome real_out = run_ba(real);
        ++out.trials;
        if (!replay.empty()) ++out.injected;
        bool istar_ok = real_out.outputs[istar] && *real_out.outputs[istar] == b;
        if (!istar_ok || !real_out.validity) ++out.violations;
    }
    out.violation_rate = out.trials ? double(out.violations) / out.trials : 0;
    out.mean_neighbor_median = cfg.reps ? median_acc / cfg.reps : 0;
    return out;
}

}  // namespace srds
