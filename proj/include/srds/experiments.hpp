#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "srds/ba_protocol.hpp"
#include "srds/comm_tree.hpp"
#include "srds/errors.hpp"
#include "srds/srds_core.hpp"

namespace srds {

// --------------------------------------------------------------- common

enum class GameVerdict : uint8_t { Reject = 0, Accept = 1, Disqualified = 2, TreeInvalid = 3 };

inline const char* game_verdict_name(GameVerdict v) {
    switch (v) {
        case GameVerdict::Reject: return "reject";
        case GameVerdict::Accept: return "accept";
        case GameVerdict::Disqualified: return "disqualified";
        case GameVerdict::TreeInvalid: return "tree-invalid";
    }
    return "?";
}

// ------------------------------------------------------- robustness game

// The adversary tries to make honest tree aggregation of a fixed message
// fail verification. It controls the corrupt parties' contributions and, in
// the strongest variant, the committee assignment itself (within the
// invariants the tree validator enforces).
enum class RobustAdversary : uint8_t {
    SilentTree,     // corrupt parties contribute nothing anywhere
    GarbageStaler,  // corrupt nodes emit pseudorandom junk aggregates
    Maximal,        // adversarial assignment + junk + withheld base signatures
};

inline const char* robust_adversary_name(RobustAdversary a) {
    switch (a) {
        case RobustAdversary::SilentTree: return "silent-tree";
        case RobustAdversary::GarbageStaler: return "garbage-staler";
        case RobustAdversary::Maximal: return "maximal";
    }
    return "?";
}

inline RobustAdversary robust_adversary_from_name(const std::string& s) {
    if (s == "silent-tree") return RobustAdversary::SilentTree;
    if (s == "garbage-staler") return RobustAdversary::GarbageStaler;
    if (s == "maximal") return RobustAdversary::Maximal;
    throw ConfigError("unknown robustness adversary: " + s);
}

struct RobustConfig {
    std::string profile_name = "n256e";
    std::string scheme_kind = "owf";
    bool bare_pki = false;  // adversary swaps in its own keys for corrupt parties
    uint32_t t = 0;         // corrupt party count
    RobustAdversary adversary = RobustAdversary::SilentTree;
    uint64_t seed = 1;
};

struct RobustOutcome {
    GameVerdict verdict = GameVerdict::Reject;
    bool tree_valid = false;
    uint32_t bad_nodes = 0;
    uint32_t bad_path_leaves = 0;
    uint32_t isolated = 0;
    uint32_t honest_contributors = 0;  // keyed honest base signers on fully good paths
};

inline TreeProfile robust_profile(const std::string& name) {
    for (uint32_t n : {16u, 32u, 64u, 256u, 1024u}) {
        if (name == "n" + std::to_string(n) + "e") return expt_profile(n);
        if (name == "n" + std::to_string(n)) return ba_profile(n);
    }
    throw ConfigError("unknown tree profile: " + name);
}

inline RobustOutcome run_robustness(const RobustConfig& cfg) {
    TreeProfile profile = robust_profile(cfg.profile_name);
    const uint32_t n = profile.n;
    const uint64_t n_ids = profile.virtual_ids();
    Seed root_seed = seed_from_u64(cfg.seed);
    Seed setup = derive(root_seed, "setup", 0);

    auto scheme = make_scheme(cfg.scheme_kind, uint32_t(n_ids), setup);
    std::vector<SrdsKeyPair> signing;
    signing.reserve(size_t(n_ids));
    for (uint64_t vid = 1; vid <= n_ids; ++vid)
        signing.push_back(scheme->keygen(derive(setup, "vkey", vid)));
    scheme->set_keys(signing);

    std::vector<char> corrupt = sample_corrupt(n, cfg.t, derive(root_seed, "corrupt", 0));

    RobustOutcome out;
    CommTree tree =
        (cfg.adversary == RobustAdversary::Maximal)
            ? build_adversarial_tree(profile, corrupt, derive(root_seed, "tree", 0))
            : build_tree(profile, corrupt, derive(root_seed, "tree", 0), Dealing::Balanced);
    auto vr = validate_tree(tree);
    out.tree_valid = vr.ok;
    if (!vr.ok) {
        out.verdict = GameVerdict::TreeInvalid;
        return out;
    }
    out.bad_path_leaves = uint32_t(tree.bad_path_leaves);
    out.isolated = uint32_t(std::count(tree.isolated.begin(), tree.isolated.end(), char(1)));
    for (const auto& node : tree.nodes)
        if (!node.good) ++out.bad_nodes;

    // Bare-PKI variant: the adversary replaces the registered keys for every
    // slot owned by a corrupt party before aggregation starts.
    std::vector<SrdsKeyPair> effective = signing;
    if (cfg.bare_pki) {
        Seed adv = derive(root_seed, "adv-keys", 0);
        for (uint64_t vid = 1; vid <= n_ids; ++vid) {
            if (!corrupt[tree.slot_party(vid)]) continue;
            SrdsKeyPair kp;
            kp.ots = ots_keygen(derive(adv, "swap", vid), scheme->params().msg_bits,
                                scheme->params().kappa);
            effective[size_t(vid - 1)] = kp;
            scheme->replace_key(uint32_t(vid), kp);
        }
    }

    // Challenge message. Isolated parties and bad-path leaves model upstream
    // disagreement: those slots sign per-party divergent messages instead.
    Bytes msg = digest_bytes(tagged_hash(tag::kDerive, derive(root_seed, "message", 0)));
    msg.resize(5);

    PrfStream junk(tag::kPrg, derive(root_seed, "junk", 0), 0);
    auto junk_bytes = [&](size_t len) {
        Bytes b(len);
        for (auto& x : b) x = uint8_t(junk.next_u64());
        return b;
    };

    // Base signatures per leaf slot.
    std::map<uint32_t, std::vector<SrdsSignature>> leaf_sigs;  // node id -> sigs
    for (uint64_t vid = 1; vid <= n_ids; ++vid) {
        uint32_t owner = tree.slot_party(vid);
        uint32_t leaf_id = tree.leaf_of_vid(vid);
        const TreeNode& leaf = tree.nodes[leaf_id];
        if (corrupt[owner]) {
            if (cfg.adversary != RobustAdversary::GarbageStaler) continue;  // withhold
            // corrupt bases sign an unrelated message
            Bytes other = msg;
            other[0] ^= 0xFF;
            if (!effective[size_t(vid - 1)].keyed()) continue;
            auto sig = scheme->sign(uint32_t(vid), other, effective[size_t(vid - 1)]);
            if (sig) leaf_sigs[leaf_id].push_back(*sig);
            continue;
        }
        Bytes to_sign = msg;
        bool diverged = tree.isolated[owner] || !leaf.path_good;
        if (diverged) {
            Bytes div = digest_bytes(tagged_hash(tag::kDerive, derive(root_seed, "div", owner)));
            div.resize(5);
            to_sign = div;
        }
        if (!signing[size_t(vid - 1)].keyed()) continue;
        if (!diverged) ++out.honest_contributors;
        auto sig = scheme->sign(uint32_t(vid), to_sign, signing[size_t(vid - 1)]);
        if (sig) leaf_sigs[leaf_id].push_back(*sig);
    }

    // Level-by-level aggregation. Good nodes run the scheme's aggregation on
    // the challenge message; bad nodes play the adversary.
    std::vector<std::optional<SrdsSignature>> value(tree.nodes.size());
    for (uint32_t ni = 0; ni < tree.nodes.size(); ++ni) {
        const TreeNode& node = tree.nodes[ni];
        std::vector<SrdsSignature> inputs;
        if (node.level == 1) {
            auto it = leaf_sigs.find(ni);
            if (it != leaf_sigs.end()) inputs = it->second;
        } else {
            for (uint32_t child : node.children)
                if (value[child]) inputs.push_back(*value[child]);
        }
        if (!node.good) {
            if (cfg.adversary == RobustAdversary::SilentTree) {
                value[ni] = std::nullopt;
            } else {
                SrdsSignature junk_sig;
                junk_sig.message = msg;
                junk_sig.id_min = node.id_min;
                junk_sig.id_max = node.id_max;
                junk_sig.payload = junk_bytes(64);
                value[ni] = junk_sig;
            }
            continue;
        }
        auto s_sig = scheme->aggregate1(msg, inputs);
        value[ni] = s_sig ? std::optional<SrdsSignature>(scheme->aggregate2(msg, *s_sig))
                          : std::nullopt;
    }

    auto& root = value[size_t(tree.root_id)];
    out.verdict = (root && scheme->verify(msg, *root)) ? GameVerdict::Accept : GameVerdict::Reject;
    return out;
}

// --------------------------------------------------------- forgery game

// The adversary corrupts a set I (learning its keys), picks a disjoint
// honest set S whose members are instructed to sign adversary-chosen
// messages, sees every resulting signature, and must output a verifying pair
// (m', sigma') with m' different from the honest message. It is disqualified
// if S and I together reach a third of the parties.
enum class ForgeAdversary : uint8_t {
    Concat,  // points every instructed signer at the forged message and concatenates
    Replay,  // replays the honest aggregate unchanged (must lose: same message)
};

inline const char* forge_adversary_name(ForgeAdversary a) {
    switch (a) {
        case ForgeAdversary::Concat: return "concat";
        case ForgeAdversary::Replay: return "replay";
    }
    return "?";
}

inline ForgeAdversary forge_adversary_from_name(const std::string& s) {
    if (s == "concat") return ForgeAdversary::Concat;
    if (s == "replay") return ForgeAdversary::Replay;
    throw ConfigError("unknown forgery adversary: " + s);
}

struct ForgeConfig {
    uint32_t n = 256;
    std::string scheme_kind = "owf";
    ForgeAdversary adversary = ForgeAdversary::Concat;
    uint32_t union_size = 16;  // |S union I| the adversary aims for
    uint64_t seed = 1;
};

struct ForgeOutcome {
    GameVerdict verdict = GameVerdict::Reject;  // Accept = successful forgery
    bool forged_message_differs = false;
    uint32_t union_size = 0;
    uint32_t keyed_in_union = 0;
};

inline ForgeOutcome run_forgery(const ForgeConfig& cfg) {
    const uint32_t n = cfg.n;
    Seed root_seed = seed_from_u64(cfg.seed);
    Seed setup = derive(root_seed, "setup", 0);
    auto scheme = make_scheme(cfg.scheme_kind, n, setup);
    std::vector<SrdsKeyPair> signing;
    signing.reserve(n);
    for (uint64_t vid = 1; vid <= n; ++vid)
        signing.push_back(scheme->keygen(derive(setup, "vkey", vid)));
    scheme->set_keys(signing);

    ForgeOutcome out;
    out.union_size = cfg.union_size;
    // Challenger enforces the corruption budget on |S ∪ I|.
    if (3ull * cfg.union_size >= n) {
        out.verdict = GameVerdict::Disqualified;
        return out;
    }

    // Adversary splits its budget: half corrupt (keys leak), half instructed.
    std::vector<uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 1);
    auto rng = stat_engine(derive(root_seed, "pick", 0), "forge-pick");
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<char> in_i(n + 1, 0), in_s(n + 1, 0);
    for (uint32_t i = 0; i < cfg.union_size; ++i)
        (i < cfg.union_size / 2 ? in_i : in_s)[ids[i]] = 1;

    Bytes m = digest_bytes(tagged_hash(tag::kDerive, derive(root_seed, "honest-msg", 0)));
    m.resize(5);
    Bytes m_forged = m;
    m_forged[0] ^= 0x5A;

    // Parties in S sign what the adversary asks; all other honest parties
    // sign the honest message (visible to the adversary, e.g. for replay).
    std::vector<SrdsSignature> honest_on_m;
    std::vector<SrdsSignature> material;  // aggregatable on the forged message
    for (uint32_t pid = 1; pid <= n; ++pid) {
        if (!signing[pid - 1].keyed()) continue;
        if (in_i[pid]) {
            ++out.keyed_in_union;
            auto sig = scheme->sign(pid, m_forged, signing[pid - 1]);  // leaked key
            if (sig) material.push_back(*sig);
        } else if (in_s[pid]) {
            ++out.keyed_in_union;
            const Bytes& instructed =
                (cfg.adversary == ForgeAdversary::Concat) ? m_forged : m;
            auto sig = scheme->sign(pid, instructed, signing[pid - 1]);
            if (!sig) continue;
            if (cfg.adversary == ForgeAdversary::Concat) material.push_back(*sig);
            else honest_on_m.push_back(*sig);
        } else {
            auto sig = scheme->sign(pid, m, signing[pid - 1]);
            if (sig) honest_on_m.push_back(*sig);
        }
    }

    Bytes out_msg;
    std::optional<SrdsSignature> out_sig;
    if (cfg.adversary == ForgeAdversary::Concat) {
        out_msg = m_forged;
        auto s_sig = scheme->aggregate1(m_forged, material);
        if (s_sig) out_sig = scheme->aggregate2(m_forged, *s_sig);
    } else {
        // the strongest thing a pure-replay adversary can emit is the honest
        // aggregate itself, which cannot win: the message matches
        out_msg = m;
        auto s_sig = scheme->aggregate1(m, honest_on_m);
        if (s_sig) out_sig = scheme->aggregate2(m, *s_sig);
    }

    out.forged_message_differs = out_msg != m;
    bool ok = out_sig && scheme->verify(out_msg, *out_sig);
    out.verdict = (ok && out.forged_message_differs) ? GameVerdict::Accept : GameVerdict::Reject;
    return out;
}

// ------------------------------------------- committee-election tails

// Monte-Carlo for the keyed-committee concentration bounds: each party is
// keyed independently with probability ell/n; the committee is the keyed
// set. Tracks the committee-size window [ell/2, 3ell/2] and how often the
// overlap with a planted set reaches one third of the nominal committee.
struct CommitteeMcResult {
    int trials = 0;
    int size_in_window = 0;      // |C| within [ell/2, 3ell/2]
    int overlap_below_third = 0; // |C ∩ planted| < ell'/3 with ell' = |C|
    double avg_size = 0;
    double avg_overlap = 0;
};

inline CommitteeMcResult committee_mc(uint32_t n, uint32_t ell, uint32_t planted_size, int trials,
                                      uint64_t seed) {
    if (ell == 0 || ell > n) throw ParameterError("committee mc: need ell in [1, n]");
    if (planted_size > n) throw ParameterError("committee mc: planted set too large");
    CommitteeMcResult r;
    r.trials = trials;
    PrfStream stream(tag::kPrg, seed_from_u64(seed), 0);
    unsigned __int128 thr = ((unsigned __int128)ell << 64) / n;
    double total_size = 0, total_overlap = 0;
    for (int trial = 0; trial < trials; ++trial) {
        uint32_t size = 0, overlap = 0;
        for (uint32_t i = 0; i < n; ++i) {
            bool keyed = (unsigned __int128)stream.next_u64() < thr;
            if (!keyed) continue;
            ++size;
            if (i < planted_size) ++overlap;  // planted set fixed; keyed coins exchangeable
        }
        total_size += size;
        total_overlap += overlap;
        if (2 * size >= ell && 2 * size <= 3 * ell) ++r.size_in_window;
        if (3 * overlap < size) ++r.overlap_below_third;
    }
    r.avg_size = trials ? total_size / trials : 0;
    r.avg_overlap = trials ? total_overlap / trials : 0;
    return r;
}

}  // namespace srds
