#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string_view>

#include "srds/comm_tree.hpp"
#include "srds/owf_srds.hpp"
#include "srds/pcd_srds.hpp"
#include "srds/prf_subset.hpp"
#include "srds/sim_net.hpp"

namespace srds {

// ---------------------------------------------------------------- oracles

struct FbaResult {
    int y = 0;
    bool adversarial = false;
};

// Byzantine-agreement oracle over one committee: outputs b when at least
// |C| - t submitted inputs equal b, otherwise the adversary picks.
inline FbaResult f_ba(const std::vector<std::optional<int>>& inputs, uint32_t t_param,
                      std::optional<int> adversary_choice) {
    size_t k = inputs.size();
    for (int b = 0; b <= 1; ++b) {
        size_t cnt = 0;
        for (const auto& x : inputs) cnt += (x && *x == b) ? 1 : 0;
        if (cnt + t_param >= k) return {b, false};
    }
    return {adversary_choice.value_or(0), true};
}

inline Bytes f_ct(const Seed& seed, int kappa) {
    Bytes s = derive(seed, "coin-toss", 0);
    s.resize(size_t(kappa) / 8);
    return s;
}

struct AggrSubmission {
    Bytes m;
    std::vector<Bytes> s_sig;

    bool operator==(const AggrSubmission& o) const { return m == o.m && s_sig == o.s_sig; }
};

// Aggregation oracle: when two thirds of a committee submit the identical
// (message, element list) pair the oracle runs the key-free combiner on it;
// otherwise the adversary chooses the committee's output (default: none).
// Submissions are passed by shared pointer so duplicate views count without
// byte comparison; distinct pointers fall back to value equality.
inline std::optional<SrdsSignature> f_aggr_sig(
    const SrdsScheme& scheme, const std::vector<std::shared_ptr<const AggrSubmission>>& subs,
    std::optional<SrdsSignature> adversary_sigma) {
    std::vector<std::pair<const AggrSubmission*, size_t>> groups;
    for (const auto& s : subs) {
        if (!s) continue;
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == s.get(); });
        if (it == groups.end()) groups.emplace_back(s.get(), 1);
        else ++it->second;
    }
    for (size_t a = 0; a < groups.size(); ++a) {
        size_t total = groups[a].second;
        for (size_t b = 0; b < groups.size(); ++b)
            if (b != a && *groups[b].first == *groups[a].first) total += groups[b].second;
        if (3 * total >= 2 * subs.size())
            return scheme.aggregate2(groups[a].first->m, groups[a].first->s_sig);
    }
    return adversary_sigma;
}

// Idealized tree-distribution oracle used for unit semantics: every party
// outside the isolated set receives the value, isolated parties receive the
// adversary's substitute (default nothing). The protocol runner realizes the
// same guarantee operationally via committee cascades.
inline std::vector<std::optional<Bytes>> f_ae_comm(const CommTree& tree, const Bytes& value,
                                                   const std::optional<Bytes>& adversary_value) {
    std::vector<std::optional<Bytes>> out(tree.profile.n);
    for (uint32_t p = 0; p < tree.profile.n; ++p)
        out[p] = tree.isolated[p] ? adversary_value : std::optional<Bytes>(value);
    return out;
}

// ------------------------------------------------------------- protocol

enum class BaAdversaryKind { Honest, Silent, Equivocator, TreeStaler, KeyReplacer };

inline const char* ba_adversary_name(BaAdversaryKind k) {
    switch (k) {
        case BaAdversaryKind::Honest: return "honest";
        case BaAdversaryKind::Silent: return "silent";
        case BaAdversaryKind::Equivocator: return "equivocator";
        case BaAdversaryKind::TreeStaler: return "tree_staler";
        case BaAdversaryKind::KeyReplacer: return "key_replacer";
    }
    return "?";
}

inline BaAdversaryKind ba_adversary_from_name(const std::string& s) {
    for (auto k : {BaAdversaryKind::Honest, BaAdversaryKind::Silent, BaAdversaryKind::Equivocator,
                   BaAdversaryKind::TreeStaler, BaAdversaryKind::KeyReplacer})
        if (s == ba_adversary_name(k)) return k;
    throw ConfigError("unknown adversary: " + s);
}

struct BaConfig {
    TreeProfile profile;
    std::string scheme_kind = "owf";  // "owf" | "pcd-mock"
    bool bare_pki = false;
    uint32_t t = 0;
    BaAdversaryKind adversary = BaAdversaryKind::Honest;
    Seed seed;
    std::vector<int> inputs;  // per party
    std::ostream* trace = nullptr;
    bool record_boost = false;
    std::optional<std::vector<char>> corrupt_override;
    std::function<void(NetEngine&)> boost_injector;  // extra corrupt fan-out traffic
};

struct BoostRecord {
    uint32_t from, to;
    Bytes payload;
};

struct BaOutcome {
    std::vector<std::optional<int>> outputs;
    std::vector<char> corrupt;
    int y_oracle = -1;
    bool fba_adversarial = false;
    bool tree_valid = true;
    bool all_output = false;
    bool agreement = false;
    bool validity_applicable = false;
    bool validity = true;
    uint64_t forged_cert_accepts = 0;
    uint64_t distinct_y_anomalies = 0;
    int rounds = 0;
    uint64_t max_honest_bits_sent = 0;
    size_t max_honest_peers = 0;
    bool comm_bound_ok = true;
    bool locality_ok = true;
    bool conserved = true;
    int isolated_count = 0;
    std::vector<BoostRecord> boost_log;
};

// Reusable setup for repeated honest runs: key generation dominates the
// per-repetition cost and is independent of protocol randomness.
struct BaSetupCache {
    std::unique_ptr<SrdsScheme> scheme;
    std::vector<SrdsKeyPair> signing_keys;  // per virtual ID, index 0 = ID 1
};

inline std::unique_ptr<SrdsScheme> make_scheme(const std::string& kind, uint32_t n_ids,
                                               const Seed& setup_seed) {
    if (kind == "owf") {
        OwfSrdsConfig c;
        c.n = n_ids;
        c.setup_seed = setup_seed;
        return std::make_unique<OwfSrds>(c);
    }
    if (kind == "pcd-mock") {
        PcdSrdsConfig c;
        c.n = n_ids;
        c.setup_seed = setup_seed;
        return std::make_unique<PcdSrds>(c);
    }
    throw ConfigError("unknown scheme kind: " + kind);
}

inline void ba_setup(const BaConfig& cfg, BaSetupCache& cache) {
    uint64_t n_ids = cfg.profile.virtual_ids();
    Seed setup = derive(cfg.seed, "setup", 0);
    cache.scheme = make_scheme(cfg.scheme_kind, uint32_t(n_ids), setup);
    cache.signing_keys.clear();
    cache.signing_keys.reserve(size_t(n_ids));
    std::vector<SrdsKeyPair> registry;
    registry.reserve(size_t(n_ids));
    for (uint64_t vid = 1; vid <= n_ids; ++vid) {
        SrdsKeyPair kp = cache.scheme->keygen(derive(setup, "vkey", vid));
        registry.push_back(kp);
        cache.signing_keys.push_back(std::move(kp));
    }
    cache.scheme->set_keys(std::move(registry));
}

inline std::vector<char> sample_corrupt(uint32_t n, uint32_t t, const Seed& seed) {
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto rng = stat_engine(seed, "corrupt-set");
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> c(n, 0);
    for (uint32_t i = 0; i < t && i < n; ++i) c[order[i]] = 1;
    return c;
}

namespace detail {

inline std::optional<Bytes> byte_majority(std::vector<const Bytes*>& vals) {
    if (vals.empty()) return std::nullopt;
    std::map<std::string_view, std::pair<size_t, const Bytes*>> counts;
    for (const Bytes* v : vals) {
        std::string_view sv(reinterpret_cast<const char*>(v->data()), v->size());
        auto& slot = counts[sv];
        ++slot.first;
        slot.second = v;
    }
    size_t best = 0, second = 0;
    const Bytes* winner = nullptr;
    for (auto& [k, v] : counts) {
        if (v.first > best) {
            second = best;
            best = v.first;
            winner = v.second;
        } else if (v.first > second) {
            second = v.first;
        }
    }
    if (best == second) return std::nullopt;  // tie
    return *winner;
}

inline Bytes encode_element_batch(const std::vector<Bytes>& elems) {
    Bytes out;
    append_varint(out, elems.size());
    for (const auto& e : elems) {
        append_varint(out, e.size());
        append_bytes(out, e);
    }
    return out;
}

inline bool decode_element_batch(const Bytes& b, std::vector<Bytes>& out, size_t max_elem_size) {
    try {
        ByteReader r(b);
        uint64_t n = r.read_varint();
        if (n > 100000) return false;
        for (uint64_t i = 0; i < n; ++i) {
            uint64_t len = r.read_varint();
            if (len > max_elem_size) return false;
            out.push_back(r.read_bytes(size_t(len)));
        }
        return r.remaining() == 0;
    } catch (const MalformedInput&) {
        return false;
    }
}

}  // namespace detail

// One synchronous execution. Round schedule: two committee cascades of
// (levels-1) hops each, one base-submission round, one intra-committee share
// round per level, one upward round per non-root level, and one fan-out
// round: 4*levels - 1 rounds in total.
inline BaOutcome run_ba(const BaConfig& cfg, BaSetupCache* reuse = nullptr) {
    const TreeProfile& p = cfg.profile;
    const uint32_t n = p.n;
    if (cfg.inputs.size() != n) throw ConfigError("ba: inputs size mismatch");
    const int kappa = 32;

    BaSetupCache local;
    BaSetupCache& setup = reuse && reuse->scheme ? *reuse : local;
    if (!setup.scheme) ba_setup(cfg, setup);
    if (reuse && !reuse->scheme) *reuse = std::move(local);
    BaSetupCache& su = reuse && reuse->scheme ? *reuse : setup;
    // Key substitution mutates the registry, so fork any shared setup first.
    std::unique_ptr<SrdsScheme> forked;
    if (reuse && cfg.bare_pki && cfg.adversary == BaAdversaryKind::KeyReplacer)
        forked = su.scheme->clone();
    SrdsScheme& scheme = forked ? *forked : *su.scheme;

    BaOutcome out;
    out.corrupt = cfg.corrupt_override ? *cfg.corrupt_override
                                       : sample_corrupt(n, cfg.t, derive(cfg.seed, "corrupt", 0));
    const std::vector<char>& corrupt = out.corrupt;

    // Bare-registry substitution happens per corrupt-owned slot once the
    // tree fixes slot ownership.
    std::vector<SrdsKeyPair> replaced_keys(su.signing_keys);

    CommTree tree = build_tree(p, corrupt, derive(cfg.seed, "tree", 0), Dealing::Balanced);
    auto vres = validate_tree(tree);
    out.tree_valid = vres.ok;
    if (!vres.ok) {
        out.outputs.assign(n, std::nullopt);
        return out;
    }
    out.isolated_count = int(std::count(tree.isolated.begin(), tree.isolated.end(), char(1)));

    if (cfg.bare_pki && cfg.adversary == BaAdversaryKind::KeyReplacer) {
        Seed adv_seed = derive(cfg.seed, "adv-keys", 0);
        for (uint64_t vid = 1; vid <= p.virtual_ids(); ++vid) {
            if (!corrupt[tree.slot_party(vid)]) continue;
            SrdsKeyPair kp;
            kp.ots = ots_keygen(derive(adv_seed, "slot", vid), scheme.params().msg_bits,
                                scheme.params().kappa);
            replaced_keys[size_t(vid - 1)] = kp;
            scheme.replace_key(uint32_t(vid), std::move(kp));
        }
    }
    const std::vector<SrdsKeyPair>& signing_keys =
        (cfg.bare_pki && cfg.adversary == BaAdversaryKind::KeyReplacer) ? replaced_keys
                                                                        : su.signing_keys;

    NetEngine net(n, cfg.trace);

    // Steps 1-2: supreme committee agreement oracle, then the shared coin.
    const TreeNode& root = tree.nodes[size_t(tree.root_id)];
    std::vector<std::optional<int>> fba_in;
    for (uint32_t m : root.members) {
        if (corrupt[m] && cfg.adversary == BaAdversaryKind::Silent)
            fba_in.push_back(std::nullopt);
        else
            fba_in.push_back(cfg.inputs[m]);
    }
    FbaResult fr = f_ba(fba_in, uint32_t(p.k_node + 2) / 3 - 1, std::nullopt);
    out.y_oracle = fr.y;
    out.fba_adversarial = fr.adversarial;
    Bytes coin = f_ct(derive(cfg.seed, "fct", 0), kappa);
    Bytes true_msg;
    true_msg.push_back(uint8_t(fr.y));
    append_bytes(true_msg, coin);

    // held[node][member seat]: value carried by this committee seat.
    std::vector<std::vector<std::optional<Bytes>>> held(tree.nodes.size());
    for (size_t i = 0; i < tree.nodes.size(); ++i)
        held[i].assign(tree.nodes[i].members.size(), std::nullopt);

    auto cascade = [&](const Bytes& root_value, const char* label) {
        for (auto& h : held)
            std::fill(h.begin(), h.end(), std::optional<Bytes>{});
        for (size_t j = 0; j < root.members.size(); ++j) held[size_t(tree.root_id)][j] = root_value;
        for (int lvl = p.levels; lvl >= 2; --lvl) {
            net.begin_round(label);
            for (size_t ni = 0; ni < tree.nodes.size(); ++ni) {
                const TreeNode& node = tree.nodes[ni];
                if (node.level != lvl) continue;
                for (size_t j = 0; j < node.members.size(); ++j) {
                    if (!held[ni][j]) continue;
                    uint32_t sender = node.members[j];
                    if (corrupt[sender] && cfg.adversary == BaAdversaryKind::Silent) continue;
                    auto payload = share_bytes(*held[ni][j]);
                    for (int c : node.children)
                        for (uint32_t to : tree.nodes[size_t(c)].members)
                            net.send(sender, to, wire::kCascade, uint32_t(c), payload);
                }
            }
            net.deliver([](uint32_t, const Envelope& e) { return e.kind == wire::kCascade; });
            for (size_t ni = 0; ni < tree.nodes.size(); ++ni) {
                const TreeNode& node = tree.nodes[ni];
                if (node.level != lvl - 1) continue;
                for (size_t j = 0; j < node.members.size(); ++j) {
                    uint32_t self = node.members[j];
                    std::vector<const Bytes*> got;
                    for (const Envelope& e : net.inbox(self))
                        if (e.channel == uint32_t(ni)) got.push_back(e.payload.get());
                    held[ni][j] = detail::byte_majority(got);
                }
            }
        }
    };

    cascade(true_msg, "dist-msg");

    // Party-level consolidation: majority over the party's leaf slots.
    uint32_t L = p.leaf_count();
    auto consolidate = [&]() {
        std::vector<std::optional<Bytes>> view(n);
        std::vector<std::vector<const Bytes*>> per_party(n);
        for (uint32_t k = 0; k < L; ++k) {
            const TreeNode& lf = tree.nodes[k];
            for (size_t j = 0; j < lf.members.size(); ++j)
                if (held[k][j]) per_party[lf.members[j]].push_back(&*held[k][j]);
        }
        for (uint32_t q = 0; q < n; ++q) view[q] = detail::byte_majority(per_party[q]);
        return view;
    };
    std::vector<std::optional<Bytes>> party_msg = consolidate();

    // Step 4: every party signs its value once per owned slot and submits it
    // to the slot's leaf committee.
    Seed staler_seed = derive(cfg.seed, "staler", 0);
    net.begin_round("base");
    for (uint32_t k = 0; k < L; ++k) {
        const TreeNode& lf = tree.nodes[k];
        for (size_t j = 0; j < lf.members.size(); ++j) {
            uint32_t q = lf.members[j];
            uint64_t vid = lf.id_min + j;
            std::optional<Bytes> m = party_msg[q];
            if (corrupt[q]) {
                if (cfg.adversary == BaAdversaryKind::Silent) continue;
                if (cfg.adversary == BaAdversaryKind::Equivocator && m) {
                    Bytes flipped = *m;
                    flipped[0] ^= 1;
                    m = flipped;
                }
            }
            if (!m) continue;
            auto sig = scheme.sign(uint32_t(vid), *m, signing_keys[size_t(vid - 1)]);
            if (!sig) continue;
            auto payload = share_bytes(sig->encode());
            for (uint32_t to : lf.members) net.send(q, to, wire::kBase, k, payload);
        }
    }
    size_t max_elem = scheme.params().alpha_bytes + 4096;
    net.deliver([max_elem](uint32_t, const Envelope& e) {
        return e.kind == wire::kBase && e.payload && e.payload->size() <= max_elem;
    });

    // Step 5: level-by-level aggregation; one share round and one upward
    // round per level. sigma[node] is the committee's oracle output.
    //
    // Committee members receive the same shared payload buffers, so decode
    // results and whole member views recur; pointer-keyed caches make each
    // distinct buffer and each distinct view a one-time cost without
    // changing any per-member outcome.
    std::vector<std::optional<SrdsSignature>> sigma(tree.nodes.size());

    struct PoolItem {
        SrdsSignature sig;
        std::string enc;  // canonical encoding, the intra-committee dedup key
    };
    using PoolRef = std::shared_ptr<const PoolItem>;

    for (int lvl = 1; lvl <= p.levels; ++lvl) {
        // collect per-seat candidate signatures from the delivered envelopes
        std::unordered_map<const void*, PoolRef> sig_cache;  // nullptr = malformed
        auto decode_sig = [&](const Envelope& e) -> const PoolRef& {
            auto [it, fresh] = sig_cache.try_emplace(e.payload.get());
            if (fresh) {
                try {
                    SrdsSignature s = SrdsSignature::decode(*e.payload);
                    Bytes enc = s.encode();
                    it->second = std::make_shared<PoolItem>(
                        PoolItem{std::move(s), std::string(enc.begin(), enc.end())});
                } catch (const MalformedInput&) {
                }
            }
            return it->second;
        };
        std::vector<std::vector<std::vector<PoolRef>>> pools(tree.nodes.size());
        for (size_t ni = 0; ni < tree.nodes.size(); ++ni) {
            const TreeNode& node = tree.nodes[ni];
            if (node.level != lvl) continue;
            pools[ni].resize(node.members.size());
            for (size_t j = 0; j < node.members.size(); ++j) {
                uint32_t self = node.members[j];
                for (const Envelope& e : net.inbox(self)) {
                    if (e.channel != uint32_t(ni) && lvl == 1) continue;
                    if (lvl == 1 && e.kind != wire::kBase) continue;
                    if (lvl > 1 && e.kind != wire::kUp) continue;
                    const PoolRef& item = decode_sig(e);
                    if (!item) continue;
                    const SrdsSignature& s = item->sig;
                    if (lvl == 1) {
                        if (!s.is_base() || s.id_min < node.id_min || s.id_max > node.id_max)
                            continue;
                    } else {
                        // provenance range check against the sending child
                        bool ok = false;
                        for (int c : node.children) {
                            const TreeNode& ch = tree.nodes[size_t(c)];
                            if (e.channel == uint32_t(c) && s.id_min >= ch.id_min &&
                                s.id_max <= ch.id_max && s.id_min != 0) {
                                ok = true;
                                break;
                            }
                        }
                        if (!ok) continue;
                    }
                    pools[ni][j].push_back(item);
                }
            }
        }
        auto pool_key = [](const std::vector<PoolRef>& pool) {
            std::string key;
            key.reserve(pool.size() * sizeof(void*));
            for (const PoolRef& r : pool) {
                const void* ptr = r.get();
                key.append(reinterpret_cast<const char*>(&ptr), sizeof(ptr));
            }
            return key;
        };
        // intra-committee share round: broadcast the distinct encodings
        net.begin_round("share");
        std::vector<std::unordered_map<std::string, std::shared_ptr<const Bytes>>> share_cache(
            tree.nodes.size());
        for (size_t ni = 0; ni < tree.nodes.size(); ++ni) {
            const TreeNode& node = tree.nodes[ni];
            if (node.level != lvl) continue;
            for (size_t j = 0; j < node.members.size(); ++j) {
                uint32_t self = node.members[j];
                if (corrupt[self] && cfg.adversary == BaAdversaryKind::Silent) continue;
                std::shared_ptr<const Bytes> payload;
                if (corrupt[self] && cfg.adversary == BaAdversaryKind::TreeStaler) {
                    payload = share_bytes(detail::encode_element_batch(
                        {prg(derive(staler_seed, "share", uint64_t(ni * 131 + j)), 64)}));
                } else {
                    auto [it, fresh] = share_cache[ni].try_emplace(pool_key(pools[ni][j]));
                    if (fresh) {
                        std::vector<Bytes> elems;
                        std::unordered_set<std::string> seen;
                        for (const PoolRef& r : pools[ni][j])
                            if (seen.insert(r->enc).second)
                                elems.emplace_back(r->enc.begin(), r->enc.end());
                        it->second = share_bytes(detail::encode_element_batch(elems));
                    }
                    payload = it->second;
                }
                for (uint32_t to : node.members)
                    if (to != self) net.send(self, to, wire::kShare, uint32_t(ni), payload);
            }
        }
        net.deliver([](uint32_t, const Envelope& e) { return e.kind == wire::kShare; });
        // union, aggregate, oracle
        for (size_t ni = 0; ni < tree.nodes.size(); ++ni) {
            const TreeNode& node = tree.nodes[ni];
            if (node.level != lvl) continue;
            // decode + node-range filter once per distinct share batch
            std::unordered_map<const void*, std::shared_ptr<const std::vector<PoolItem>>>
                batch_cache;
            auto decode_batch = [&](const Envelope& e) {
                auto [it, fresh] = batch_cache.try_emplace(e.payload.get());
                if (fresh) {
                    auto items = std::make_shared<std::vector<PoolItem>>();
                    std::vector<Bytes> elems;
                    if (detail::decode_element_batch(*e.payload, elems, max_elem)) {
                        for (auto& enc : elems) {
                            SrdsSignature s;
                            try {
                                s = SrdsSignature::decode(enc);
                            } catch (const MalformedInput&) {
                                continue;
                            }
                            if (lvl == 1) {
                                if (!s.is_base() || s.id_min < node.id_min ||
                                    s.id_max > node.id_max)
                                    continue;
                            } else if (s.id_min < node.id_min || s.id_max > node.id_max ||
                                       s.id_min == 0) {
                                continue;
                            }
                            items->push_back(
                                PoolItem{std::move(s), std::string(enc.begin(), enc.end())});
                        }
                    }
                    it->second = std::move(items);
                }
                return it->second;
            };
            std::unordered_map<std::string, std::shared_ptr<const AggrSubmission>> view_cache;
            std::vector<std::shared_ptr<const AggrSubmission>> subs(node.members.size());
            for (size_t j = 0; j < node.members.size(); ++j) {
                uint32_t self = node.members[j];
                if (corrupt[self] && cfg.adversary == BaAdversaryKind::Silent) continue;
                if (corrupt[self] && cfg.adversary == BaAdversaryKind::TreeStaler) {
                    auto garbage = std::make_shared<AggrSubmission>();
                    garbage->m = prg(derive(staler_seed, "sub-m", uint64_t(ni)), 5);
                    garbage->s_sig.push_back(
                        prg(derive(staler_seed, "sub-e", uint64_t(ni * 977 + j)), 48));
                    subs[j] = std::move(garbage);
                    continue;
                }
                if (!held[ni][j]) continue;
                std::string view = pool_key(pools[ni][j]);
                view.push_back('|');
                for (const Envelope& e : net.inbox(self)) {
                    if (e.channel != uint32_t(ni)) continue;
                    const void* ptr = e.payload.get();
                    view.append(reinterpret_cast<const char*>(&ptr), sizeof(ptr));
                }
                view.push_back('|');
                view.append(held[ni][j]->begin(), held[ni][j]->end());
                auto [it, fresh] = view_cache.try_emplace(std::move(view));
                if (fresh) {
                    std::unordered_set<std::string> seen;
                    std::vector<SrdsSignature> unioned;
                    for (const PoolRef& r : pools[ni][j])
                        if (seen.insert(r->enc).second) unioned.push_back(r->sig);
                    for (const Envelope& e : net.inbox(self)) {
                        if (e.channel != uint32_t(ni)) continue;
                        for (const PoolItem& item : *decode_batch(e))
                            if (seen.insert(item.enc).second) unioned.push_back(item.sig);
                    }
                    if (auto s1 = scheme.aggregate1(*held[ni][j], unioned)) {
                        auto sub = std::make_shared<AggrSubmission>();
                        sub->m = *held[ni][j];
                        sub->s_sig = std::move(*s1);
                        it->second = std::move(sub);
                    }
                }
                subs[j] = it->second;
            }
            sigma[ni] = f_aggr_sig(scheme, subs, std::nullopt);
        }
        // upward round (the root's aggregate leaves via the second cascade)
        if (lvl < p.levels) {
            net.begin_round("up");
            for (size_t ni = 0; ni < tree.nodes.size(); ++ni) {
                const TreeNode& node = tree.nodes[ni];
                if (node.level != lvl || node.parent < 0) continue;
                const TreeNode& parent = tree.nodes[size_t(node.parent)];
                for (size_t j = 0; j < node.members.size(); ++j) {
                    uint32_t self = node.members[j];
                    if (corrupt[self] && cfg.adversary == BaAdversaryKind::Silent) continue;
                    std::shared_ptr<const Bytes> payload;
                    if (corrupt[self] && cfg.adversary == BaAdversaryKind::TreeStaler) {
                        payload = share_bytes(
                            prg(derive(staler_seed, "up", uint64_t(ni * 313 + j)), 96));
                    } else {
                        if (!sigma[ni]) continue;
                        payload = share_bytes(sigma[ni]->encode());
                    }
                    for (uint32_t to : parent.members)
                        net.send(self, to, wire::kUp, uint32_t(ni), payload);
                }
            }
            net.deliver([max_elem](uint32_t, const Envelope& e) {
                return e.kind == wire::kUp && e.payload && e.payload->size() <= max_elem;
            });
        }
    }

    // Step 6: certificate distribution. Triple = message || root aggregate.
    Bytes triple;
    bool have_cert = sigma[size_t(tree.root_id)].has_value();
    if (have_cert) {
        const SrdsSignature& sr = *sigma[size_t(tree.root_id)];
        append_varint(triple, true_msg.size());
        append_bytes(triple, true_msg);
        append_bytes(triple, sr.encode());
    }
    cascade(have_cert ? triple : Bytes{}, "dist-cert");
    std::vector<std::optional<Bytes>> party_triple = consolidate();

    // Step 7: seeded-subset fan-out of the certificate triple.
    net.begin_round("boost");
    auto parse_triple = [&](const Bytes& b, Bytes& msg, SrdsSignature& sig) {
        try {
            ByteReader r(b);
            uint64_t ml = r.read_varint();
            if (ml > 4096) return false;
            msg = r.read_bytes(size_t(ml));
            sig = SrdsSignature::decode(r.read_bytes(r.remaining()));
            return msg.size() == 1 + size_t(kappa) / 8;
        } catch (const MalformedInput&) {
            return false;
        }
    };
    if (cfg.boost_injector) cfg.boost_injector(net);  // rushing: fakes land first
    for (uint32_t q = 0; q < n; ++q) {
        if (!party_triple[q] || party_triple[q]->empty()) continue;
        Bytes payload_bytes = *party_triple[q];
        if (corrupt[q]) {
            if (cfg.adversary == BaAdversaryKind::Silent) continue;
            if (cfg.adversary == BaAdversaryKind::Equivocator) {
                Bytes msg;
                SrdsSignature sig;
                if (parse_triple(payload_bytes, msg, sig)) {
                    msg[0] ^= 1;  // relabelled certificate: same root aggregate
                    Bytes forged;
                    append_varint(forged, msg.size());
                    append_bytes(forged, msg);
                    append_bytes(forged, sig.encode());
                    payload_bytes = forged;
                }
            }
        }
        Bytes msg;
        SrdsSignature sig;
        if (!parse_triple(payload_bytes, msg, sig)) continue;
        Seed subset_seed(msg.begin() + 1, msg.end());
        subset_seed.resize(32, 0);
        auto payload = share_bytes(payload_bytes);
        for (uint32_t to : prf_subset(subset_seed, q, n, p.fan_out))
            net.send(q, to, wire::kBoost, 0, payload);
    }
    net.deliver([](uint32_t, const Envelope& e) {
        return e.kind == wire::kBoost && e.payload && e.payload->size() <= (1u << 20);
    });
    if (cfg.record_boost) {
        for (uint32_t q = 0; q < n; ++q)
            for (const Envelope& e : net.inbox(q))
                out.boost_log.push_back({e.from, e.to, *e.payload});
    }

    // Step 8: accept the first valid certificate addressed through the
    // sender's seeded subset; flag further valid certificates that disagree.
    // Honest certificates are byte-canonical, so receivers mostly re-derive
    // the same few subsets; cache them per (seed, sender).
    std::unordered_map<std::string, std::vector<uint32_t>> subset_cache;
    auto cached_subset = [&](const Seed& s, uint32_t from) -> const std::vector<uint32_t>& {
        std::string key(reinterpret_cast<const char*>(s.data()), s.size());
        key.append(reinterpret_cast<const char*>(&from), sizeof(from));
        auto it = subset_cache.find(key);
        if (it == subset_cache.end())
            it = subset_cache.emplace(std::move(key), prf_subset(s, from, n, p.fan_out)).first;
        return it->second;
    };
    // Payload buffers are shared across all recipients of one send fan-out,
    // so pointer identity implies byte identity: parse and verify each
    // distinct certificate once.
    struct CertCheck {
        bool usable = false;
        bool genuine = false;
        int y = 0;
        Seed subset_seed;
    };
    std::unordered_map<const void*, CertCheck> cert_cache;
    auto check_cert = [&](const Envelope& e) -> const CertCheck& {
        auto [it, fresh] = cert_cache.try_emplace(e.payload.get());
        CertCheck& c = it->second;
        if (fresh) {
            Bytes msg;
            SrdsSignature sig;
            if (parse_triple(*e.payload, msg, sig)) {
                c.subset_seed.assign(msg.begin() + 1, msg.end());
                c.subset_seed.resize(32, 0);
                if (scheme.verify(msg, sig)) {
                    c.usable = true;
                    c.genuine = msg == true_msg;
                    c.y = msg[0] & 1;
                }
            }
        }
        return c;
    };
    out.outputs.assign(n, std::nullopt);
    for (uint32_t q = 0; q < n; ++q) {
        std::optional<int> decided;
        std::unordered_set<int> valid_ys;
        for (const Envelope& e : net.inbox(q)) {
            const CertCheck& cert = check_cert(e);
            if (!cert.usable) continue;
            const auto& subset = cached_subset(cert.subset_seed, e.from);
            if (!std::binary_search(subset.begin(), subset.end(), q)) continue;
            if (!cert.genuine) ++out.forged_cert_accepts;
            valid_ys.insert(cert.y);
            if (!decided) decided = cert.y;
        }
        if (valid_ys.size() > 1) ++out.distinct_y_anomalies;
        out.outputs[q] = decided;
    }

    // Outcome summary over honest parties.
    out.rounds = net.round();
    bool all = true, agree = true;
    std::optional<int> common;
    for (uint32_t q = 0; q < n; ++q) {
        if (corrupt[q]) continue;
        if (!out.outputs[q]) {
            all = false;
            agree = false;
            continue;
        }
        if (!common) common = out.outputs[q];
        else if (*common != *out.outputs[q]) agree = false;
    }
    out.all_output = all;
    out.agreement = all && agree;
    std::optional<int> pre;
    bool preagreed = true;
    for (uint32_t q = 0; q < n; ++q) {
        if (corrupt[q]) continue;
        if (!pre) pre = cfg.inputs[q];
        else if (*pre != cfg.inputs[q]) preagreed = false;
    }
    out.validity_applicable = preagreed;
    if (preagreed) out.validity = out.agreement && common && *common == *pre;

    const CommMetrics& m = net.metrics();
    out.conserved = m.conserved();
    uint64_t budget = p.per_party_bit_budget(kappa);
    for (uint32_t q = 0; q < n; ++q) {
        if (corrupt[q]) continue;
        out.max_honest_bits_sent = std::max(out.max_honest_bits_sent, m.party[q].bytes_sent * 8);
        out.max_honest_peers = std::max(out.max_honest_peers, m.party[q].peers_out.size());
    }
    out.comm_bound_ok = out.max_honest_bits_sent <= budget;
    // Distinct-peer locality: committee co-members, cascade fan-in/out and
    // the seeded boost subset; the n-1 clamp covers small presets where the
    // committee bound exceeds the party count.
    uint64_t locality_budget =
        std::min<uint64_t>(n - 1, uint64_t(p.z) * p.k_leaf * (1 + p.b) +
                                      6ull * p.k_node * (p.b + 1) + p.fan_out);
    out.locality_ok = out.max_honest_peers <= locality_budget;
    return out;
}

inline int ba_expected_rounds(const TreeProfile& p) { return 4 * p.levels - 1; }

}  // namespace srds
