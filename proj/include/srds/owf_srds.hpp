#pragma once

#include <algorithm>
#include <cstring>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "srds/srds_core.hpp"

namespace srds {

// Desk-scale sampled-committee size: max(18, ceil(log2 n)^2).
inline uint64_t desk_ell(uint64_t n) {
    uint64_t lg = uint64_t(ceil_log2(n));
    return std::max<uint64_t>(18, lg * lg);
}

struct OwfSrdsConfig {
    uint32_t n = 0;
    int kappa = 32;
    int msg_bits = 32;
    uint64_t ell = 0;          // expected keyed count; 0 -> desk_ell(n)
    uint64_t alpha_bytes = 0;  // 0 -> default_alpha_bits(n, kappa) / 8
    Seed setup_seed{};
    bool force_keyed = false;      // test hook: every key can sign
    bool force_oblivious = false;  // test hook: no key can sign
};

// Hash-based scheme: a signature is a set of (index, one-time-signature)
// tuples; verification counts distinct indices whose registered key accepts
// and requires strictly more than ell/6 of them (half the sampled committee,
// divided by three).
class OwfSrds final : public SrdsScheme {
public:
    explicit OwfSrds(OwfSrdsConfig cfg) : cfg_(cfg) {
        if (cfg_.n == 0) throw ParameterError("owf: n must be positive");
        if (cfg_.ell == 0) cfg_.ell = desk_ell(cfg_.n);
        params_.n = cfg_.n;
        params_.kappa = cfg_.kappa;
        params_.msg_bits = cfg_.msg_bits;
        params_.alpha_bytes =
            cfg_.alpha_bytes ? cfg_.alpha_bytes : default_alpha_bits(cfg_.n, cfg_.kappa) / 8;
        params_.setup_seed = cfg_.setup_seed;
    }

    const SrdsParams& params() const override { return params_; }
    const char* name() const override { return "owf"; }
    std::unique_ptr<SrdsScheme> clone() const override { return std::make_unique<OwfSrds>(*this); }
    uint64_t ell() const { return cfg_.ell; }

    SrdsKeyPair keygen(const Seed& rng) const override {
        SrdsKeyPair kp;
        bool keyed;
        if (cfg_.force_oblivious) {
            keyed = false;
        } else if (cfg_.force_keyed || cfg_.ell >= cfg_.n) {
            keyed = true;
        } else {
            // keyed with probability ell/n
            unsigned __int128 thr = (unsigned __int128)cfg_.ell << 64;
            thr /= cfg_.n;
            PrfStream coin(tag::kPrg, derive(rng, "keygen-coin", 0), 0);
            keyed = coin.next_u64() < (uint64_t)thr;
        }
        Seed ks = derive(rng, "ots-key", 0);
        kp.ots = keyed ? ots_keygen(ks, cfg_.msg_bits, cfg_.kappa)
                       : ots_oblivious_keygen(ks, cfg_.msg_bits, cfg_.kappa);
        return kp;
    }

    void set_keys(std::vector<SrdsKeyPair> keys) override {
        if (keys.size() != cfg_.n) throw ParameterError("owf: key registry size mismatch");
        keys_ = std::move(keys);
        accept_memo_.clear();
        reject_memo_.clear();
    }
    const std::vector<SrdsKeyPair>& keys() const override { return keys_; }
    void replace_key(uint32_t id, SrdsKeyPair kp) override {
        if (id == 0 || id > keys_.size()) throw ParameterError("owf: replace_key id out of range");
        keys_[id - 1] = std::move(kp);
        accept_memo_.clear();
        reject_memo_.clear();
    }

    std::optional<SrdsSignature> sign(uint32_t id, const Bytes& m,
                                      const SrdsKeyPair& kp) const override {
        if (id == 0 || id > cfg_.n) throw ParameterError("owf: sign id out of range");
        if (!kp.keyed()) return std::nullopt;
        Bytes dig = message_digest(m, cfg_.msg_bits);
        OtsSignature os = ots_sign(kp.ots, dig);
        SrdsSignature sig;
        sig.message = m;
        sig.id_min = sig.id_max = id;
        sig.payload = encode_tuple(id, ots_encode_sig(os));
        return sig;
    }

    std::optional<std::vector<Bytes>> aggregate1(
        const Bytes& m, const std::vector<SrdsSignature>& in) const override {
        Bytes dig = message_digest(m, cfg_.msg_bits);
        // index -> canonical (lexicographically least) valid tuple body
        std::map<uint64_t, Bytes> chosen;
        for (const auto& s : in) {
            if (s.message != m) continue;
            std::vector<std::pair<uint64_t, Bytes>> tuples;
            if (!parse_tuples(s.payload, tuples)) continue;
            for (auto& [idx, sig_bytes] : tuples) {
                if (idx == 0 || idx > cfg_.n) continue;
                if (!verify_tuple(idx, dig, sig_bytes)) continue;
                auto it = chosen.find(idx);
                if (it == chosen.end() || sig_bytes < it->second)
                    chosen.insert_or_assign(idx, sig_bytes);
            }
        }
        // Deterministic size cap: take verified tuples in index order until
        // the budget is full. Every honest aggregator sees the same union,
        // so all settle on the same prefix; a flood of adversarially keyed
        // slots costs capacity but can no longer prevent certification.
        std::vector<Bytes> elems;
        uint64_t total = 0;
        for (auto& [idx, sig_bytes] : chosen) {
            Bytes e = encode_tuple(idx, sig_bytes);
            if (total + e.size() > params_.alpha_bytes) break;
            total += e.size();
            elems.push_back(std::move(e));
        }
        return elems;
    }

    SrdsSignature aggregate2(const Bytes& m, const std::vector<Bytes>& s_sig) const override {
        SrdsSignature out;
        out.message = m;
        uint64_t prev = 0;
        for (const auto& e : s_sig) {
            ByteReader r(e);
            uint64_t idx = r.read_varint();
            uint64_t len = r.read_varint();
            if (len != r.remaining()) throw MalformedInput("owf aggregate2: bad tuple length");
            if (idx <= prev) throw MalformedInput("owf aggregate2: indices not strictly increasing");
            prev = idx;
            if (out.id_min == 0) out.id_min = idx;
            out.id_max = idx;
            append_bytes(out.payload, e);
        }
        return out;
    }

    bool verify(const Bytes& m, const SrdsSignature& sig) const override {
        if (sig.message != m) return false;
        if (sig.payload.size() > params_.alpha_bytes) return false;
        std::vector<std::pair<uint64_t, Bytes>> tuples;
        if (!parse_tuples(sig.payload, tuples)) return false;
        Bytes dig = message_digest(m, cfg_.msg_bits);
        std::vector<char> seen(cfg_.n + 1, 0);
        uint64_t count = 0;
        for (auto& [idx, sig_bytes] : tuples) {
            if (idx == 0 || idx > cfg_.n || seen[idx]) continue;
            if (!verify_tuple(idx, dig, sig_bytes)) continue;
            seen[idx] = 1;
            ++count;
        }
        return 6 * count > cfg_.ell;
    }

    static Bytes encode_tuple(uint64_t idx, const Bytes& sig_bytes) {
        Bytes out;
        append_varint(out, idx);
        append_varint(out, sig_bytes.size());
        append_bytes(out, sig_bytes);
        return out;
    }

    static bool parse_tuples(const Bytes& payload,
                             std::vector<std::pair<uint64_t, Bytes>>& out) {
        try {
            ByteReader r(payload);
            while (r.remaining() > 0) {
                uint64_t idx = r.read_varint();
                uint64_t len = r.read_varint();
                out.emplace_back(idx, r.read_bytes(size_t(len)));
            }
        } catch (const MalformedInput&) {
            return false;
        }
        return true;
    }

private:
    // The message digest is at most 8 bytes, so (idx, digest) packs into an
    // exact map key. A one-time signature has a unique valid encoding per
    // (key, message), so caching that encoding lets repeat verifications of
    // the same certificate settle on a byte comparison.
    static std::pair<uint64_t, uint64_t> tuple_key(uint64_t idx, const Bytes& dig) {
        uint64_t fold = 0;
        for (size_t i = 0; i < dig.size() && i < 8; ++i) fold = fold << 8 | dig[i];
        return {idx, fold};
    }

    bool verify_tuple(uint64_t idx, const Bytes& msg_digest_bytes, const Bytes& sig_bytes) const {
        auto key = tuple_key(idx, msg_digest_bytes);
        auto hit = accept_memo_.find(key);
        if (hit != accept_memo_.end() && hit->second == sig_bytes) return true;
        std::string reject_key;
        reject_key.reserve(16 + sig_bytes.size());
        reject_key.append(reinterpret_cast<const char*>(&key.first), 8);
        reject_key.append(reinterpret_cast<const char*>(&key.second), 8);
        reject_key.append(reinterpret_cast<const char*>(sig_bytes.data()), sig_bytes.size());
        if (reject_memo_.count(reject_key)) return false;
        bool ok = false;
        try {
            ByteReader r(sig_bytes);
            OtsSignature os = ots_decode_sig(r);
            ok = r.remaining() == 0 &&
                 ots_verify(keys_.at(size_t(idx - 1)).ots, msg_digest_bytes, os);
        } catch (const MalformedInput&) {
            ok = false;
        }
        if (ok) accept_memo_[key] = sig_bytes;
        else reject_memo_.insert(std::move(reject_key));
        return ok;
    }

    struct KeyHash {
        size_t operator()(const std::pair<uint64_t, uint64_t>& k) const {
            return std::hash<uint64_t>{}(k.first * 0x9E3779B97F4A7C15ull ^ k.second);
        }
    };

    OwfSrdsConfig cfg_;
    SrdsParams params_;
    std::vector<SrdsKeyPair> keys_;
    mutable std::unordered_map<std::pair<uint64_t, uint64_t>, Bytes, KeyHash> accept_memo_;
    mutable std::unordered_set<std::string> reject_memo_;
};

}  // namespace srds
