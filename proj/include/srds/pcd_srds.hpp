#pragma once

#include <algorithm>
#include <cstring>
#include <memory>
#include <unordered_set>

#include "srds/merkle.hpp"
#include "srds/srds_core.hpp"

namespace srds {

// Proof backend stub: verify succeeds only for statements previously proved
// through a compliance-checked derivation (witness store keyed by statement
// digest), with an unforgeable tag bound to the backend instance.
class MockBackend {
public:
    explicit MockBackend(const Seed& tau) : tau_(tau) {}

    Bytes prove(const Digest& stmt) {
        witnessed_.insert(stmt);
        return mac(stmt);
    }

    bool verify(const Digest& stmt, const Bytes& pi) const {
        return witnessed_.count(stmt) != 0 && pi == mac(stmt);
    }

private:
    Bytes mac(const Digest& stmt) const {
        Bytes payload(tau_.begin(), tau_.end());
        append_bytes(payload, stmt.data(), stmt.size());
        return digest_bytes(tagged_hash(tag::kMockProof, payload));
    }

    struct DigestHash {
        size_t operator()(const Digest& d) const {
            size_t x;
            std::memcpy(&x, d.data(), sizeof(x));
            return x;
        }
    };

    Seed tau_;
    std::unordered_set<Digest, DigestHash> witnessed_;
};

// Aggregation transcript. Base transcripts carry the signer's key material
// (leaf index k, verification key bytes, one-time signature gamma) plus a
// registry-membership proof once an aggregator attaches it; non-base
// transcripts carry a backend proof pi over the transcript statement.
struct PcdTranscript {
    Bytes m;
    uint64_t c = 0;
    uint64_t id_min = 0;
    uint64_t id_max = 0;
    Digest h_vk{};
    std::optional<uint64_t> k;
    std::optional<Bytes> vk_bytes;
    std::optional<Bytes> gamma;
    std::optional<MerkleProof> proof;
    std::optional<Bytes> pi;

    bool is_base() const { return gamma.has_value(); }

    // Statement digest: the proved claim covers (m, c, min, max, h_vk) only.
    Digest statement() const {
        Bytes core;
        append_varint(core, m.size());
        append_bytes(core, m);
        append_varint(core, c);
        append_varint(core, id_min);
        append_varint(core, id_max);
        append_bytes(core, h_vk.data(), h_vk.size());
        return tagged_hash(tag::kPcdTranscript, core);
    }

    // Size accounting covers the statement fields, not attached proofs.
    size_t core_size() const { return m.size() + 8 + 8 + 8 + h_vk.size(); }

    Bytes encode() const {
        Bytes out;
        uint8_t flags = 0;
        if (is_base()) flags |= 1;
        if (proof) flags |= 2;
        if (pi) flags |= 4;
        out.push_back(flags);
        append_varint(out, m.size());
        append_bytes(out, m);
        append_varint(out, c);
        append_varint(out, id_min);
        append_varint(out, id_max);
        append_bytes(out, h_vk.data(), h_vk.size());
        if (is_base()) {
            append_varint(out, *k);
            append_varint(out, vk_bytes->size());
            append_bytes(out, *vk_bytes);
            append_varint(out, gamma->size());
            append_bytes(out, *gamma);
        }
        if (proof) {
            Bytes p = merkle_encode_proof(*proof);
            append_varint(out, p.size());
            append_bytes(out, p);
        }
        if (pi) {
            append_varint(out, pi->size());
            append_bytes(out, *pi);
        }
        return out;
    }

    static PcdTranscript decode(const Bytes& b) {
        ByteReader r(b);
        PcdTranscript t;
        uint8_t flags = r.read_bytes(1)[0];
        if (flags & ~uint8_t(7)) throw MalformedInput("transcript: unknown flags");
        uint64_t ml = r.read_varint();
        if (ml > (1u << 20)) throw MalformedInput("transcript: message too long");
        t.m = r.read_bytes(size_t(ml));
        t.c = r.read_varint();
        t.id_min = r.read_varint();
        t.id_max = r.read_varint();
        Bytes h = r.read_bytes(32);
        std::copy(h.begin(), h.end(), t.h_vk.begin());
        if (flags & 1) {
            t.k = r.read_varint();
            uint64_t vl = r.read_varint();
            t.vk_bytes = r.read_bytes(size_t(vl));
            uint64_t gl = r.read_varint();
            t.gamma = r.read_bytes(size_t(gl));
        }
        if (flags & 2) {
            uint64_t pl = r.read_varint();
            Bytes pb = r.read_bytes(size_t(pl));
            ByteReader pr(pb);
            t.proof = merkle_decode_proof(pr);
            if (pr.remaining() != 0) throw MalformedInput("transcript: trailing proof bytes");
        }
        if (flags & 4) {
            uint64_t pl = r.read_varint();
            t.pi = r.read_bytes(size_t(pl));
        }
        if (r.remaining() != 0) throw MalformedInput("transcript: trailing bytes");
        return t;
    }
};

inline Bytes pcd_leaf_content(uint64_t id, const OtsKeyPair& kp) {
    Bytes content;
    append_be64(content, id);
    append_bytes(content, ots_encode_vk(kp));
    return content;
}

// Compliance predicate over one aggregation step. Inputs must agree on the
// message and registry root; bases must authenticate their key against that
// root and carry a valid signature; ranges must be strictly increasing and
// exactly covered by the output; counts must add up. Needs no key registry,
// only the public registry seed. Structurally broken transcripts raise
// MalformedInput rather than returning false.
inline bool pcd_compliance_check(const PcdTranscript& out,
                                 const std::vector<PcdTranscript>& ins,
                                 const Seed& registry_seed, int msg_bits, int kappa) {
    if (ins.empty()) return false;
    for (size_t j = 0; j < ins.size(); ++j) {
        const PcdTranscript& t = ins[j];
        if (t.is_base() && (!t.k || !t.vk_bytes || !t.proof))
            throw MalformedInput("compliance: base transcript missing fields");
        if (t.m != out.m) return false;
        if (t.h_vk != out.h_vk) return false;
        if (t.id_min > t.id_max) return false;
        if (j + 1 < ins.size() && !(t.id_max < ins[j + 1].id_min)) return false;
        if (t.is_base()) {
            if (t.c != 1) return false;
            if (*t.k != t.id_min || t.id_min != t.id_max) return false;
            Bytes content;
            append_be64(content, *t.k);
            append_bytes(content, *t.vk_bytes);
            if (t.proof->leaf_index != *t.k) return false;
            if (!merkle_verify(registry_seed, content, out.h_vk, *t.proof)) return false;
            try {
                ByteReader vr(*t.vk_bytes);
                OtsKeyPair vk = ots_decode_vk(vr, msg_bits, kappa);
                if (vr.remaining() != 0) return false;
                ByteReader gr(*t.gamma);
                OtsSignature os = ots_decode_sig(gr);
                if (gr.remaining() != 0) return false;
                if (!ots_verify(vk, message_digest(t.m, msg_bits), os)) return false;
            } catch (const MalformedInput&) {
                return false;
            }
        }
    }
    if (out.id_min != ins.front().id_min) return false;
    if (out.id_max != ins.back().id_max) return false;
    uint64_t total = 0;
    for (const auto& t : ins) total += t.c;
    if (out.c != total) return false;
    return true;
}

struct PcdSrdsConfig {
    uint32_t n = 0;
    int kappa = 32;
    int msg_bits = 32;
    uint64_t alpha_bytes = 0;  // 0 -> default
    Seed setup_seed{};
};

// Recursive-composition scheme over the mock backend: a signature is a
// single transcript whose count field is certified level by level; verify
// accepts when the count reaches n/3 of the registry authenticated by h_vk.
class PcdSrds final : public SrdsScheme {
public:
    explicit PcdSrds(PcdSrdsConfig cfg) : cfg_(cfg) {
        if (cfg_.n == 0) throw ParameterError("pcd: n must be positive");
        params_.n = cfg_.n;
        params_.kappa = cfg_.kappa;
        params_.msg_bits = cfg_.msg_bits;
        params_.alpha_bytes =
            cfg_.alpha_bytes ? cfg_.alpha_bytes : default_alpha_bits(cfg_.n, cfg_.kappa) / 8;
        params_.setup_seed = cfg_.setup_seed;
        reg_seed_ = derive(cfg_.setup_seed, "registry", 0);
        backend_ = std::make_shared<MockBackend>(derive(cfg_.setup_seed, "mock-tau", 0));
    }

    const SrdsParams& params() const override { return params_; }
    const char* name() const override { return "pcd-mock"; }
    std::unique_ptr<SrdsScheme> clone() const override { return std::make_unique<PcdSrds>(*this); }
    MockBackend& backend() const { return *backend_; }
    const Digest& registry_root() const { return root_; }
    const Seed& registry_seed() const { return reg_seed_; }

    SrdsKeyPair keygen(const Seed& rng) const override {
        SrdsKeyPair kp;
        kp.ots = ots_keygen(derive(rng, "ots-key", 0), cfg_.msg_bits, cfg_.kappa);
        return kp;
    }

    void set_keys(std::vector<SrdsKeyPair> keys) override {
        if (keys.size() != cfg_.n) throw ParameterError("pcd: key registry size mismatch");
        keys_ = std::move(keys);
        rebuild_registry();
    }
    const std::vector<SrdsKeyPair>& keys() const override { return keys_; }
    void replace_key(uint32_t id, SrdsKeyPair kp) override {
        if (id == 0 || id > keys_.size()) throw ParameterError("pcd: replace_key id out of range");
        keys_[id - 1] = std::move(kp);
        rebuild_registry();
    }

    std::optional<SrdsSignature> sign(uint32_t id, const Bytes& m,
                                      const SrdsKeyPair& kp) const override {
        if (id == 0 || id > cfg_.n) throw ParameterError("pcd: sign id out of range");
        if (!kp.keyed()) return std::nullopt;
        PcdTranscript t;
        t.m = m;
        t.c = 1;
        t.id_min = t.id_max = id;
        t.h_vk = root_;
        t.k = id;
        t.vk_bytes = ots_encode_vk(kp.ots);
        t.gamma = ots_encode_sig(ots_sign(kp.ots, message_digest(m, cfg_.msg_bits)));
        SrdsSignature sig;
        sig.message = m;
        sig.id_min = sig.id_max = id;
        sig.payload = t.encode();
        return sig;
    }

    std::optional<std::vector<Bytes>> aggregate1(
        const Bytes& m, const std::vector<SrdsSignature>& in) const override {
        std::vector<std::pair<uint64_t, PcdTranscript>> cands;  // (min, transcript)
        std::unordered_set<std::string> seen_exact;
        for (const auto& s : in) {
            if (s.message != m) continue;
            PcdTranscript t;
            try {
                t = PcdTranscript::decode(s.payload);
            } catch (const MalformedInput&) {
                continue;
            }
            if (t.m != m || t.h_vk != root_) continue;
            if (t.id_min == 0 || t.id_min > t.id_max || t.id_max > cfg_.n) continue;
            if (t.is_base()) {
                if (!t.k || *t.k != t.id_min || t.id_min != t.id_max || t.c != 1) continue;
                uint64_t id = *t.k;
                if (*t.vk_bytes != ots_encode_vk(keys_[size_t(id - 1)].ots)) continue;
                try {
                    ByteReader gr(*t.gamma);
                    OtsSignature os = ots_decode_sig(gr);
                    if (gr.remaining() != 0) continue;
                    if (!ots_verify(keys_[size_t(id - 1)].ots,
                                    message_digest(m, cfg_.msg_bits), os))
                        continue;
                } catch (const MalformedInput&) {
                    continue;
                }
                t.proof = merkle_prove_from_levels(levels_, id);
                t.pi.reset();
            } else {
                if (!t.pi || !backend_->verify(t.statement(), *t.pi)) continue;
                t.proof.reset();
            }
            Bytes enc = t.encode();
            std::string key(enc.begin(), enc.end());
            if (!seen_exact.insert(key).second) continue;
            cands.emplace_back(t.id_min, std::move(t));
        }
        // Leftmost disjoint chain: prefer lower min, then wider range.
        std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second.id_max > b.second.id_max;
        });
        std::vector<Bytes> elems;
        Bytes header;
        header.push_back(0x00);
        append_bytes(header, root_.data(), root_.size());
        elems.push_back(std::move(header));
        // Deterministic size cap, mirroring the hash-based scheme: keep the
        // leftmost chain prefix that fits the budget.
        uint64_t last_max = 0;
        uint64_t total = 0;
        for (auto& [mn, t] : cands) {
            if (mn <= last_max) continue;
            if (total + t.core_size() > params_.alpha_bytes) break;
            last_max = t.id_max;
            total += t.core_size();
            Bytes e;
            e.push_back(t.is_base() ? 0x01 : 0x02);
            append_bytes(e, t.encode());
            elems.push_back(std::move(e));
        }
        return elems;
    }

    SrdsSignature aggregate2(const Bytes& m, const std::vector<Bytes>& s_sig) const override {
        if (s_sig.empty() || s_sig.front().size() != 33 || s_sig.front()[0] != 0x00)
            throw MalformedInput("pcd aggregate2: missing registry header");
        Digest h;
        std::copy(s_sig.front().begin() + 1, s_sig.front().end(), h.begin());
        std::vector<PcdTranscript> ins;
        for (size_t i = 1; i < s_sig.size(); ++i) {
            const Bytes& e = s_sig[i];
            if (e.empty() || (e[0] != 0x01 && e[0] != 0x02))
                throw MalformedInput("pcd aggregate2: bad element kind");
            ins.push_back(PcdTranscript::decode(Bytes(e.begin() + 1, e.end())));
        }
        PcdTranscript out;
        out.m = m;
        out.h_vk = h;
        if (ins.empty()) {
            out.c = 0;
            out.id_min = out.id_max = 0;
        } else {
            out.id_min = ins.front().id_min;
            out.id_max = ins.back().id_max;
            for (const auto& t : ins) out.c += t.c;
            if (!pcd_compliance_check(out, ins, reg_seed_, cfg_.msg_bits, cfg_.kappa))
                throw MalformedInput("pcd aggregate2: non-compliant derivation");
            out.pi = backend_->prove(out.statement());
        }
        SrdsSignature sig;
        sig.message = m;
        sig.id_min = out.id_min;
        sig.id_max = out.id_max;
        sig.payload = out.encode();
        return sig;
    }

    bool verify(const Bytes& m, const SrdsSignature& sig) const override {
        if (sig.message != m) return false;
        PcdTranscript t;
        try {
            t = PcdTranscript::decode(sig.payload);
        } catch (const MalformedInput&) {
            return false;
        }
        if (t.m != m || t.h_vk != root_) return false;
        if (t.core_size() > params_.alpha_bytes) return false;
        bool valid = false;
        if (t.is_base()) {
            if (!t.k || *t.k == 0 || *t.k > cfg_.n) return false;
            if (*t.k != t.id_min || t.id_min != t.id_max || t.c != 1) return false;
            if (*t.vk_bytes != ots_encode_vk(keys_[size_t(*t.k - 1)].ots)) return false;
            try {
                ByteReader gr(*t.gamma);
                OtsSignature os = ots_decode_sig(gr);
                valid = gr.remaining() == 0 &&
                        ots_verify(keys_[size_t(*t.k - 1)].ots,
                                   message_digest(m, cfg_.msg_bits), os);
            } catch (const MalformedInput&) {
                valid = false;
            }
        } else {
            valid = t.pi && backend_->verify(t.statement(), *t.pi);
        }
        return valid && 3 * t.c >= cfg_.n;
    }

private:
    void rebuild_registry() {
        std::vector<Bytes> contents;
        contents.reserve(keys_.size());
        for (size_t i = 0; i < keys_.size(); ++i)
            contents.push_back(pcd_leaf_content(uint64_t(i + 1), keys_[i].ots));
        levels_ = merkle_levels(reg_seed_, contents);
        root_ = levels_.back().front();
    }

    PcdSrdsConfig cfg_;
    SrdsParams params_;
    Seed reg_seed_;
    std::vector<SrdsKeyPair> keys_;
    std::vector<std::vector<Digest>> levels_;
    Digest root_{};
    std::shared_ptr<MockBackend> backend_;
};

}  // namespace srds
