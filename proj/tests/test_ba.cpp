#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "srds/ba_protocol.hpp"

using namespace srds;
using testutil::bytes_of;

TEST_CASE("committee agreement oracle, exhaustively at small sizes") {
    // Inputs range over {absent, 0, 1}^k; the oracle must output b whenever
    // at least k - t submitted inputs equal b, preferring 0 on overlap, and
    // flag the adversarial case otherwise.
    for (size_t k = 1; k <= 9; ++k) {
        std::vector<std::optional<int>> in(k);
        size_t combos = 1;
        for (size_t i = 0; i < k; ++i) combos *= 3;
        for (size_t code = 0; code < combos; ++code) {
            size_t c = code, zeros = 0, ones = 0;
            for (size_t i = 0; i < k; ++i, c /= 3) {
                switch (c % 3) {
                    case 0: in[i].reset(); break;
                    case 1: in[i] = 0; ++zeros; break;
                    default: in[i] = 1; ++ones;
                }
            }
            for (uint32_t t : {0u, 1u, 2u, uint32_t((k - 1) / 3)}) {
                FbaResult r = f_ba(in, t, 1);
                if (zeros + t >= k) {
                    CHECK(r.y == 0);
                    CHECK_FALSE(r.adversarial);
                } else if (ones + t >= k) {
                    CHECK(r.y == 1);
                    CHECK_FALSE(r.adversarial);
                } else {
                    CHECK(r.y == 1);  // adversary's choice
                    CHECK(r.adversarial);
                }
            }
        }
    }
}

TEST_CASE("aggregation oracle needs a two-thirds identical view") {
    OwfSrdsConfig c;  // every key signs, so the threshold is deterministic
    c.n = 16;
    c.force_keyed = true;
    c.setup_seed = seed_from_u64(3);
    auto scheme = std::make_unique<OwfSrds>(c);
    std::vector<SrdsKeyPair> keys;
    for (uint64_t id = 1; id <= 16; ++id)
        keys.push_back(scheme->keygen(derive(c.setup_seed, "vkey", id)));
    scheme->set_keys(std::move(keys));
    Bytes m = bytes_of("m");
    std::vector<SrdsSignature> sigs;
    for (uint32_t id = 1; id <= 4; ++id)
        sigs.push_back(*scheme->sign(id, m, scheme->keys()[id - 1]));
    auto elems = scheme->aggregate1(m, sigs);
    REQUIRE(elems.has_value());

    auto view = std::make_shared<const AggrSubmission>(AggrSubmission{m, *elems});
    auto same_bytes = std::make_shared<const AggrSubmission>(AggrSubmission{m, *elems});
    auto other = std::make_shared<const AggrSubmission>(
        AggrSubmission{bytes_of("other"), {bytes_of("e")}});

    SECTION("unanimous pointers") {
        auto out = f_aggr_sig(*scheme, {view, view, view}, std::nullopt);
        REQUIRE(out.has_value());
        CHECK(scheme->verify(m, *out));
    }
    SECTION("exactly two thirds") {
        auto out = f_aggr_sig(*scheme, {view, view, other}, std::nullopt);
        REQUIRE(out.has_value());
        CHECK(out->message == m);
    }
    SECTION("value equality merges distinct pointers") {
        auto out = f_aggr_sig(*scheme, {view, same_bytes, other}, std::nullopt);
        REQUIRE(out.has_value());
        CHECK(out->message == m);
    }
    SECTION("below two thirds falls to the adversary") {
        CHECK_FALSE(f_aggr_sig(*scheme, {view, other, other, nullptr, nullptr}, std::nullopt)
                        .has_value());
        SrdsSignature forged;
        forged.message = bytes_of("adv");
        auto out = f_aggr_sig(*scheme, {view, other, nullptr}, forged);
        REQUIRE(out.has_value());
        CHECK(out->message == bytes_of("adv"));
    }
}

TEST_CASE("round schedule matches the tree depth") {
    CHECK(ba_expected_rounds(ba_profile(16)) == 15);
    CHECK(ba_expected_rounds(ba_profile(64)) == 11);
    CHECK(ba_expected_rounds(ba_profile(256)) == 15);
    CHECK(ba_expected_rounds(ba_profile(1024)) == 19);
}

namespace {

BaConfig base_config(uint32_t n, int input_kind, uint64_t seed_v) {
    BaConfig cfg;
    cfg.profile = ba_profile(n);
    cfg.seed = seed_from_u64(seed_v);
    cfg.inputs.assign(n, 0);
    if (input_kind == 1) cfg.inputs.assign(n, 1);
    if (input_kind == 2)
        for (uint32_t i = 0; i < n; ++i) cfg.inputs[i] = int(i & 1);
    return cfg;
}

void check_invariants(const BaOutcome& out, const BaConfig& cfg) {
    CHECK(out.tree_valid);
    CHECK(out.conserved);
    CHECK(out.comm_bound_ok);
    CHECK(out.locality_ok);
    CHECK(out.rounds == ba_expected_rounds(cfg.profile));
    CHECK(out.forged_cert_accepts == 0);
    CHECK(out.distinct_y_anomalies == 0);
}

}  // namespace

TEST_CASE("honest runs reach agreement and validity") {
    for (int kind : {0, 1, 2}) {
        BaConfig cfg = base_config(16, kind, 100 + kind);
        BaOutcome out = run_ba(cfg);
        check_invariants(out, cfg);
        CHECK(out.all_output);
        CHECK(out.agreement);
        if (kind < 2) {
            CHECK(out.validity_applicable);
            CHECK(out.validity);
            CHECK(out.y_oracle == kind);
        }
        CHECK_FALSE(out.fba_adversarial);
    }
}

TEST_CASE("agreement runs replay byte-identically from the seed") {
    BaConfig cfg = base_config(16, 2, 7);
    BaOutcome a = run_ba(cfg);
    BaOutcome b = run_ba(cfg);
    CHECK(a.outputs == b.outputs);
    CHECK(a.y_oracle == b.y_oracle);
    CHECK(a.max_honest_bits_sent == b.max_honest_bits_sent);
    CHECK(a.max_honest_peers == b.max_honest_peers);
}

TEST_CASE("setup reuse leaves outcomes untouched") {
    BaConfig cfg = base_config(16, 1, 9);
    BaOutcome cold = run_ba(cfg);
    BaSetupCache cache;
    BaOutcome warm1 = run_ba(cfg, &cache);
    BaOutcome warm2 = run_ba(cfg, &cache);
    CHECK(cold.outputs == warm1.outputs);
    CHECK(cold.outputs == warm2.outputs);
    CHECK(cold.max_honest_bits_sent == warm1.max_honest_bits_sent);
    CHECK(warm1.max_honest_bits_sent == warm2.max_honest_bits_sent);
}

TEST_CASE("every adversary preset preserves agreement at small scale") {
    struct Case {
        BaAdversaryKind kind;
        std::string scheme;
        bool bare;
    };
    for (const Case& c : {Case{BaAdversaryKind::Silent, "owf", false},
                          Case{BaAdversaryKind::Equivocator, "owf", false},
                          Case{BaAdversaryKind::TreeStaler, "owf", false},
                          Case{BaAdversaryKind::KeyReplacer, "owf", true},
                          Case{BaAdversaryKind::Silent, "pcd-mock", false},
                          Case{BaAdversaryKind::KeyReplacer, "pcd-mock", true}}) {
        for (uint64_t sv : {11, 12, 13}) {
            BaConfig cfg = base_config(16, 1, sv);
            cfg.adversary = c.kind;
            cfg.scheme_kind = c.scheme;
            cfg.bare_pki = c.bare;
            cfg.t = 4;  // floor(0.3 * 16)
            BaOutcome out = run_ba(cfg);
            INFO(ba_adversary_name(c.kind) << " " << c.scheme << " seed " << sv);
            check_invariants(out, cfg);
            CHECK(out.agreement);
            CHECK(out.validity);  // honest inputs unanimous
        }
    }
}

TEST_CASE("adversary names round trip") {
    for (BaAdversaryKind k :
         {BaAdversaryKind::Honest, BaAdversaryKind::Silent, BaAdversaryKind::Equivocator,
          BaAdversaryKind::TreeStaler, BaAdversaryKind::KeyReplacer})
        CHECK(ba_adversary_from_name(ba_adversary_name(k)) == k);
    CHECK_THROWS_AS(ba_adversary_from_name("nope"), ConfigError);
}

TEST_CASE("corrupt sampling is a deterministic t-subset") {
    auto c = sample_corrupt(64, 19, seed_from_u64(5));
    REQUIRE(c.size() == 64);
    int cnt = 0;
    for (char x : c) cnt += x;
    CHECK(cnt == 19);
    CHECK(c == sample_corrupt(64, 19, seed_from_u64(5)));
    CHECK(c != sample_corrupt(64, 19, seed_from_u64(6)));
}

TEST_CASE("certificate transport value has the committee width") {
    Bytes ct = f_ct(seed_from_u64(2), 32);
    CHECK(ct.size() == 4);
    CHECK(ct == f_ct(seed_from_u64(2), 32));
}
