#include <algorithm>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "srds/comm_tree.hpp"

using namespace srds;

namespace {

std::vector<char> first_t_corrupt(uint32_t n, uint32_t t) {
    std::vector<char> c(n, 0);
    for (uint32_t i = 0; i < t; ++i) c[i] = 1;
    return c;
}

}  // namespace

TEST_CASE("presets satisfy their own slot arithmetic") {
    TreeProfile p = ba_profile(64);
    CHECK(p.z == 4);
    CHECK(p.levels == 3);
    CHECK(p.b == 4);
    CHECK(p.k_leaf == 16);
    CHECK(p.k_node == 9);
    CHECK(p.leaf_count() == 16);
    CHECK(p.virtual_ids() == 256);
    CHECK(p.leaf_count() * uint64_t(p.k_leaf) == p.virtual_ids());
    CHECK(p.per_party_bit_budget(32) == 32768ULL * 36 * 32);

    for (uint32_t n : {16u, 64u, 256u, 1024u}) {
        TreeProfile b = ba_profile(n);
        CHECK(b.leaf_count() * uint64_t(b.k_leaf) == b.virtual_ids());
        TreeProfile e = expt_profile(n);
        CHECK(e.z == 1);
        CHECK(e.leaf_count() * uint64_t(e.k_leaf) == e.virtual_ids());
    }
    CHECK_THROWS_AS(ba_profile(100), ParameterError);
    CHECK(boost_fan_out(1024) == 30);
    CHECK(boost_fan_out(16) == 16);  // capped at n
}

TEST_CASE("skeleton assigns planar increasing identity ranges") {
    TreeProfile p = ba_profile(16);  // 8 leaves, b=2, 4 levels
    CommTree t = tree_skeleton(p);
    REQUIRE(t.nodes.size() == 15);
    CHECK(t.root_id == 14);
    for (uint32_t k = 0; k < 8; ++k) {
        CHECK(t.nodes[k].id_min == k * 8 + 1);
        CHECK(t.nodes[k].id_max == (k + 1) * 8);
        CHECK(t.nodes[k].level == 1);
    }
    const TreeNode& root = t.nodes[14];
    CHECK(root.id_min == 1);
    CHECK(root.id_max == 64);
    CHECK(root.parent == -1);
    REQUIRE(root.children.size() == 2);
    // Virtual-id helpers agree with planar order.
    CHECK(t.leaf_of_vid(1) == 0);
    CHECK(t.leaf_of_vid(8) == 0);
    CHECK(t.leaf_of_vid(9) == 1);
    CHECK(t.leaf_of_vid(64) == 7);
}

TEST_CASE("both dealings produce structurally valid trees") {
    for (uint32_t n : {16u, 64u}) {
        TreeProfile p = ba_profile(n);
        uint32_t t = n * 3 / 10;
        for (uint64_t sv : {1, 2, 3}) {
            std::vector<char> corrupt = first_t_corrupt(n, t);
            for (Dealing d : {Dealing::Balanced, Dealing::Uniform}) {
                CommTree tree = build_tree(p, corrupt, seed_from_u64(sv), d);
                ValidationResult v = validate_tree(tree);
                INFO("n=" << n << " seed=" << sv << " reason=" << v.reason);
                CHECK(v.ok);
            }
        }
    }
}

TEST_CASE("balanced dealing keeps every internal committee good") {
    TreeProfile p = ba_profile(64);
    uint32_t t = 19;  // floor(0.3 * 64)
    CommTree tree =
        build_tree(p, first_t_corrupt(64, t), seed_from_u64(7), Dealing::Balanced);
    REQUIRE(validate_tree(tree).ok);
    for (size_t ni = p.leaf_count(); ni < tree.nodes.size(); ++ni)
        CHECK(tree.nodes[ni].good);
    CHECK(tree.bad_path_leaves <= p.bad_leaf_budget());
}

TEST_CASE("adversarial dealing exhausts but never exceeds the path budget") {
    TreeProfile p = expt_profile(256);
    uint32_t t = 85;
    CommTree adv = build_adversarial_tree(p, first_t_corrupt(256, t), seed_from_u64(5));
    ValidationResult v = validate_tree(adv);
    INFO(v.reason);
    REQUIRE(v.ok);
    CHECK(adv.bad_path_leaves == p.bad_leaf_budget());  // maximal within budget

    CommTree bal =
        build_tree(p, first_t_corrupt(256, t), seed_from_u64(5), Dealing::Balanced);
    uint32_t adv_isolated = 0, bal_isolated = 0;
    for (char c : adv.isolated) adv_isolated += c;
    for (char c : bal.isolated) bal_isolated += c;
    CHECK(adv_isolated > bal_isolated);
}

TEST_CASE("validation pinpoints structural damage") {
    TreeProfile p = ba_profile(16);
    CommTree good =
        build_tree(p, first_t_corrupt(16, 4), seed_from_u64(3), Dealing::Balanced);
    REQUIRE(validate_tree(good).ok);

    SECTION("duplicate leaf member") {
        CommTree t = good;
        t.nodes[0].members[1] = t.nodes[0].members[0];
        CHECK_FALSE(validate_tree(t).ok);
    }
    SECTION("member out of range") {
        CommTree t = good;
        t.nodes[2].members[0] = 99;
        CHECK_FALSE(validate_tree(t).ok);
    }
    SECTION("non-planar leaf range") {
        CommTree t = good;
        std::swap(t.nodes[0].id_min, t.nodes[1].id_min);
        std::swap(t.nodes[0].id_max, t.nodes[1].id_max);
        CHECK_FALSE(validate_tree(t).ok);
    }
    SECTION("slot miscount") {
        CommTree t = good;
        // Move one of party A's slots to party B: both counts now differ from z.
        uint32_t a = t.nodes[0].members[0];
        for (uint32_t k = 1; k < p.leaf_count(); ++k)
            for (auto& m : t.nodes[k].members)
                if (m == a) {
                    m = t.nodes[0].members[1] == a ? t.nodes[0].members[2]
                                                   : t.nodes[0].members[1];
                    CHECK_FALSE(validate_tree(t).ok);
                    return;
                }
        FAIL("party with z > 1 slots not found in later leaves");
    }
    SECTION("internal committee wrong size") {
        CommTree t = good;
        t.nodes[t.nodes.size() - 2].members.pop_back();
        CHECK_FALSE(validate_tree(t).ok);
    }
    SECTION("corrupt root committee") {
        CommTree t = good;
        TreeNode& root = t.nodes[size_t(t.root_id)];
        for (auto& m : root.members) t.corrupt[m] = 1;
        detail::finalize_structure(t);
        CHECK_FALSE(validate_tree(t).ok);
    }
    SECTION("corruption vector size mismatch") {
        CHECK_THROWS_AS(
            build_tree(p, std::vector<char>(8, 0), seed_from_u64(1), Dealing::Balanced),
            ParameterError);
    }
}

TEST_CASE("goodness propagates down paths") {
    TreeProfile p = expt_profile(16);  // 2 leaves, 1 root, levels=2
    CommTree t =
        build_tree(p, first_t_corrupt(16, 0), seed_from_u64(2), Dealing::Uniform);
    REQUIRE(validate_tree(t).ok);
    for (const TreeNode& n : t.nodes) {
        CHECK(n.good);  // nothing corrupt
        CHECK(n.path_good);
    }
    CHECK(t.bad_path_leaves == 0);
    uint32_t iso = 0;
    for (char c : t.isolated) iso += c;
    CHECK(iso == 0);
}

TEST_CASE("structure statistics run without materialized committees") {
    TreeProfile p = structure_profile_large();
    CHECK(p.n == 1u << 20);
    StructureMcResult r = structure_mc(p, p.n / 10, 50, seed_from_u64(6));
    CHECK(r.trials == 50);
    CHECK(r.valid == 50);  // 10% corruption never breaks k=4096 committees
    CHECK(r.root_bad == 0);

    StructureMcResult heavy = structure_mc(p, p.n / 2, 10, seed_from_u64(6));
    CHECK(heavy.valid < heavy.trials);  // half corrupt cannot stay below a third
}
