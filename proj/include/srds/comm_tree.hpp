#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "srds/errors.hpp"
#include "srds/primitive.hpp"
#include "srds/srds_core.hpp"

namespace srds {

// Committee-tree profile. Leaf committees hold k_leaf virtual-ID slots each
// (one per member), every party owns exactly z leaf slots, internal
// committees have k_node members drawn without a per-party quota. levels
// counts committee levels including the leaf level; leaf_count = b^(levels-1).
struct TreeProfile {
    std::string name;
    uint32_t n = 0;
    int z = 1;
    int b = 2;
    int k_node = 0;
    int k_leaf = 0;
    int levels = 0;
    uint32_t fan_out = 0;       // boost-phase subset size f(n)
    uint64_t comm_budget_b = 32768;  // per-party bits <= B * (log2 n)^2 * kappa

    uint32_t leaf_count() const {
        uint32_t l = 1;
        for (int i = 1; i < levels; ++i) l *= uint32_t(b);
        return l;
    }
    uint64_t virtual_ids() const { return uint64_t(n) * uint64_t(z); }
    int bad_leaf_budget() const { return int(3 * leaf_count() / uint32_t(ceil_log2(n))); }
    uint64_t per_party_bit_budget(int kappa) const {
        uint64_t lg = uint64_t(ceil_log2(n));
        return comm_budget_b * lg * lg * uint64_t(kappa);
    }
};

inline uint32_t boost_fan_out(uint32_t n) {
    return std::min<uint32_t>(n, std::max<uint32_t>(20, 3 * uint32_t(ceil_log2(n))));
}

// Desk presets for the agreement protocol (z = 4 virtual IDs per party).
inline TreeProfile ba_profile(uint32_t n) {
    TreeProfile p;
    p.n = n;
    p.z = 4;
    p.fan_out = boost_fan_out(n);
    switch (n) {
        case 16:   p.name = "n16";   p.b = 2; p.k_node = 5;  p.k_leaf = 8;  p.levels = 4; break;
        case 64:   p.name = "n64";   p.b = 4; p.k_node = 9;  p.k_leaf = 16; p.levels = 3; break;
        case 256:  p.name = "n256";  p.b = 4; p.k_node = 10; p.k_leaf = 16; p.levels = 4; break;
        case 1024: p.name = "n1024"; p.b = 4; p.k_node = 10; p.k_leaf = 16; p.levels = 5; break;
        default: throw ParameterError("ba_profile: no preset for n=" + std::to_string(n));
    }
    return p;
}

// Single-slot profile for the standalone signature experiments (z = 1).
inline TreeProfile expt_profile(uint32_t n) {
    TreeProfile p;
    p.n = n;
    p.z = 1;
    p.fan_out = boost_fan_out(n);
    switch (n) {
        case 16:   p.name = "n16e";   p.b = 2; p.k_node = 5;  p.k_leaf = 8;  p.levels = 2; break;
        case 64:   p.name = "n64e";   p.b = 4; p.k_node = 9;  p.k_leaf = 16; p.levels = 2; break;
        case 256:  p.name = "n256e";  p.b = 4; p.k_node = 10; p.k_leaf = 16; p.levels = 3; break;
        case 1024: p.name = "n1024e"; p.b = 4; p.k_node = 10; p.k_leaf = 16; p.levels = 4; break;
        default: throw ParameterError("expt_profile: no preset for n=" + std::to_string(n));
    }
    return p;
}

// Large-scale profile used only for structure statistics (no materialized
// committees at this size; see structure_mc below).
inline TreeProfile structure_profile_large() {
    TreeProfile p;
    p.name = "n2pow20";
    p.n = 1u << 20;
    p.z = 4;
    p.b = 4;
    p.k_node = 4096;
    p.k_leaf = 4096;
    p.levels = 6;  // 1024 leaves
    p.fan_out = boost_fan_out(p.n);
    return p;
}

struct TreeNode {
    int level = 1;   // 1 = leaf committees
    int pos = 0;     // 0-based within level
    int parent = -1;
    std::vector<int> children;
    std::vector<uint32_t> members;  // party ids, 0-based; leaf member j holds slot j
    uint64_t id_min = 0, id_max = 0;
    int corrupt_count = 0;
    bool good = true;       // strictly less than one third corrupt
    bool path_good = true;  // no bad node between here and the root
};

enum class Dealing { Balanced, Uniform };

struct CommTree {
    TreeProfile profile;
    std::vector<TreeNode> nodes;  // leaves first (planar order), root last
    int root_id = -1;
    std::vector<char> corrupt;   // per party
    std::vector<char> isolated;  // per party: no majority of good leaf slots
    int bad_path_leaves = 0;

    const TreeNode& leaf(uint32_t k1) const { return nodes[k1 - 1]; }  // 1-based leaf index
    uint32_t leaf_of_vid(uint64_t vid) const {
        return uint32_t((vid - 1) / uint64_t(profile.k_leaf)) + 1;
    }
    uint32_t slot_party(uint64_t vid) const {
        const TreeNode& lf = leaf(leaf_of_vid(vid));
        return lf.members[size_t((vid - 1) % uint64_t(profile.k_leaf))];
    }
};

namespace detail {

// Deal `count` distinct parties (within this committee) from a ticket pool,
// swapping ahead past duplicates. The pool holds each candidate's remaining
// tickets in round-robin order.
inline void draw_distinct(std::vector<uint32_t>& pool, size_t& cursor, size_t count,
                          std::vector<uint32_t>& out,
                          std::unordered_set<uint32_t>& taken) {
    for (size_t c = 0; c < count; ++c) {
        size_t probe = cursor;
        while (probe < pool.size() && taken.count(pool[probe])) ++probe;
        if (probe >= pool.size()) throw EngineError("tree dealing: ticket pool exhausted");
        std::swap(pool[cursor], pool[probe]);
        taken.insert(pool[cursor]);
        out.push_back(pool[cursor]);
        ++cursor;
    }
}

inline std::vector<uint32_t> ticket_pool(const std::vector<uint32_t>& parties, int rounds,
                                         std::mt19937_64& rng) {
    std::vector<uint32_t> pool;
    pool.reserve(parties.size() * size_t(rounds));
    std::vector<uint32_t> order = parties;
    for (int r = 0; r < rounds; ++r) {
        std::shuffle(order.begin(), order.end(), rng);
        pool.insert(pool.end(), order.begin(), order.end());
    }
    return pool;
}

// Even integer split: quota(i) = floor((i+1)*total/parts) - floor(i*total/parts).
inline size_t even_quota(size_t i, size_t total, size_t parts) {
    return size_t((uint64_t(i + 1) * total) / parts - (uint64_t(i) * total) / parts);
}

inline void finalize_structure(CommTree& t) {
    const TreeProfile& p = t.profile;
    for (auto& node : t.nodes) {
        node.corrupt_count = 0;
        for (uint32_t m : node.members) node.corrupt_count += t.corrupt[m] ? 1 : 0;
        int k = node.level == 1 ? p.k_leaf : p.k_node;
        node.good = 3 * node.corrupt_count < k;
    }
    // path flags, root downward
    for (auto it = t.nodes.rbegin(); it != t.nodes.rend(); ++it) {
        TreeNode& node = *it;
        bool above = node.parent < 0 ? true : t.nodes[size_t(node.parent)].path_good;
        node.path_good = above && node.good;
    }
    t.bad_path_leaves = 0;
    uint32_t L = p.leaf_count();
    std::vector<int> bad_slots(p.n, 0);
    for (uint32_t k = 0; k < L; ++k) {
        const TreeNode& lf = t.nodes[k];
        if (!lf.path_good) {
            ++t.bad_path_leaves;
            for (uint32_t m : lf.members) ++bad_slots[m];
        }
    }
    t.isolated.assign(p.n, 0);
    for (uint32_t i = 0; i < p.n; ++i)
        if (2 * bad_slots[i] >= p.z) t.isolated[i] = 1;
}

}  // namespace detail

// Skeleton with planar leaf ranges and parent/child wiring, no members yet.
inline CommTree tree_skeleton(const TreeProfile& p) {
    if (p.leaf_count() * uint64_t(p.k_leaf) != p.virtual_ids())
        throw ParameterError("tree: slot conservation violated (L*k_leaf != n*z)");
    CommTree t;
    t.profile = p;
    uint32_t L = p.leaf_count();
    size_t width = L;
    int first_of_level = 0;
    std::vector<int> level_first;
    for (int lvl = 1; lvl <= p.levels; ++lvl) {
        level_first.push_back(first_of_level);
        for (size_t i = 0; i < width; ++i) {
            TreeNode node;
            node.level = lvl;
            node.pos = int(i);
            t.nodes.push_back(std::move(node));
        }
        first_of_level += int(width);
        width /= size_t(p.b);
    }
    t.root_id = int(t.nodes.size()) - 1;
    // wiring + ranges
    for (uint32_t k = 0; k < L; ++k) {
        t.nodes[k].id_min = uint64_t(k) * p.k_leaf + 1;
        t.nodes[k].id_max = uint64_t(k + 1) * p.k_leaf;
    }
    for (int lvl = 2; lvl <= p.levels; ++lvl) {
        int base = level_first[size_t(lvl - 1)];
        int child_base = level_first[size_t(lvl - 2)];
        size_t w = L;
        for (int i = 1; i < lvl; ++i) w /= size_t(p.b);
        for (size_t i = 0; i < w; ++i) {
            TreeNode& node = t.nodes[size_t(base) + i];
            for (int c = 0; c < p.b; ++c) {
                int child = child_base + int(i) * p.b + c;
                node.children.push_back(child);
                t.nodes[size_t(child)].parent = base + int(i);
            }
            node.id_min = t.nodes[size_t(node.children.front())].id_min;
            node.id_max = t.nodes[size_t(node.children.back())].id_max;
        }
    }
    return t;
}

// Balanced dealing spreads corrupt parties evenly over committees (the
// assignment an honest setup with almost-everywhere agreement guarantees);
// uniform dealing samples memberships independently and is used for
// structure statistics only.
inline CommTree build_tree(const TreeProfile& p, const std::vector<char>& corrupt,
                           const Seed& seed, Dealing dealing) {
    if (corrupt.size() != p.n) throw ParameterError("tree: corruption vector size mismatch");
    CommTree t = tree_skeleton(p);
    t.corrupt = corrupt;
    std::vector<uint32_t> bad, good;
    for (uint32_t i = 0; i < p.n; ++i) (corrupt[i] ? bad : good).push_back(i);
    auto rng = stat_engine(seed, "tree-dealing");
    uint32_t L = p.leaf_count();

    if (dealing == Dealing::Balanced) {
        auto bad_pool = detail::ticket_pool(bad, p.z, rng);
        auto good_pool = detail::ticket_pool(good, p.z, rng);
        size_t bc = 0, gc = 0;
        for (uint32_t k = 0; k < L; ++k) {
            TreeNode& lf = t.nodes[k];
            size_t q = detail::even_quota(k, bad_pool.size(), L);
            std::unordered_set<uint32_t> taken;
            detail::draw_distinct(bad_pool, bc, q, lf.members, taken);
            detail::draw_distinct(good_pool, gc, size_t(p.k_leaf) - q, lf.members, taken);
            std::shuffle(lf.members.begin(), lf.members.end(), rng);
        }
    } else {
        std::vector<uint32_t> pool;
        pool.reserve(p.virtual_ids());
        for (int r = 0; r < p.z; ++r)
            for (uint32_t i = 0; i < p.n; ++i) pool.push_back(i);
        std::shuffle(pool.begin(), pool.end(), rng);
        size_t cursor = 0;
        for (uint32_t k = 0; k < L; ++k) {
            TreeNode& lf = t.nodes[k];
            std::unordered_set<uint32_t> taken;
            detail::draw_distinct(pool, cursor, size_t(p.k_leaf), lf.members, taken);
        }
    }

    // Internal committees: no per-party quota; balanced mode spreads corrupt
    // members with an even split capped below one third per committee.
    size_t internal_count = t.nodes.size() - L;
    size_t bad_total =
        dealing == Dealing::Balanced
            ? std::min(internal_count * size_t((p.k_node - 1) / 3),
                       internal_count * bad.size() * size_t(p.k_node) / p.n)
            : 0;
    size_t idx = 0;
    for (size_t ni = L; ni < t.nodes.size(); ++ni, ++idx) {
        TreeNode& node = t.nodes[ni];
        std::unordered_set<uint32_t> taken;
        if (dealing == Dealing::Balanced) {
            size_t q = detail::even_quota(idx, bad_total, internal_count);
            std::vector<uint32_t> bs = bad, gs = good;
            std::shuffle(bs.begin(), bs.end(), rng);
            std::shuffle(gs.begin(), gs.end(), rng);
            size_t c1 = 0, c2 = 0;
            detail::draw_distinct(bs, c1, q, node.members, taken);
            detail::draw_distinct(gs, c2, size_t(p.k_node) - q, node.members, taken);
        } else {
            std::vector<uint32_t> all(p.n);
            std::iota(all.begin(), all.end(), 0);
            std::shuffle(all.begin(), all.end(), rng);
            size_t c = 0;
            detail::draw_distinct(all, c, size_t(p.k_node), node.members, taken);
        }
        std::shuffle(node.members.begin(), node.members.end(), rng);
    }
    detail::finalize_structure(t);
    return t;
}

// Adversarially planned tree: maximizes leaves on bad paths within the
// validity budget (one bad internal node just above the leaves when the
// budget allows, the rest standalone bad leaves), while keeping the root and
// the remaining committees good. Throws if the corruption level cannot
// realize the plan.
inline CommTree build_adversarial_tree(const TreeProfile& p, const std::vector<char>& corrupt,
                                       const Seed& seed) {
    if (corrupt.size() != p.n) throw ParameterError("tree: corruption vector size mismatch");
    CommTree t = tree_skeleton(p);
    t.corrupt = corrupt;
    std::vector<uint32_t> bad, good;
    for (uint32_t i = 0; i < p.n; ++i) (corrupt[i] ? bad : good).push_back(i);
    auto rng = stat_engine(seed, "tree-adversarial");
    uint32_t L = p.leaf_count();
    int budget = p.bad_leaf_budget();

    int covered = 0;     // leaves under a deliberately bad internal node
    int bad_internal = -1;
    if (p.levels >= 3 && budget >= p.b && int(bad.size()) >= (p.k_node + 2) / 3) {
        bad_internal = int(L);  // first node of level 2
        covered = p.b;
    }
    size_t tickets = bad.size() * size_t(p.z);
    int need_bad = (p.k_leaf + 2) / 3;  // smallest corrupt count making a leaf bad
    std::vector<size_t> quota(L, 0);
    size_t used = 0;
    // fill covered leaves first (free badness, already on a bad path)
    for (int c = 0; c < covered; ++c) {
        size_t q = std::min<size_t>(size_t(p.k_leaf), (tickets - used) > size_t(need_bad) * 4
                                                          ? size_t(p.k_leaf)
                                                          : 0);
        quota[size_t(c)] = q;
        used += q;
    }
    // standalone bad leaves up to the budget
    int standalone = 0;
    for (uint32_t k = uint32_t(covered); k < L && covered + standalone < budget; ++k) {
        if (used + size_t(need_bad) > tickets) break;
        quota[k] = size_t(need_bad);
        used += size_t(need_bad);
        ++standalone;
    }
    // spread the rest over good leaves, capped strictly below one third
    size_t good_cap = size_t((p.k_leaf - 1) / 3);
    uint32_t first_good = uint32_t(covered + standalone);
    while (used < tickets) {
        bool progress = false;
        for (uint32_t k = first_good; k < L && used < tickets; ++k) {
            if (quota[k] < good_cap) {
                ++quota[k];
                ++used;
                progress = true;
            }
        }
        if (!progress) throw ParameterError("adversarial tree: corruption exceeds capacity");
    }

    auto bad_pool = detail::ticket_pool(bad, p.z, rng);
    auto good_pool = detail::ticket_pool(good, p.z, rng);
    size_t bc = 0, gc = 0;
    for (uint32_t k = 0; k < L; ++k) {
        TreeNode& lf = t.nodes[k];
        std::unordered_set<uint32_t> taken;
        detail::draw_distinct(bad_pool, bc, quota[k], lf.members, taken);
        detail::draw_distinct(good_pool, gc, size_t(p.k_leaf) - quota[k], lf.members, taken);
        std::shuffle(lf.members.begin(), lf.members.end(), rng);
    }
    // internal committees: the chosen node gets a bad majority share, all
    // others (including the root) stay good with an even corrupt spread
    for (size_t ni = L; ni < t.nodes.size(); ++ni) {
        TreeNode& node = t.nodes[ni];
        std::unordered_set<uint32_t> taken;
        size_t q;
        if (int(ni) == bad_internal)
            q = std::min(bad.size(), size_t(p.k_node) / 3 + 1);
        else
            q = std::min(bad.size(), size_t((p.k_node - 1) / 3));
        std::vector<uint32_t> bs = bad, gs = good;
        std::shuffle(bs.begin(), bs.end(), rng);
        std::shuffle(gs.begin(), gs.end(), rng);
        size_t c1 = 0, c2 = 0;
        detail::draw_distinct(bs, c1, q, node.members, taken);
        detail::draw_distinct(gs, c2, size_t(p.k_node) - q, node.members, taken);
        std::shuffle(node.members.begin(), node.members.end(), rng);
    }
    detail::finalize_structure(t);
    return t;
}

struct ValidationResult {
    bool ok = true;
    std::string reason;
};

// Structural and goodness validation per the tree definition: exact planar
// leaf ranges, slot conservation, member distinctness, a good root, and the
// bad-path leaf budget.
inline ValidationResult validate_tree(const CommTree& t) {
    const TreeProfile& p = t.profile;
    auto fail = [](std::string r) { return ValidationResult{false, std::move(r)}; };
    uint32_t L = p.leaf_count();
    if (L * uint64_t(p.k_leaf) != p.virtual_ids()) return fail("slot conservation violated");
    if (t.nodes.size() < L || t.root_id != int(t.nodes.size()) - 1) return fail("bad node layout");
    std::vector<int> slot_count(p.n, 0);
    for (uint32_t k = 0; k < L; ++k) {
        const TreeNode& lf = t.nodes[k];
        if (lf.level != 1) return fail("leaf level mismatch");
        if (lf.id_min != uint64_t(k) * p.k_leaf + 1 || lf.id_max != uint64_t(k + 1) * p.k_leaf)
            return fail("leaf ranges not planar increasing");
        if (lf.members.size() != size_t(p.k_leaf)) return fail("leaf committee size mismatch");
        std::unordered_set<uint32_t> distinct(lf.members.begin(), lf.members.end());
        if (distinct.size() != lf.members.size()) return fail("duplicate member in leaf committee");
        for (uint32_t m : lf.members) {
            if (m >= p.n) return fail("member out of range");
            ++slot_count[m];
        }
    }
    for (uint32_t i = 0; i < p.n; ++i)
        if (slot_count[i] != p.z) return fail("party slot count != z");
    for (size_t ni = L; ni < t.nodes.size(); ++ni) {
        const TreeNode& node = t.nodes[ni];
        if (node.members.size() != size_t(p.k_node)) return fail("internal committee size mismatch");
        std::unordered_set<uint32_t> distinct(node.members.begin(), node.members.end());
        if (distinct.size() != node.members.size())
            return fail("duplicate member in internal committee");
        if (node.children.size() != size_t(p.b)) return fail("internal fan-in mismatch");
        uint64_t expect_min = t.nodes[size_t(node.children.front())].id_min;
        uint64_t prev_max = 0;
        for (int c : node.children) {
            const TreeNode& ch = t.nodes[size_t(c)];
            if (ch.parent != int(ni)) return fail("parent pointer mismatch");
            if (prev_max && ch.id_min != prev_max + 1) return fail("child ranges not contiguous");
            prev_max = ch.id_max;
        }
        if (node.id_min != expect_min || node.id_max != prev_max)
            return fail("internal range mismatch");
    }
    const TreeNode& root = t.nodes[size_t(t.root_id)];
    if (!root.good) return fail("root committee not good");
    if (t.bad_path_leaves > p.bad_leaf_budget()) return fail("bad-path leaf budget exceeded");
    return {};
}

struct StructureMcResult {
    int trials = 0;
    int valid = 0;
    double avg_bad_leaves = 0.0;
    double avg_bad_internal = 0.0;
    int root_bad = 0;
};

// Structure-only Monte-Carlo at scales where committees are not
// materialized: per-slot sequential sampling without replacement over the
// global ticket pool reproduces the uniform-dealing corrupt counts; party
// multiplicity inside one committee is ignored, which does not move the
// goodness counts at these committee sizes.
inline StructureMcResult structure_mc(const TreeProfile& p, uint32_t t_corrupt, int trials,
                                      const Seed& seed) {
    StructureMcResult res;
    res.trials = trials;
    uint32_t L = p.leaf_count();
    size_t internal_count = 0;
    {
        size_t w = L;
        while (w > 1) {
            w /= size_t(p.b);
            internal_count += w;
        }
    }
    for (int trial = 0; trial < trials; ++trial) {
        auto rng = stat_engine(derive(seed, "structure-mc", uint64_t(trial)), "trial");
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        uint64_t rem_bad = uint64_t(t_corrupt) * p.z;
        uint64_t rem_total = p.virtual_ids();
        std::vector<char> leaf_bad(L, 0);
        int bad_leaves_raw = 0;
        for (uint32_t k = 0; k < L; ++k) {
            int c = 0;
            for (int s = 0; s < p.k_leaf; ++s, --rem_total) {
                if (unit(rng) * double(rem_total) < double(rem_bad)) {
                    --rem_bad;
                    ++c;
                }
            }
            if (3 * c >= p.k_leaf) {
                leaf_bad[k] = 1;
                ++bad_leaves_raw;
            }
        }
        int bad_internal = 0;
        std::vector<char> level_bad(leaf_bad.begin(), leaf_bad.end());
        bool root_is_bad = false;
        std::vector<char> cur = leaf_bad;
        size_t width = L;
        std::vector<char> path_bad = leaf_bad;  // per leaf: any bad ancestor so far
        std::vector<char> node_bad_level;
        while (width > 1) {
            width /= size_t(p.b);
            node_bad_level.assign(width, 0);
            for (size_t i = 0; i < width; ++i) {
                int c = 0;
                for (int s = 0; s < p.k_node; ++s) {
                    if (unit(rng) * double(p.n) < double(t_corrupt)) ++c;
                }
                if (3 * c >= p.k_node) {
                    node_bad_level[i] = 1;
                    ++bad_internal;
                    if (width == 1) root_is_bad = true;
                }
            }
            // propagate badness to leaf paths
            size_t leaves_per = L / width;
            for (size_t i = 0; i < width; ++i)
                if (node_bad_level[i])
                    for (size_t j = i * leaves_per; j < (i + 1) * leaves_per; ++j)
                        path_bad[j] = 1;
        }
        int bad_path = int(std::count(path_bad.begin(), path_bad.end(), char(1)));
        res.avg_bad_leaves += bad_leaves_raw;
        res.avg_bad_internal += bad_internal;
        if (root_is_bad) ++res.root_bad;
        if (!root_is_bad && bad_path <= p.bad_leaf_budget()) ++res.valid;
    }
    if (trials) {
        res.avg_bad_leaves /= trials;
        res.avg_bad_internal /= trials;
    }
    return res;
}

}  // namespace srds
