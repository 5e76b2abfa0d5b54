#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "srds/attack.hpp"
#include "srds/ba_protocol.hpp"
#include "srds/bytes.hpp"
#include "srds/comm_tree.hpp"
#include "srds/errors.hpp"
#include "srds/experiments.hpp"
#include "srds/sim_net.hpp"
#include "srds/subset_phi.hpp"

namespace srds {

using json = nlohmann::json;

// --------------------------------------------------------------- schema

// Strict config validation: every present key must be known, every required
// key must be present. Reports stay replayable because configs embed the
// seed and nothing time-dependent ever enters a report.
inline void check_schema(const json& cfg, const std::string& verb,
                         const std::vector<std::string>& allowed,
                         const std::vector<std::string>& required) {
    if (!cfg.is_object()) throw ConfigError(verb + ": config must be a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError(verb + ": unknown config key '" + it.key() + "'");
    }
    for (const auto& key : required) {
        if (!cfg.contains(key))
            throw ConfigError(verb + ": missing required config key '" + key + "'");
    }
}

// ---------------------------------------------------------- serializers

inline void to_json(json& j, const PartyMetrics& m) {
    j = json{{"bytes_sent", m.bytes_sent},         {"bytes_received", m.bytes_received},
             {"msgs_sent", m.msgs_sent},           {"msgs_received", m.msgs_received},
             {"processed", m.msgs_processed},      {"filtered", m.msgs_filtered},
             {"distinct_peers_out", m.peers_out.size()}};
}

inline void to_json(json& j, const CommMetrics& m) {
    j = json{{"total_bytes", m.total_bytes},
             {"total_msgs", m.total_msgs},
             {"max_bits_sent", m.max_bits_sent()},
             {"max_distinct_peers", m.max_peers_out()},
             {"conserved", m.conserved()}};
}

inline void to_json(json& j, const TreeProfile& p) {
    j = json{{"name", p.name},       {"n", p.n},
             {"z", p.z},             {"b", p.b},
             {"k_node", p.k_node},   {"k_leaf", p.k_leaf},
             {"levels", p.levels},   {"fan_out", p.fan_out},
             {"leaves", p.leaf_count()}, {"virtual_ids", p.virtual_ids()},
             {"comm_budget_b", p.comm_budget_b}};
}

inline void to_json(json& j, const BaOutcome& o) {
    int decided = 0;
    for (const auto& v : o.outputs)
        if (v) ++decided;
    j = json{{"tree_valid", o.tree_valid},
             {"y_oracle", o.y_oracle},
             {"oracle_adversarial", o.fba_adversarial},
             {"all_output", o.all_output},
             {"agreement", o.agreement},
             {"validity_applicable", o.validity_applicable},
             {"validity", o.validity},
             {"decided_parties", decided},
             {"forged_cert_accepts", o.forged_cert_accepts},
             {"distinct_y_anomalies", o.distinct_y_anomalies},
             {"rounds", o.rounds},
             {"isolated_count", o.isolated_count},
             {"max_honest_bits_sent", o.max_honest_bits_sent},
             {"max_honest_peers", o.max_honest_peers},
             {"comm_bound_ok", o.comm_bound_ok},
             {"locality_ok", o.locality_ok},
             {"conserved", o.conserved}};
}

inline void to_json(json& j, const RobustOutcome& o) {
    j = json{{"verdict", game_verdict_name(o.verdict)},
             {"tree_valid", o.tree_valid},
             {"bad_nodes", o.bad_nodes},
             {"bad_path_leaves", o.bad_path_leaves},
             {"isolated", o.isolated},
             {"honest_contributors", o.honest_contributors}};
}

inline void to_json(json& j, const ForgeOutcome& o) {
    j = json{{"verdict", game_verdict_name(o.verdict)},
             {"forged_message_differs", o.forged_message_differs},
             {"union_size", o.union_size},
             {"keyed_in_union", o.keyed_in_union}};
}

inline void to_json(json& j, const AttackOutcome& o) {
    j = json{{"target", o.target},
             {"trials", o.trials},
             {"violations", o.violations},
             {"aborts", o.aborts},
             {"injected_trials", o.injected},
             {"violation_rate", o.violation_rate},
             {"mean_neighbor_median", o.mean_neighbor_median}};
}

inline void to_json(json& j, const ValidationResult& v) {
    j = json{{"ok", v.ok}, {"reason", v.reason}};
}

inline void to_json(json& j, const StructureMcResult& r) {
    j = json{{"trials", r.trials},
             {"valid", r.valid},
             {"avg_bad_leaves", r.avg_bad_leaves},
             {"avg_bad_internal", r.avg_bad_internal},
             {"root_bad", r.root_bad}};
}

inline void to_json(json& j, const CommitteeMcResult& r) {
    j = json{{"trials", r.trials},
             {"size_in_window", r.size_in_window},
             {"overlap_below_third", r.overlap_below_third},
             {"avg_size", r.avg_size},
             {"avg_overlap", r.avg_overlap}};
}

inline void to_json(json& j, const SolveResult& r) {
    j = json{{"found", r.found}, {"witness", r.witness}, {"nodes", r.nodes}};
}

inline void to_json(json& j, const PhiInstance& inst) {
    j = json{{"kind", "phi"},
             {"p", inst.p},
             {"ell", inst.ell},
             {"dim", inst.dim()},
             {"n_elements", inst.elements.size()},
             {"elements", inst.elements},
             {"target", inst.target}};
    if (inst.s) j["s"] = *inst.s;
}

inline void from_json(const json& j, PhiInstance& inst) {
    inst.p = j.at("p").get<uint64_t>();
    inst.ell = j.at("ell").get<uint32_t>();
    inst.elements = j.at("elements").get<std::vector<std::vector<uint64_t>>>();
    inst.target = j.at("target").get<std::vector<uint64_t>>();
    if (j.contains("s") && !j.at("s").is_null()) inst.s = j.at("s").get<uint64_t>();
}

inline void to_json(json& j, const ProductInstance& inst) {
    j = json{{"kind", "product"},
             {"modulus", inst.modulus},
             {"elements", inst.elements},
             {"target", inst.target}};
    if (inst.s) j["s"] = *inst.s;
    if (inst.planted) j["planted_witness"] = inst.planted_witness;
}

inline void from_json(const json& j, ProductInstance& inst) {
    inst.modulus = j.at("modulus").get<uint64_t>();
    inst.elements = j.at("elements").get<std::vector<uint64_t>>();
    inst.target = j.at("target").get<uint64_t>();
    if (j.contains("s") && !j.at("s").is_null()) inst.s = j.at("s").get<uint64_t>();
    if (j.contains("planted_witness")) {
        inst.planted = true;
        inst.planted_witness = j.at("planted_witness").get<std::vector<uint32_t>>();
    }
}

}  // namespace srds
