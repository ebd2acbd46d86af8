#pragma once

// JSON renderings of reports and pipeline state (nlohmann::json, vendored).

#include <json.hpp>

#include <string>
#include <vector>

#include "regweight/certifier.hpp"
#include "regweight/oracle.hpp"
#include "regweight/pipeline.hpp"
#include "regweight/solver_t2.hpp"

namespace regweight {

inline constexpr const char* kStateSchema = "regweight.pipeline-state/1";
inline constexpr const char* kCertifySchema = "regweight.certify/1";
inline constexpr const char* kOracleSchema = "regweight.oracle/1";
inline constexpr const char* kRunSchema = "regweight.run/1";

namespace detail {

inline nlohmann::json edge_list(const Graph& g, const std::vector<EdgeId>& ids) {
    auto out = nlohmann::json::array();
    for (EdgeId id : ids) out.push_back({g.edge(id).u, g.edge(id).v});
    return out;
}

}  // namespace detail

inline nlohmann::json to_json(const BoundCheck& c) {
    return {{"name", c.name},     {"relation", c.relation}, {"lhs", c.lhs},     {"rhs", c.rhs},
            {"margin", c.margin}, {"margin_value", c.margin_value},
            {"arithmetic", c.exact ? "exact" : "interval"},  {"verdict", c.holds ? "holds" : "fails"},
            {"note", c.note}};
}

inline nlohmann::json to_json(const CertifierReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"schema", kCertifySchema},
            {"d", r.d},
            {"in_guaranteed_range", r.in_guaranteed_range},
            {"all_hold", r.all_hold()},
            {"checks", checks}};
}

inline nlohmann::json to_json(const SearchResult& r) {
    nlohmann::json j = {{"schema", kOracleSchema},
                        {"status", to_string(r.status)},
                        {"kmax", r.kmax},
                        {"nodes_explored", r.nodes},
                        {"proven_infeasible_below", r.proven_infeasible_below}};
    j["min_k"] = r.min_k ? nlohmann::json(*r.min_k) : nlohmann::json(nullptr);
    if (r.witness) j["witness"] = r.witness->values();
    return j;
}

inline nlohmann::json to_json(const T2Trace& trace) {
    auto out = nlohmann::json::array();
    for (const auto& d : trace.decisions) {
        out.push_back({{"vertex", d.vertex},
                       {"component", d.component},
                       {"position", d.position},
                       {"backward_edges", d.backward_edges},
                       {"forbidden", d.forbidden},
                       {"sum_before", d.sum_before},
                       {"shift", d.shift},
                       {"moved_edges", d.moved_edges},
                       {"sum_after", d.sum_after}});
    }
    return out;
}

/// State dump: every edge class as [u, v] pairs, labels per vertex, per-stage verdicts.
inline nlohmann::json to_json(const Graph& g, const Theorem3Result& r) {
    const auto& st = r.state;
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : st.stages) {
        stages.push_back({{"stage", s.stage}, {"accepted", s.accepted}, {"attempts", s.attempts}, {"detail", s.detail}});
    }
    nlohmann::json j = {{"schema", kStateSchema},
                        {"n", g.vertex_count()},
                        {"m", g.edge_count()},
                        {"d", st.degree},
                        {"success", r.success},
                        {"failed_stage", r.failed_stage},
                        {"message", r.message},
                        {"stages", stages},
                        {"v0", st.v0.members()},
                        {"c1", st.c1},
                        {"c0", st.c0},
                        {"gprime1", detail::edge_list(g, st.gprime1)},
                        {"eprime", detail::edge_list(g, st.eprime)},
                        {"edoubleprime", detail::edge_list(g, st.edoubleprime)},
                        {"e1", detail::edge_list(g, st.e1)},
                        {"estar", detail::edge_list(g, st.estar)},
                        {"e0", detail::edge_list(g, st.e0)},
                        {"class_colour", st.class_colour},
                        {"delta2", st.delta2},
                        {"colours_used", st.colours_used},
                        {"targets", st.targets}};
    nlohmann::json personal = nlohmann::json::array();
    for (const auto& set : st.personal) personal.push_back(detail::edge_list(g, set));
    j["personal"] = personal;
    nlohmann::json slots = nlohmann::json::array();
    for (const auto& s : st.slots) slots.push_back(s ? nlohmann::json(*s) : nlohmann::json(nullptr));
    j["slots"] = slots;
    auto weights = [](const std::optional<EdgeWeighting>& w) {
        return w ? nlohmann::json(w->values()) : nlohmann::json(nullptr);
    };
    j["omega0"] = weights(st.omega0);
    j["omega1"] = weights(st.omega1);
    j["omega2"] = weights(st.omega2);
    j["conflicts"] = {{"total", r.conflicts.total()},
                      {"v1_v1", r.conflicts.v1_v1},
                      {"v0_same_label", r.conflicts.v0_same_label},
                      {"v0_cross_label", r.conflicts.v0_cross_label},
                      {"v0_v1", r.conflicts.v0_v1}};
    return j;
}

}  // namespace regweight
