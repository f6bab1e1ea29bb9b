#pragma once

// JSON serialization of reports. Field names follow docs/report.schema.json.

#include <chrono>
#include <ctime>
#include <string>

#include <json.hpp>

#include "chenprime/transference.hpp"

namespace chenprime {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using nlohmann::json;

inline json to_json(const ParameterLedger& L) {
    return {{"profile", to_string(L.profile)},
            {"n", L.n},
            {"W", L.W},
            {"w", L.w},
            {"b", {L.b1, L.b2, L.b3}},
            {"n_prime", L.n_prime},
            {"N", L.N},
            {"N_interval", {L.N_lo, L.N_hi}},
            {"R", L.R},
            {"k0", L.k0},
            {"k0_resolved", L.k0_resolved},
            {"k0_lower_bound", L.k0_lower_bound},
            {"B", L.B},
            {"C", {L.C1, L.C2, L.C3, L.C4, L.C5}},
            {"varpi", L.varpi},
            {"kappa", L.kappa},
            {"delta", L.delta},
            {"epsilon", L.epsilon},
            {"log10_delta", L.log10_delta},
            {"log10_epsilon", L.log10_epsilon},
            {"log10_neg_log10_kappa", L.log10_neg_log10_kappa},
            {"kappa_inequality", {{"lhs_log10", L.kappa_lhs_log10}, {"rhs_log10", L.kappa_rhs_log10}, {"holds", L.kappa_inequality_ok}}},
            {"provenance", L.provenance}};
}

inline json to_json(const Check& c) {
    return {{"name", c.name},
            {"value", c.value},
            {"bound", c.bound},
            {"holds", c.holds},
            {"status", c.asserted ? "asserted" : "diagnostic"}};
}

inline json to_json(const std::vector<Check>& checks) {
    json a = json::array();
    for (const auto& c : checks) a.push_back(to_json(c));
    return a;
}

inline json to_json(const TransferenceReport& r) {
    return {{"ledger", to_json(r.ledger)},
            {"stages", r.stages},
            {"raw_triple_sum", r.raw_triple},
            {"ground_truth_representation", r.ground_truth}};
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Envelope shared by every command; "timestamp" is the only nondeterministic key.
inline json make_envelope(const std::string& command, const std::string& profile, json config, json result,
                          const std::vector<Check>& checks) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = "chenprime";
    j["version"] = kVersion;
    j["command"] = command;
    j["profile"] = profile;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    j["assertions"] = to_json(checks);
    j["timestamp"] = utc_timestamp();
    return j;
}

} // namespace chenprime
