#pragma once

// JSON and CSV forms of the library's values.

#include "zkseq/mc_lab.hpp"
#include "zkseq/oracle.hpp"
#include "zkseq/pipeline.hpp"
#include "zkseq/rectification.hpp"
#include "zkseq/structure.hpp"
#include "zkseq/verify.hpp"
#include "zkseq/zk.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace zkseq {

using json = nlohmann::ordered_json;

inline json to_json_values(std::span<const Residue> xs)
{
    json out = json::array();
    for (Residue x : xs)
        out.push_back(x.value);
    return out;
}

inline std::vector<u64> values_from_json(const json& j, const char* field)
{
    if (!j.is_array())
        throw error(errc::invalid_argument, std::string("\"") + field + "\" must be an array of integers");
    std::vector<u64> out;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw error(errc::invalid_argument, std::string("\"") + field + "\" must hold non-negative integers");
        out.push_back(v.get<u64>());
    }
    return out;
}

inline u64 modulus_from_json(const json& j)
{
    if (!j.contains("k") || !j["k"].is_number_integer() || j["k"].get<long long>() < 2)
        throw error(errc::invalid_modulus, "\"k\" must be an integer >= 2");
    return j["k"].get<u64>();
}

inline json to_json(const GroundSet& a)
{
    return json{{"k", a.modulus().k()}, {"elements", to_json_values(a.elements())}};
}

inline GroundSet ground_set_from_json(const json& j)
{
    const Modulus m(modulus_from_json(j));
    if (!j.contains("elements"))
        throw error(errc::invalid_argument, "missing \"elements\"");
    const auto vals = values_from_json(j["elements"], "elements");
    return GroundSet::from_values(m, vals);
}

inline json to_json(const Ordering& o)
{
    return json{{"k", o.modulus.k()}, {"ordering", to_json_values(o.items)}};
}

/// Accepts any object with "k" and "ordering", including FinalOrdering JSON.
inline Ordering ordering_from_json(const json& j)
{
    const Modulus m(modulus_from_json(j));
    if (!j.contains("ordering"))
        throw error(errc::invalid_argument, "missing \"ordering\"");
    std::vector<Residue> items;
    for (u64 v : values_from_json(j["ordering"], "ordering"))
        items.push_back(m.residue(v));
    return Ordering{m, std::move(items)};
}

inline json to_json(const RectificationResult& r)
{
    json out{{"lambda", r.lambda.value}, {"max_abs", r.max_abs}, {"method", std::string(to_string(r.method))}};
    if (r.method == RectificationMethod::pigeonhole) {
        out["boxes"] = r.boxes;
        out["core"] = to_json_values(r.core);
    }
    return out;
}

inline json to_json(const Decomposition& d)
{
    json blocks = json::array();
    for (const auto& b : d.blocks)
        blocks.push_back(to_json_values(b));
    return json{{"k", d.modulus.k()},
                {"lambda", d.lambda.value},
                {"P", to_json_values(d.P)},
                {"N", to_json_values(d.N)},
                {"blocks", std::move(blocks)},
                {"delta", d.delta.value},
                {"R", d.R},
                {"rectification", d.rectification}};
}

inline json to_json(const DecompositionReport& r)
{
    json failures = json::array();
    for (const auto& f : r.failures())
        failures.push_back(f);
    return json{{"passed", r.passed()}, {"endpoints_attainable", r.endpoints_attainable}, {"failures", std::move(failures)}};
}

inline std::string provenance_tag(const Segment& s)
{
    switch (s.kind) {
    case Segment::Kind::p: return "P";
    case Segment::Kind::n: return "N";
    case Segment::Kind::block: return "T" + std::to_string(s.block + 1);
    }
    return "?";
}

inline json to_json(const BlockPlan& plan)
{
    json blocks = json::array();
    for (const auto& b : plan.blocks)
        blocks.push_back(json{{"source", b.source + 1}, {"quarter", b.quarter + 1}, {"items", to_json_values(b.items)}});
    return json{{"K", plan.K}, {"s", plan.sources}, {"blocks", std::move(blocks)}, {"taus", to_json_values(plan.taus())}};
}

inline json to_json(const FinalOrdering& f)
{
    json prov = json::array();
    for (const auto& s : f.provenance)
        prov.push_back(provenance_tag(s));
    json out{{"k", f.ordering.modulus.k()},
             {"ordering", to_json_values(f.ordering.items)},
             {"mode", std::string(to_string(f.mode))},
             {"t", f.config.t == 0 ? json(nullptr) : json(f.config.t)},
             {"seed", f.config.seed},
             {"resamples", f.resample_count},
             {"provenance", std::move(prov)},
             {"retries", f.retries},
             {"lambda", f.lambda.value},
             {"R", f.R},
             {"K", f.K},
             {"used_oracle", f.used_oracle},
             {"notes", f.notes}};
    if (f.plan && !f.plan->empty())
        out["plan"] = to_json(*f.plan);
    return out;
}

inline json verdict_json(const Ordering& o, const Goal& goal)
{
    json out{{"goal", goal.name()}, {"pass", satisfies(o, goal)}};
    if (goal.kind == Goal::Kind::tweak)
        out["t"] = goal.t;
    if (auto w = first_violation(o, goal)) {
        json wj{{"kind", std::string(w->kind_name())}, {"i", w->i}, {"value", w->value.value}};
        if (w->kind == Witness::Kind::repeated_partial_sum)
            wj["j"] = w->j;
        out["witness"] = std::move(wj);
    }
    return out;
}

inline json to_json(const ExperimentReport& r)
{
    json est = json::object();
    for (const auto& [name, e] : r.estimates)
        est[name] = json{{"successes", e.successes}, {"trials", e.trials}, {"estimate", e.value()}, {"stderr", e.standard_error()}};
    json cmp = json::array();
    for (const auto& c : r.comparisons) {
        json cj{{"name", c.name}, {"estimate", c.value}, {"bound", c.bound}, {"verdict", std::string(to_string(c.verdict))}};
        if (c.standard_error)
            cj["stderr"] = *c.standard_error;
        cmp.push_back(std::move(cj));
    }
    return json{{"experiment", r.experiment}, {"seed", r.seed},          {"trials", r.trials}, {"rng", r.rng},
                {"estimates", std::move(est)}, {"bounds", r.bounds}, {"comparisons", std::move(cmp)}, {"notes", r.notes}};
}

inline void write_census_csv(std::ostream& out, const CensusReport& report)
{
    out << "k,subset_bitmask,size,goal,achievable,witness\n";
    for (const auto& row : report.rows) {
        out << row.k << ',' << row.subset_bitmask << ',' << row.size << ',' << row.goal.name();
        if (row.goal.kind == Goal::Kind::tweak)
            out << "(" << row.goal.t << ")";
        out << ',' << (row.achievable ? "true" : "false") << ',';
        for (std::size_t i = 0; i < row.witness.size(); ++i)
            out << (i ? " " : "") << row.witness[i].value;
        out << '\n';
    }
}

} // namespace zkseq
