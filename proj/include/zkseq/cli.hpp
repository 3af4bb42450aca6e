#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 construction
// failed (sequence), 3 verification failed (verify).

#include "zkseq/io.hpp"
#include "zkseq/zkseq.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace zkseq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConstructionFailed = 2;
inline constexpr int kExitVerifyFailed = 3;

namespace cli_detail {

struct SetArgs {
    u64 modulus = 0;
    std::string set_file;
    std::vector<u64> elements;
};

inline void add_set_options(CLI::App& cmd, SetArgs& a)
{
    cmd.add_option("--modulus,-k", a.modulus, "modulus k >= 2");
    auto* file = cmd.add_option("--set", a.set_file, "GroundSet JSON file {\"k\", \"elements\"}");
    auto* list = cmd.add_option("--elements", a.elements, "comma-separated residues")->delimiter(',');
    file->excludes(list);
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw error(errc::invalid_argument, "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw error(errc::invalid_argument, path + ": " + e.what());
    }
}

inline GroundSet load_set(const SetArgs& a)
{
    if (!a.set_file.empty())
        return ground_set_from_json(read_json_file(a.set_file));
    if (a.modulus == 0)
        throw error(errc::invalid_argument, "--modulus is required with --elements");
    if (a.elements.empty())
        throw error(errc::invalid_argument, "one of --set or --elements is required");
    return GroundSet::from_values(Modulus(a.modulus), a.elements);
}

/// --seed wins, then SEQ_SEED, then 0.
inline u64 resolve_seed(const std::optional<u64>& flag)
{
    if (flag)
        return *flag;
    if (const char* env = std::getenv("SEQ_SEED")) {
        try {
            std::size_t used = 0;
            const u64 v = std::stoull(env, &used);
            if (used == std::string(env).size())
                return v;
        } catch (const std::exception&) {
        }
        throw error(errc::invalid_argument, "SEQ_SEED is not an unsigned integer");
    }
    return 0;
}

/// Writes `text` to `path`, or to `out` when no path is given.
inline void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw error(errc::invalid_argument, "cannot write " + path);
    f << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline Goal parse_goal(const std::string& name, std::size_t t)
{
    if (name == "valid")
        return Goal::valid();
    if (name == "sequencing")
        return Goal::sequencing();
    if (name == "tweak") {
        if (t == 0)
            throw error(errc::invalid_argument, "--goal tweak needs --t");
        return Goal::tweak(t);
    }
    throw error(errc::invalid_argument, "unknown goal " + name);
}

inline std::vector<Residue> residues(const Modulus& m, const std::vector<u64>& xs)
{
    std::vector<Residue> out;
    for (u64 x : xs)
        out.push_back(m.residue(x));
    return out;
}

} // namespace cli_detail

/// `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    using namespace cli_detail;
    CLI::App app{"zkseq: orderings of subsets of Z_k with distinct partial sums"};
    app.require_subcommand(1);
    std::optional<u64> seed_flag;
    std::string out_path;

    // sequence
    auto* seq = app.add_subcommand("sequence", "construct a sequencing or t-weak sequencing");
    SetArgs seq_set;
    std::string mode_name = "auto";
    PipelineConfig cfg;
    bool no_oracle = false;
    add_set_options(*seq, seq_set);
    seq->add_option("--mode", mode_name, "auto|classical|tweak")->check(CLI::IsMember({"auto", "classical", "tweak"}));
    seq->add_option("--t", cfg.t, "t-weak window");
    seq->add_option("--c1", cfg.c1, "block-scale constant for R");
    seq->add_option("--c2", cfg.c2, "prefix-length constant for K");
    seq->add_option("--R", cfg.R, "block scale override");
    seq->add_option("--K", cfg.K, "prefix length override");
    seq->add_option("--max-resamples", cfg.max_resamples, "tweak resample budget, 0 for 1e6 |A|");
    seq->add_option("--max-retries", cfg.max_retries, "classical full-redraw budget");
    seq->add_flag("--no-oracle", no_oracle, "disable the small-set exhaustive fallback");

    // verify
    auto* ver = app.add_subcommand("verify", "check an ordering");
    std::string ordering_file;
    std::size_t verify_t = 0;
    std::string verify_goal;
    ver->add_option("--ordering", ordering_file, "JSON with \"k\" and \"ordering\"")->required();
    ver->add_option("--t", verify_t, "t-weak window (implies --goal tweak)");
    ver->add_option("--goal", verify_goal, "valid|sequencing|tweak");

    // decompose
    auto* dec = app.add_subcommand("decompose", "structure decomposition");
    SetArgs dec_set;
    std::size_t dec_R = 0;
    double dec_c1 = 1.0;
    dec->add_option("--R", dec_R, "block scale (default from p)");
    dec->add_option("--c1", dec_c1, "block-scale constant for R");
    add_set_options(*dec, dec_set);

    // rectify
    auto* rec = app.add_subcommand("rectify", "unit dilation into a short interval");
    SetArgs rec_set;
    std::string rec_method = "pigeonhole";
    add_set_options(*rec, rec_set);
    rec->add_option("--method", rec_method)->check(CLI::IsMember({"pigeonhole", "exhaustive"}));

    // dissociate
    auto* dis = app.add_subcommand("dissociate", "dissociativity, dimension and greedy subset");
    SetArgs dis_set;
    add_set_options(*dis, dis_set);

    // oracle / census
    auto* ora = app.add_subcommand("oracle", "exhaustive search on one set, or a census with --max-size");
    auto* cen = app.add_subcommand("census", "exhaustive census of all subsets of Z_k \\ {0}");
    SetArgs ora_set;
    std::optional<std::size_t> max_size;
    std::string oracle_goal = "sequencing";
    std::size_t oracle_t = 0;
    unsigned threads = 0;
    add_set_options(*ora, ora_set);
    for (auto* c : {ora, cen}) {
        c->add_option("--max-size", max_size);
        c->add_option("--goal", oracle_goal, "valid|sequencing|tweak");
        c->add_option("--t", oracle_t);
        c->add_option("--threads", threads);
    }
    cen->add_option("--modulus,-k", ora_set.modulus)->required();

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo experiments");
    mc->require_subcommand(1);
    u64 trials = 100'000;
    bool mc_json = false;
    auto* mc_anti = mc->add_subcommand("anticoncentration", "quarter-sum hitting probabilities");
    auto* mc_acc = mc->add_subcommand("acceptability", "endpoint acceptability rate on a decomposed set");
    auto* mc_perm = mc->add_subcommand("permissible", "boundary-safe density of a block pair");
    auto* mc_ev = mc->add_subcommand("intervals", "Type I / Type II vanishing rates");
    auto* mc_lll = mc->add_subcommand("lll", "e P D <= 1 budget");
    auto* mc_union = mc->add_subcommand("union", "union bound |A|^2 (P_I + P_II)");
    SetArgs mc_set;
    std::vector<std::size_t> quarters{1};
    std::vector<u64> targets;
    std::vector<u64> left, right;
    std::size_t mc_K = 1, mc_R = 0, mc_t = 0;
    double p_hat = 0.0, p_I = 0.0, p_II = 0.0;
    std::size_t degree = 0, a_size = 0;
    for (auto* c : {mc_anti, mc_acc, mc_perm, mc_ev}) {
        c->add_option("--trials", trials);
        c->add_flag("--json", mc_json, "JSON instead of CSV");
    }
    for (auto* c : {mc_lll, mc_union})
        c->add_flag("--json", mc_json, "JSON instead of CSV");
    add_set_options(*mc_anti, mc_set);
    mc_anti->add_option("--quarters", quarters, "I, subset of {1,2,3,4}")->delimiter(',');
    mc_anti->add_option("--targets", targets, "target residues x")->delimiter(',')->required();
    add_set_options(*mc_acc, mc_set);
    mc_acc->add_option("--R", mc_R)->required();
    mc_acc->add_option("--K", mc_K);
    mc_perm->add_option("--modulus,-k", mc_set.modulus)->required();
    mc_perm->add_option("--left", left)->delimiter(',')->required();
    mc_perm->add_option("--right", right)->delimiter(',')->required();
    mc_perm->add_option("--K", mc_K);
    add_set_options(*mc_ev, mc_set);
    mc_ev->add_option("--R", mc_R)->required();
    mc_ev->add_option("--K", mc_K);
    mc_ev->add_option("--t", mc_t, "max interval length (default: all proper)");
    mc_lll->add_option("--p", p_hat)->required();
    mc_lll->add_option("--degree", degree)->required();
    mc_union->add_option("--size", a_size)->required();
    mc_union->add_option("--R", mc_R);
    mc_union->add_option("--p-type-I", p_I);
    mc_union->add_option("--p-type-II", p_II);

    for (auto* c : {seq, dec, rec, dis, ora, cen, mc_anti, mc_acc, mc_perm, mc_ev, mc_lll, mc_union, ver}) {
        c->add_option("--seed", seed_flag, "RNG seed (fallback: SEQ_SEED)");
        c->add_option("--out", out_path, "output file");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const u64 seed = resolve_seed(seed_flag);

        if (seq->parsed()) {
            const GroundSet a = load_set(seq_set);
            cfg.seed = seed;
            cfg.oracle_fallback = !no_oracle;
            cfg.mode = mode_name == "tweak" ? Mode::tweak : mode_name == "classical" ? Mode::classical : Mode::auto_select;
            if (cfg.mode == Mode::tweak && cfg.t == 0)
                throw error(errc::invalid_argument, "--mode tweak needs --t");
            try {
                const FinalOrdering f = run(a, cfg);
                emit(out_path, dump(to_json(f)), out);
                if (!out_path.empty())
                    out << "ok: " << to_string(f.mode) << " ordering of " << a.size() << " elements written to " << out_path
                        << "\n";
                return kExitOk;
            } catch (const error& e) {
                if (e.code() == errc::construction_failed || e.code() == errc::search_exhausted ||
                    e.code() == errc::rectification_infeasible) {
                    err << "construction failed: " << e.what() << "\n";
                    return kExitConstructionFailed;
                }
                throw;
            }
        }

        if (ver->parsed()) {
            const Ordering o = ordering_from_json(read_json_file(ordering_file));
            const Goal goal = verify_goal.empty() ? (verify_t ? Goal::tweak(verify_t) : Goal::sequencing())
                                                  : parse_goal(verify_goal, verify_t);
            const json v = verdict_json(o, goal);
            emit(out_path, dump(v), out);
            return v["pass"].get<bool>() ? kExitOk : kExitVerifyFailed;
        }

        if (dec->parsed()) {
            const GroundSet a = load_set(dec_set);
            a.require_nonzero();
            const std::size_t R = dec_R ? dec_R : compute_R_tweak(a.modulus().p(), dec_c1);
            const auto r = decompose(a, R, DecomposeConfig{2.0, 64, seed, false});
            json j = to_json(r.decomposition);
            j["report"] = to_json(r.report);
            j["attempts"] = r.attempts;
            emit(out_path, dump(j), out);
            return kExitOk;
        }

        if (rec->parsed()) {
            const GroundSet b = load_set(rec_set);
            const auto r = rec_method == "exhaustive" ? rectify_exhaustive(b) : rectify_pigeonhole(b);
            emit(out_path, dump(to_json(r)), out);
            return kExitOk;
        }

        if (dis->parsed()) {
            const GroundSet b = load_set(dis_set);
            json j{{"dissociated", b.size() <= kDissociationEnumerationLimit ? json(is_dissociated(b)) : json(nullptr)},
                   {"greedy", to_json_values(greedy_max_dissociated(b).elements())}};
            if (b.size() <= kExactDimensionLimit)
                j["dimension"] = dimension(b);
            emit(out_path, dump(j), out);
            return kExitOk;
        }

        if (ora->parsed() || cen->parsed()) {
            const Goal goal = parse_goal(oracle_goal, oracle_t);
            if (cen->parsed() || max_size) {
                if (ora_set.modulus == 0)
                    throw error(errc::invalid_argument, "--modulus is required for a census");
                const auto report = census(ora_set.modulus, max_size.value_or(kOracleSizeLimit), goal, threads);
                std::ostringstream csv;
                write_census_csv(csv, report);
                emit(out_path, csv.str(), out);
                if (!out_path.empty())
                    out << report.rows.size() << " subsets, " << report.failures() << " without a " << goal.name()
                        << " ordering\n";
                return kExitOk;
            }
            const GroundSet a = load_set(ora_set);
            const auto found = brute_force(a, goal);
            json j{{"goal", goal.name()}, {"achievable", found.has_value()}};
            if (found)
                j["ordering"] = to_json_values(found->items);
            emit(out_path, dump(j), out);
            return kExitOk;
        }

        if (mc->parsed()) {
            ExperimentReport r;
            if (mc_anti->parsed()) {
                const GroundSet d = load_set(mc_set);
                r = estimate_anticoncentration(d.modulus(), d.elements(), quarters, residues(d.modulus(), targets), trials,
                                               seed);
            } else if (mc_acc->parsed()) {
                const GroundSet a = load_set(mc_set);
                PipelineConfig pc;
                pc.R = mc_R;
                pc.K = mc_K;
                pc.seed = seed;
                const auto prep = detail::prepare(a, pc, Mode::tweak);
                r = estimate_acceptability(prep.decomposition, prep.pn, prep.K, trials, seed);
            } else if (mc_perm->parsed()) {
                const Modulus m(mc_set.modulus);
                r = estimate_permissible_density(m, residues(m, left), residues(m, right), mc_K, trials, seed);
            } else if (mc_ev->parsed()) {
                const GroundSet a = load_set(mc_set);
                PipelineConfig pc;
                pc.R = mc_R;
                pc.K = mc_K;
                pc.seed = seed;
                r = estimate_interval_events(a, pc, Mode::classical, mc_t ? mc_t : a.size(), trials, seed);
            } else if (mc_lll->parsed()) {
                r = lll_budget_report(p_hat, degree);
            } else {
                r = union_bound_report(a_size, mc_R, p_I, p_II);
            }
            std::ostringstream text;
            if (mc_json)
                text << dump(to_json(r));
            else
                write_report_csv(text, {r});
            emit(out_path, text.str(), out);
            return kExitOk;
        }
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace zkseq
