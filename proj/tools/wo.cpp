// wo: command line front end for the weakly orthogonal infinitary
// rewriting toolkit. Verbs: check, cps, redexes, orthogonalize, develop,
// project, strip, join, diamond, cube, compress, sp classify|graph|witness.
//
// Exit codes: 0 verdict computed, 1 property violated, 2 input error,
// 3 budget exhausted.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "wo/compress.hpp"
#include "wo/dot.hpp"
#include "wo/project.hpp"
#include "wo/sp.hpp"

using nlohmann::json;
using namespace wo;

namespace {

struct RunConfig {
    std::string format = "text";  // text | json | csv | dot
    int depth = 16;
    long prefix = 64;
    unsigned long long seed = 0;
    bool color = false;
};

std::string colorize(const RunConfig& cfg, const std::string& s, bool good) {
    if (!cfg.color) return s;
    return (good ? "\x1b[32m" : "\x1b[31m") + s + "\x1b[0m";
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw input_error("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void emit(const RunConfig& cfg, const json& payload, const std::string& text) {
    if (cfg.format == "json") {
        json envelope = payload;
        envelope["seed"] = cfg.seed;
        std::cout << envelope.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

std::string join_names(const std::set<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out.empty() ? "(none)" : out;
}

json redex_set_json(const RedexSet& set, const Term& t) {
    json arr = json::array();
    for (const Redex& r : set.explicit_redexes) arr.push_back(r.to_string());
    for (const PeriodicMark& m : set.marks)
        arr.push_back("node " + (t.node(m.node).rec_name.empty()
                                     ? "#" + std::to_string(m.node)
                                     : t.node(m.node).rec_name) +
                      " : " + m.rule);
    return arr;
}

// ---- verb implementations ----

int run_check(const RunConfig& cfg, const std::string& trs_path) {
    TRS trs = parse_trs_file(trs_path);
    RuleCheck rc = check_rules(trs);
    WOVerdict v = is_weakly_orthogonal(trs);
    bool ortho = v.weakly_orthogonal && critical_pairs(trs).empty();
    std::ostringstream text;
    text << "left-linear: " << (rc.left_linear ? "yes" : "no") << "\n";
    text << "weakly orthogonal: "
         << colorize(cfg, v.weakly_orthogonal ? "yes" : "no", v.weakly_orthogonal)
         << "; collapsing rules: " << join_names(rc.collapsing_rules) << "\n";
    text << "orthogonal: " << (ortho ? "yes" : "no") << "\n";
    if (v.witness) text << "non-trivial pair: " << to_string(*v.witness) << "\n";
    json j{{"command", "check"},
           {"left_linear", rc.left_linear},
           {"weakly_orthogonal", v.weakly_orthogonal},
           {"orthogonal", ortho},
           {"collapsing_rules", rc.collapsing_rules}};
    if (v.witness) j["witness"] = to_string(*v.witness);
    emit(cfg, j, text.str());
    return 0;
}

int run_cps(const RunConfig& cfg, const std::string& trs_path) {
    TRS trs = parse_trs_file(trs_path);
    auto cps = critical_pairs(trs);
    std::ostringstream text;
    json arr = json::array();
    for (const CriticalPair& cp : cps) {
        bool triv = cp.trivial();
        text << to_string(cp) << "  trivial: " << (triv ? "yes" : "no") << "\n";
        arr.push_back({{"peak", to_string(cp.peak)},
                       {"left", to_string(cp.left_reduct)},
                       {"right", to_string(cp.right_reduct)},
                       {"outer_rule", cp.outer_rule},
                       {"inner_rule", cp.inner_rule},
                       {"position", cp.pos.to_string()},
                       {"trivial", triv}});
    }
    text << cps.size() << " critical pair(s)\n";
    emit(cfg, json{{"command", "cps"}, {"pairs", arr}}, text.str());
    return 0;
}

int run_redexes(const RunConfig& cfg, const std::string& trs_path, const std::string& term_str) {
    TRS trs = parse_trs_file(trs_path);
    Term t = parse_term(term_str, trs.sig);
    auto rs = find_redexes(trs, t, cfg.depth);
    std::ostringstream text;
    json arr = json::array();
    for (const Redex& r : rs) {
        text << r.to_string() << "\n";
        arr.push_back(r.to_string());
    }
    text << rs.size() << " redex(es) above depth " << cfg.depth << "\n";
    emit(cfg, json{{"command", "redexes"}, {"term", to_string(t)}, {"redexes", arr}}, text.str());
    return 0;
}

int run_develop(const RunConfig& cfg, const std::string& trs_path, const std::string& term_str,
                const std::string& set_str) {
    TRS trs = parse_trs_file(trs_path);
    Term t = parse_term(term_str, trs.sig);
    Development dev = Development::make(trs, t, parse_redex_set(set_str, trs, t));
    Term result = develop(trs, dev, cfg.depth);
    std::ostringstream text;
    text << to_string(result) << "\n";
    emit(cfg,
         json{{"command", "develop"}, {"term", to_string(t)}, {"result", to_string(result)},
              {"depth", cfg.depth}},
         text.str());
    return 0;
}

int run_orthogonalize(const RunConfig& cfg, const std::string& trs_path,
                      const std::string& term_str, const std::string& set1_str,
                      const std::string& set2_str, bool parallel,
                      const std::string& dot_prefix) {
    TRS trs = parse_trs_file(trs_path);
    Term t = parse_term(term_str, trs.sig);
    RedexSet s1 = parse_redex_set(set1_str, trs, t);
    RedexSet s2 = parse_redex_set(set2_str, trs, t);
    std::ostringstream text;
    json j{{"command", "orthogonalize"}, {"parallel", parallel}};

    if (!dot_prefix.empty()) {
        auto before = denote(trs, t, s1, cfg.depth + trs.max_pattern_depth());
        auto b2 = denote(trs, t, s2, cfg.depth + trs.max_pattern_depth());
        before.insert(before.end(), b2.begin(), b2.end());
        std::ofstream(dot_prefix + ".before.dot") << overlap_graph_dot(trs, before);
    }

    if (parallel) {
        ParallelStep a = ParallelStep::make(trs, t, s1);
        ParallelStep b = ParallelStep::make(trs, t, s2);
        auto [a2, b2] = orthogonalize_parallel(trs, a, b);
        text << "alpha': " << to_string(a2.redexes, t) << "\n";
        text << "beta':  " << to_string(b2.redexes, t) << "\n";
        j["alpha"] = redex_set_json(a2.redexes, t);
        j["beta"] = redex_set_json(b2.redexes, t);
        if (!dot_prefix.empty()) {
            auto after = a2.redexes.explicit_redexes;
            after.insert(after.end(), b2.redexes.explicit_redexes.begin(),
                         b2.redexes.explicit_redexes.end());
            std::ofstream(dot_prefix + ".after.dot") << overlap_graph_dot(trs, after);
        }
    } else {
        Development u = Development::make(trs, t, s1);
        Development v = Development::make(trs, t, s2);
        OrthoResult res = orthogonalize_developments(trs, u, v, cfg.depth);
        for (const auto& entry : res.trace) text << entry.describe() << "\n";
        text << "U': " << to_string(res.u_dev.redexes, t) << "\n";
        text << "V': " << to_string(res.v_dev.redexes, t) << "\n";
        json trace = json::array();
        for (const auto& entry : res.trace) trace.push_back(entry.describe());
        j["trace"] = trace;
        j["u"] = redex_set_json(res.u_dev.redexes, t);
        j["v"] = redex_set_json(res.v_dev.redexes, t);
        j["budget_exhausted"] = res.budget_exhausted;
        if (res.budget_exhausted) {
            text << "budget exhausted; conflict frontier at depth >= "
                 << *res.frontier_depth << "\n";
            j["frontier_depth"] = *res.frontier_depth;
        }
        if (!dot_prefix.empty()) {
            auto after = res.u_dev.redexes.explicit_redexes;
            after.insert(after.end(), res.v_dev.redexes.explicit_redexes.begin(),
                         res.v_dev.redexes.explicit_redexes.end());
            std::ofstream(dot_prefix + ".after.dot") << overlap_graph_dot(trs, after);
        }
        if (res.budget_exhausted) {
            emit(cfg, j, text.str());
            return 3;
        }
    }
    emit(cfg, j, text.str());
    return 0;
}

int run_project(const RunConfig& cfg, const std::string& trs_path, const std::string& term_str,
                const std::string& set1_str, const std::string& set2_str) {
    TRS trs = parse_trs_file(trs_path);
    Term t = parse_term(term_str, trs.sig);
    ParallelStep a = ParallelStep::make(trs, t, parse_redex_set(set1_str, trs, t));
    ParallelStep b = ParallelStep::make(trs, t, parse_redex_set(set2_str, trs, t));
    ParallelStep ab = wo_project(trs, a, b);
    ParallelStep ba = wo_project(trs, b, a);
    DepthLiftReport lift = depth_lift_bound(trs, a, b);
    std::ostringstream text;
    text << "alpha/beta: " << to_string(ab.redexes, ab.source) << " from "
         << to_string(ab.source) << "\n";
    text << "beta/alpha: " << to_string(ba.redexes, ba.source) << " from "
         << to_string(ba.source) << "\n";
    text << "min depths: alpha " << (lift.d_alpha ? std::to_string(*lift.d_alpha) : "-")
         << ", beta " << (lift.d_beta ? std::to_string(*lift.d_beta) : "-") << ", alpha/beta "
         << (lift.d_ab ? std::to_string(*lift.d_ab) : "-") << ", beta/alpha "
         << (lift.d_ba ? std::to_string(*lift.d_ba) : "-") << "\n";
    json j{{"command", "project"},
           {"alpha_over_beta", redex_set_json(ab.redexes, ab.source)},
           {"beta_over_alpha", redex_set_json(ba.redexes, ba.source)},
           {"general_bound_ok", lift.general_bound_ok}};
    emit(cfg, j, text.str());
    return 0;
}

int run_cube(const RunConfig& cfg, const std::string& trs_path, const std::string& term_str,
             const std::string& s1, const std::string& s2, const std::string& s3) {
    TRS trs = parse_trs_file(trs_path);
    Term t = parse_term(term_str, trs.sig);
    ParallelStep a = ParallelStep::make(trs, t, parse_redex_set(s1, trs, t));
    ParallelStep b = ParallelStep::make(trs, t, parse_redex_set(s2, trs, t));
    ParallelStep c = ParallelStep::make(trs, t, parse_redex_set(s3, trs, t));
    CubeReport rep = check_cube(trs, a, b, c);
    std::ostringstream text;
    text << "cube identity: " << colorize(cfg, rep.holds ? "holds" : "fails", rep.holds) << "\n";
    if (!rep.holds)
        text << rep.discrepancy << "\n"
             << "lhs target: " << to_string(rep.lhs_target) << "\n"
             << "rhs target: " << to_string(rep.rhs_target) << "\n";
    json j{{"command", "cube"}, {"holds", rep.holds}};
    if (!rep.holds) j["discrepancy"] = rep.discrepancy;
    emit(cfg, j, text.str());
    return 0;
}

int run_strip(const RunConfig& cfg, const std::string& trs_path, const std::string& seq_path,
              const std::string& set_str) {
    TRS trs = parse_trs_file(trs_path);
    SegSeq seq = parse_sequence(read_file(seq_path), trs);
    ParallelStep alpha =
        ParallelStep::make(trs, seq.source, parse_redex_set(set_str, trs, seq.source));
    StripResult res = strip(trs, seq, alpha, cfg.depth);
    std::ostringstream text;
    text << "columns: " << res.columns << "\n";
    text << "right: " << to_string(res.right.redexes, res.right.source) << " from "
         << to_string(unfold(res.right.source, cfg.depth)) << "\n";
    text << "bottom steps: " << res.bottom_steps.size() << "\n";
    text << "limit at depth " << cfg.depth << ": " << to_string(res.limit) << "\n";
    if (cfg.format == "dot") {
        Materialized mat = materialize(trs, seq, cfg.depth + trs.max_pattern_depth());
        std::cout << strip_diagram_dot(trs, res, mat.steps);
        return 0;
    }
    json j{{"command", "strip"},
           {"columns", res.columns},
           {"bottom_steps", res.bottom_steps.size()},
           {"limit", to_string(res.limit)}};
    emit(cfg, j, text.str());
    return 0;
}

int run_join(const RunConfig& cfg, const std::string& trs_path, const std::string& seq1_path,
             const std::string& seq2_path) {
    TRS trs = parse_trs_file(trs_path);
    SegSeq sigma = parse_sequence(read_file(seq1_path), trs);
    SegSeq tau = parse_sequence(read_file(seq2_path), trs);
    JoinResult res = confluence_join(trs, sigma, tau, cfg.depth);
    std::ostringstream text;
    text << "levels: " << res.levels << "\n";
    text << "sigma extension: " << res.sigma_extension.size() << " parallel step(s)\n";
    text << "tau extension: " << res.tau_extension.size() << " parallel step(s)\n";
    text << "common endpoint at depth " << cfg.depth << ": " << to_string(res.common) << "\n";
    json j{{"command", "join"},
           {"levels", res.levels},
           {"sigma_extension", res.sigma_extension.size()},
           {"tau_extension", res.tau_extension.size()},
           {"common", to_string(res.common)}};
    emit(cfg, j, text.str());
    return 0;
}

int run_diamond(const RunConfig& cfg, const std::string& trs_path, const std::string& term_str,
                const std::string& set1_str, const std::string& set2_str) {
    TRS trs = parse_trs_file(trs_path);
    Term t = parse_term(term_str, trs.sig);
    Development u = Development::make(trs, t, parse_redex_set(set1_str, trs, t));
    Development v = Development::make(trs, t, parse_redex_set(set2_str, trs, t));
    DiamondResult res = diamond_join(trs, u, v, cfg.depth);
    std::ostringstream text;
    text << "closing U side: " << to_string(res.closing_u.redexes, res.closing_u.source) << "\n";
    text << "closing V side: " << to_string(res.closing_v.redexes, res.closing_v.source) << "\n";
    text << "common target at depth " << cfg.depth << ": " << to_string(res.common) << "\n";
    json j{{"command", "diamond"},
           {"closing_u", redex_set_json(res.closing_u.redexes, res.closing_u.source)},
           {"closing_v", redex_set_json(res.closing_v.redexes, res.closing_v.source)},
           {"common", to_string(res.common)}};
    emit(cfg, j, text.str());
    return 0;
}

int run_compress(const RunConfig& cfg, const std::string& trs_path, const std::string& seq_path,
                 int check_depth, bool divergent, int witness_depth) {
    TRS trs = parse_trs_file(trs_path);
    SegSeq seq = parse_sequence(read_file(seq_path), trs);
    std::ostringstream text;
    if (divergent) {
        DivergentPrefix out = compress_divergent(trs, seq, cfg.prefix, witness_depth);
        text << "emitted prefix: " << out.steps.size() << " step(s)\n";
        text << "steps at witness depth " << witness_depth << ": "
             << out.steps_at_witness_depth << "\n";
        for (const RewriteStep& st : out.steps) text << "  " << st.redex.to_string() << "\n";
        json j{{"command", "compress"},
               {"divergent", true},
               {"prefix_length", out.steps.size()},
               {"witness_depth", witness_depth},
               {"steps_at_witness_depth", out.steps_at_witness_depth}};
        emit(cfg, j, text.str());
        return 0;
    }
    CompressionReport rep = compress(trs, seq, check_depth);
    text << "input order type: " << rep.input_order_type << "\n";
    text << "output: " << (rep.output_finite
                               ? "finite, " + std::to_string(*rep.output_length) + " step(s)"
                               : "omega")
         << "\n";
    text << "min depth: " << rep.min_depth << "; steps there: in "
         << rep.steps_at_min_depth_in << ", out " << rep.steps_at_min_depth_out << "\n";
    text << "limits agree to depth " << rep.limit_agreement_depth << "\n";
    Materialized out_prefix = materialize(trs, rep.output, check_depth);
    long show = std::min<long>(cfg.prefix, static_cast<long>(out_prefix.steps.size()));
    for (long i = 0; i < show; ++i)
        text << "  " << out_prefix.steps[static_cast<size_t>(i)].redex.to_string() << "\n";
    json j{{"command", "compress"},
           {"divergent", false},
           {"input_order_type", rep.input_order_type},
           {"omega_segments_in", rep.omega_segments_in},
           {"finite_steps_in", rep.finite_steps_in},
           {"min_depth", rep.min_depth},
           {"steps_at_min_depth_in", rep.steps_at_min_depth_in},
           {"steps_at_min_depth_out", rep.steps_at_min_depth_out},
           {"limit_agreement_depth", rep.limit_agreement_depth},
           {"output_finite", rep.output_finite}};
    emit(cfg, j, text.str());
    return 0;
}

int run_sp_classify(const RunConfig& cfg, const std::string& word_str) {
    SPWord w = parse_word(word_str);
    SPClassification c = classify(w);
    std::ostringstream text;
    text << "upper=" << c.h.upper.to_string() << " lower=" << c.h.lower.to_string()
         << " in_A=" << to_string(c.in_A) << " in_B=" << to_string(c.in_B)
         << " root_active=" << to_string(c.root_active) << " sn_inf=" << to_string(c.sn_inf)
         << "\n";
    json j{{"command", "sp classify"},
           {"word", word_str},
           {"upper", c.h.upper.to_string()},
           {"lower", c.h.lower.to_string()},
           {"in_A", to_string(c.in_A)},
           {"in_B", to_string(c.in_B)},
           {"root_active", to_string(c.root_active)},
           {"sn_inf", to_string(c.sn_inf)},
           {"evidence_prefix", c.h.evidence_prefix}};
    emit(cfg, j, text.str());
    return 0;
}

int run_sp_graph(const RunConfig& cfg, const std::string& word_str, long n) {
    SPWord w = parse_word(word_str);
    if (cfg.format == "json") {
        json rows = json::array();
        for (const auto& [i, s] : sum_graph(w, n)) rows.push_back({{"index", i}, {"sum", s}});
        emit(cfg, json{{"command", "sp graph"}, {"word", word_str}, {"rows", rows}}, "");
    } else {
        std::cout << sum_graph_csv(w, n);
    }
    return 0;
}

int run_sp_witness(const RunConfig& cfg, const std::string& word_str, const std::string& target,
                   int d) {
    if (target != "S" && target != "P") throw input_error("--target must be S or P");
    SPWord w = parse_word(word_str);
    ReductionWitness wit = reduce_toward(w, target[0], d);
    std::ostringstream text;
    text << "prefix length: " << wit.prefix_length << "\n";
    text << "steps: " << wit.steps.size() << "\n";
    text << "result: " << to_string(wit.result) << "\n";
    json j{{"command", "sp witness"},
           {"word", word_str},
           {"target", target},
           {"depth", d},
           {"prefix_length", wit.prefix_length},
           {"steps", wit.steps.size()},
           {"result", to_string(wit.result)}};
    emit(cfg, j, text.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    const char* color_env = std::getenv("WO_COLOR");
    cfg.color = color_env && std::string(color_env) == "1";

    CLI::App app{"weakly orthogonal infinitary rewriting toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", cfg.format, "output format: text|json|csv|dot")
        ->check(CLI::IsMember({"text", "json", "csv", "dot"}));
    app.add_option("-d,--depth", cfg.depth, "depth budget (default 16)");
    app.add_option("--prefix", cfg.prefix, "prefix budget (default 64)");
    app.add_option("--seed", cfg.seed, "seed recorded in reports");

    std::function<int()> action;

    std::string trs_path, term_str, set1, set2, set3, seq1, seq2, dot_prefix, word, target;
    long graph_n = 32;
    int check_depth = 16, witness_depth = 0;
    bool parallel = false, divergent = false;

    auto* check = app.add_subcommand("check", "weak orthogonality and rule flags");
    check->add_option("trs", trs_path)->required();
    check->callback([&] { action = [&] { return run_check(cfg, trs_path); }; });

    auto* cps = app.add_subcommand("cps", "critical pairs");
    cps->add_option("trs", trs_path)->required();
    cps->callback([&] { action = [&] { return run_cps(cfg, trs_path); }; });

    auto* redexes = app.add_subcommand("redexes", "redexes of a term above the depth budget");
    redexes->add_option("trs", trs_path)->required();
    redexes->add_option("--term", term_str)->required();
    redexes->callback([&] { action = [&] { return run_redexes(cfg, trs_path, term_str); }; });

    auto* develop_cmd = app.add_subcommand("develop", "complete development of a redex set");
    develop_cmd->add_option("trs", trs_path)->required();
    develop_cmd->add_option("--term", term_str)->required();
    develop_cmd->add_option("--set", set1)->required();
    develop_cmd->callback(
        [&] { action = [&] { return run_develop(cfg, trs_path, term_str, set1); }; });

    auto* ortho = app.add_subcommand("orthogonalize", "remove overlaps between two sets");
    ortho->add_option("trs", trs_path)->required();
    ortho->add_option("--term", term_str)->required();
    ortho->add_option("--set1", set1)->required();
    ortho->add_option("--set2", set2)->required();
    ortho->add_flag("--parallel", parallel, "treat the sets as parallel steps");
    ortho->add_option("--dot-out", dot_prefix, "write <prefix>.before.dot and .after.dot");
    ortho->callback([&] {
        action = [&] {
            return run_orthogonalize(cfg, trs_path, term_str, set1, set2, parallel, dot_prefix);
        };
    });

    auto* project_cmd = app.add_subcommand("project", "weakly orthogonal projection both ways");
    project_cmd->add_option("trs", trs_path)->required();
    project_cmd->add_option("--term", term_str)->required();
    project_cmd->add_option("--set1", set1)->required();
    project_cmd->add_option("--set2", set2)->required();
    project_cmd->callback(
        [&] { action = [&] { return run_project(cfg, trs_path, term_str, set1, set2); }; });

    auto* cube = app.add_subcommand("cube", "check the cube identity on a triple");
    cube->add_option("trs", trs_path)->required();
    cube->add_option("--term", term_str)->required();
    cube->add_option("--set1", set1)->required();
    cube->add_option("--set2", set2)->required();
    cube->add_option("--set3", set3)->required();
    cube->callback(
        [&] { action = [&] { return run_cube(cfg, trs_path, term_str, set1, set2, set3); }; });

    auto* strip_cmd = app.add_subcommand("strip", "tile a sequence against a parallel step");
    strip_cmd->add_option("trs", trs_path)->required();
    strip_cmd->add_option("--seq", seq1)->required();
    strip_cmd->add_option("--step", set1)->required();
    strip_cmd->callback([&] { action = [&] { return run_strip(cfg, trs_path, seq1, set1); }; });

    auto* join = app.add_subcommand("join", "depth-budgeted confluence join");
    join->add_option("trs", trs_path)->required();
    join->add_option("--seq", seq1)->required();
    join->add_option("--seq2", seq2)->required();
    join->callback([&] { action = [&] { return run_join(cfg, trs_path, seq1, seq2); }; });

    auto* diamond = app.add_subcommand("diamond", "diamond join of two developments");
    diamond->add_option("trs", trs_path)->required();
    diamond->add_option("--term", term_str)->required();
    diamond->add_option("--set1", set1)->required();
    diamond->add_option("--set2", set2)->required();
    diamond->callback(
        [&] { action = [&] { return run_diamond(cfg, trs_path, term_str, set1, set2); }; });

    auto* compress_cmd = app.add_subcommand("compress", "compress a segmented sequence");
    compress_cmd->add_option("trs", trs_path)->required();
    compress_cmd->add_option("--seq", seq1)->required();
    compress_cmd->add_option("--check-depth", check_depth, "limit agreement depth (default 16)");
    compress_cmd->add_flag("--divergent", divergent, "use the divergent construction");
    compress_cmd->add_option("--witness-depth", witness_depth,
                             "depth with infinitely many steps (divergent mode)");
    compress_cmd->callback([&] {
        action = [&] {
            return run_compress(cfg, trs_path, seq1, check_depth, divergent, witness_depth);
        };
    });

    auto* sp = app.add_subcommand("sp", "S/P word analyses");
    sp->require_subcommand(1);
    auto* sp_classify = sp->add_subcommand("classify", "heights and class membership");
    sp_classify->add_option("word", word)->required();
    sp_classify->callback([&] { action = [&] { return run_sp_classify(cfg, word); }; });
    auto* sp_graph = sp->add_subcommand("graph", "prefix-sum walk as CSV");
    sp_graph->add_option("word", word)->required();
    sp_graph->add_option("-n,--letters", graph_n, "number of letters (default 32)");
    bool csv_flag = false;
    sp_graph->add_flag("--csv", csv_flag, "force CSV output");
    sp_graph->callback([&] {
        action = [&] {
            RunConfig local = cfg;
            if (csv_flag) local.format = "csv";
            return run_sp_graph(local, word, graph_n);
        };
    });
    auto* sp_witness = sp->add_subcommand("witness", "reduction witness toward S^d or P^d");
    sp_witness->add_option("word", word)->required();
    sp_witness->add_option("--target", target)->required();
    sp_witness->add_option("--depth,--height", check_depth, "target height d")->required();
    sp_witness->callback(
        [&] { action = [&] { return run_sp_witness(cfg, word, target, check_depth); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action ? action() : 2;
    } catch (const property_violation& e) {
        std::cerr << "property violated: " << e.what() << "\n";
        return 1;
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
