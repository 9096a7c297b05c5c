#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "wo/redex.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(WO_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) out += buf.data();
    int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), out};
}

std::string fx(const std::string& name) { return std::string(WO_FIXTURE_DIR) + "/" + name; }

// Structural validation against the shipped schema subset: type, required,
// properties, enum/const, items, if/then over the command value.
bool type_matches(const json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "boolean") return value.is_boolean();
    return true;
}

bool validate(const json& value, const json& schema);

bool validate_object(const json& value, const json& schema) {
    if (schema.contains("required"))
        for (const auto& key : schema["required"])
            if (!value.contains(key.get<std::string>())) return false;
    if (schema.contains("properties"))
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
            if (value.contains(it.key()) && !validate(value[it.key()], it.value())) return false;
    return true;
}

bool validate(const json& value, const json& schema) {
    if (schema.contains("const")) return value == schema["const"];
    if (schema.contains("enum")) {
        bool any = false;
        for (const auto& v : schema["enum"]) any = any || value == v;
        if (!any) return false;
    }
    if (schema.contains("type") && !type_matches(value, schema["type"].get<std::string>()))
        return false;
    if (value.is_object() && !validate_object(value, schema)) return false;
    if (value.is_array() && schema.contains("items"))
        for (const auto& item : value)
            if (!validate(item, schema["items"])) return false;
    if (schema.contains("allOf")) {
        for (const auto& clause : schema["allOf"]) {
            bool applies = true;
            if (clause.contains("if")) applies = validate_object(value, clause["if"]) &&
                                                 [&] {
                                                     for (auto it = clause["if"]["properties"].begin();
                                                          it != clause["if"]["properties"].end(); ++it)
                                                         if (!value.contains(it.key()) ||
                                                             !validate(value[it.key()], it.value()))
                                                             return false;
                                                     return true;
                                                 }();
            if (applies && clause.contains("then") && !validate(value, clause["then"]))
                return false;
        }
    }
    return true;
}

json shipped_schema() {
    std::ifstream f(std::string(WO_SCHEMA_PATH));
    REQUIRE(f.good());
    json schema;
    f >> schema;
    return schema;
}

}  // namespace

TEST_CASE("cli: check verdict line for the SP system") {
    auto res = run_cli("check " + fx("sp.trs"));
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("weakly orthogonal: yes; collapsing rules: PS, SP") !=
          std::string::npos);
    CHECK(res.output.find("orthogonal: no") != std::string::npos);
}

TEST_CASE("cli: check reports the non-trivial pair of the e-variant") {
    auto res = run_cli("check " + fx("sp_e.trs"));
    CHECK(res.exit_code == 0);  // the verdict was computed
    CHECK(res.output.find("weakly orthogonal: no") != std::string::npos);
    CHECK(res.output.find("non-trivial pair") != std::string::npos);
    CHECK(res.output.find("e(P(") != std::string::npos);
}

TEST_CASE("cli: classify q matches the expected report line") {
    auto res = run_cli("sp classify q --depth 40");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("upper=+∞") != std::string::npos);
    CHECK(res.output.find("lower=-∞") != std::string::npos);
    CHECK(res.output.find("root_active=yes") != std::string::npos);
}

TEST_CASE("cli: diamond refuses the collapsing counterexample with exit 2") {
    auto res = run_cli("diamond " + fx("collapse.trs") +
                       " --term \"rec X = f(f(X,b),a)\" --set1 \"{e:K}\" --set2 \"{1:K}\" -d 3");
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("collapsing rules present") != std::string::npos);
}

TEST_CASE("cli: budget exhaustion exits with code 3") {
    auto res = run_cli("orthogonalize " + fx("aaa.trs") +
                       " --term \"rec X = A(A(A(X)))\" --set1 \"{node X : AAA}\""
                       " --set2 \"{1:AAA, 1.1.1.1:AAA, 1.1.1.1.1.1.1:AAA}\" -d 4");
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("conflict frontier") != std::string::npos);
    // One trace line per case application.
    CHECK(res.output.find("(i) replace") != std::string::npos);
}

TEST_CASE("cli: unknown inputs exit with code 2") {
    CHECK(run_cli("check /nonexistent.trs").exit_code == 2);
    CHECK(run_cli("sp classify nonsense").exit_code == 2);
    CHECK(run_cli("redexes " + fx("sp.trs") + " --term \"S(\"").exit_code == 2);
}

TEST_CASE("cli: reports are byte-stable for identical configs") {
    std::string cmd = "cps " + fx("sp.trs") + " --format json";
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("cli: JSON reports validate against the shipped schema") {
    json schema = shipped_schema();
    std::vector<std::string> commands = {
        "check " + fx("sp.trs") + " --format json",
        "cps " + fx("or.trs") + " --format json",
        "redexes " + fx("sp.trs") + " --term \"S(P(x))\" --format json",
        "develop " + fx("sp.trs") + " --term \"S(P(S(P(x))))\" --set \"{e:SP}\" --format json",
        "sp classify r --format json",
        "sp witness q --target S --height 3 --format json",
        "compress " + fx("compress.trs") + " --seq " + fx("omega_plus_one.seq") +
            " --check-depth 12 --format json",
    };
    for (const std::string& cmd : commands) {
        auto res = run_cli(cmd);
        CHECK(res.exit_code == 0);
        json report = json::parse(res.output, nullptr, false);
        REQUIRE(!report.is_discarded());
        CHECK(validate(report, schema));
    }
}

TEST_CASE("cli: emitted terms re-parse to equal values") {
    auto res = run_cli("develop " + fx("collapse.trs") +
                       " --term \"rec X = f(f(X,b),a)\" --set \"{e:K}\" --format json");
    REQUIRE(res.exit_code == 0);
    json report = json::parse(res.output);
    wo::TRS trs = wo::parse_trs_file(fx("collapse.trs"));
    wo::Term original = wo::parse_term("rec X = f(f(X,b),a)", trs.sig);
    wo::Term result = wo::parse_term(report["result"].get<std::string>(), trs.sig);
    wo::Term direct = wo::apply_redex(trs, original, wo::Redex{wo::Position{}, "K"});
    CHECK(wo::eq_to_depth(result, direct, 16));
}

TEST_CASE("cli: strip and join run on the or fixtures") {
    auto strip_res = run_cli("strip " + fx("or_unfold.trs") + " --seq " +
                             fx("strip_erasure.seq") + " --step \"{e:orr}\" -d 8");
    CHECK(strip_res.exit_code == 0);
    CHECK(strip_res.output.find("limit at depth 8: true") != std::string::npos);

    auto join_res = run_cli("join " + fx("or_unfold.trs") + " --seq " + fx("head_first.seq") +
                            " --seq2 " + fx("unfold_forever.seq") + " -d 8");
    CHECK(join_res.exit_code == 0);
    CHECK(join_res.output.find("common endpoint at depth 8: true") != std::string::npos);
}

TEST_CASE("cli: DOT output is syntactically plausible") {
    auto res = run_cli("strip " + fx("or_unfold.trs") + " --seq " + fx("strip_erasure.seq") +
                       " --step \"{e:orr}\" -d 6 --format dot");
    CHECK(res.exit_code == 0);
    CHECK(res.output.rfind("digraph", 0) == 0);
    CHECK(std::count(res.output.begin(), res.output.end(), '{') ==
          std::count(res.output.begin(), res.output.end(), '}'));
    CHECK(res.output.find("->") != std::string::npos);
}

TEST_CASE("cli: compress divergent emits the prefix") {
    auto res = run_cli("compress " + fx("divergent.trs") + " --seq " + fx("divergent.seq") +
                       " --divergent --witness-depth 0 --prefix 30 --format json");
    REQUIRE(res.exit_code == 0);
    json report = json::parse(res.output);
    CHECK(report["prefix_length"].get<long>() == 30);
    CHECK(report["steps_at_witness_depth"].get<long>() >= 10);
}

TEST_CASE("cli: compress omega+1 reports the preservation guarantees") {
    auto res = run_cli("compress " + fx("compress.trs") + " --seq " + fx("omega_plus_one.seq") +
                       " --check-depth 20");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("input order type: ω+1") != std::string::npos);
    CHECK(res.output.find("output: omega") != std::string::npos);
    CHECK(res.output.find("min depth: 0; steps there: in 1, out 1") != std::string::npos);
}
