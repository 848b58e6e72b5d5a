#include <doctest.h>

#include "cli.hpp"

#include "fraglab/eval.hpp"
#include "fraglab/syntax.hpp"

#include <json.hpp>

#include <sstream>

using namespace fraglab;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kTriangle = R"({"domain":3,"unary":{"P":[0]},"binary":{"R":[[0,1],[1,2],[2,0]]}})";

}  // namespace

TEST_CASE("check reports truth through the exit status") {
    CHECK(run({"check", "--model", kTriangle, "--formula", "(exists (x) (P x))"}).code == 0);
    CHECK(run({"check", "--model", kTriangle, "--formula", "(forall (x) (P x))"}).code == 1);
    CHECK(run({"check", "--model", kTriangle, "--formula", "(exists (y) (R x y))", "--assign", "x=2"}).code == 0);
    auto j = run({"--json", "check", "--model", kTriangle, "--formula", "(forall (x) (P x))"});
    CHECK(nlohmann::json::parse(j.out)["result"] == false);
}

TEST_CASE("usage and input errors exit with 2") {
    auto bad = run({"check", "--model", kTriangle, "--formula", "(forall (x) (P x y))"});
    CHECK(bad.code == 2);
    CHECK(bad.err.rfind("error:", 0) == 0);
    // predicates missing from the model are empty, but an arity clash is an error
    CHECK(run({"check", "--model", "{\"domain\":1}", "--formula", "(exists (x) (P x))"}).code == 1);
    CHECK(run({"check", "--model", kTriangle, "--formula", "(exists (x) (R x))"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"sat", "--formula", "(exists (x) (P x))"}).code == 2);
    CHECK(run({"check", "--model", "/no/such/file.json", "--formula", "(top)"}).code == 2);
}

TEST_CASE("sat prints a model or exits 1") {
    auto r = run({"sat", "--formula", "(exists= 2 (x) (P x))", "--max-size", "3"});
    REQUIRE(r.code == 0);
    Structure m = parse_structure(r.out);
    CHECK(m.members("P").size() == 2);
    CHECK(run({"sat", "--formula", "(and (exists (x) (P x)) (forall (x) (not (P x))))", "--max-size", "3"}).code == 1);
}

TEST_CASE("validate and to-c2") {
    auto v = run({"validate", "--formula", "(forall (x) (-> (P x) (count >= 1 ((1 R (y) (P y))))))"});
    CHECK(v.code == 0);
    auto j = nlohmann::json::parse(v.out);
    CHECK(j["gf2_pres"] == true);
    CHECK(j["c2"] == false);
    auto c = run({"to-c2", "--formula", "(forall (x) (-> (P x) (count >= 1 ((1 R (y) (P y))))))"});
    CHECK(c.code == 0);
    Formula psi = parse_formula(c.out, ParseOptions{true});
    CHECK(psi->kind == Kind::And);
}

TEST_CASE("query, pump and girth commands") {
    auto h = run({"hom", "--query", "(q (R x y) (R y z))", "--model", kTriangle});
    CHECK(h.code == 0);
    CHECK(run({"hom", "--query", "(q (R x x))", "--model", kTriangle}).code == 1);
    auto g = run({"girth", "--model", kTriangle});
    CHECK(g.out == "3\n");
    auto p = run({"pump", "--model", kTriangle});
    REQUIRE(p.code == 0);
    CHECK(parse_structure(p.out).size() == 24);
    CHECK(run({"pump", "--model", kTriangle, "--cap", "2"}).code == 2);
    auto r = run({"rollup", "--query", "(q (R x y) (P y))"});
    CHECK(r.code == 0);
    CHECK_NOTHROW(parse_formula(r.out));
    CHECK(run({"rollup", "--query", "(q (R x y) (R y z) (R z x))"}).code == 2);
}

TEST_CASE("shtp pipeline") {
    const std::string sys = "u = 1\nt = 1\nv = u + t\n";
    auto w = run({"shtp", "witness", "--system", sys, "--solution", R"({"u":1,"t":1,"v":2})"});
    REQUIRE(w.code == 0);
    auto x = run({"shtp", "extract", "--system", sys, "--model", w.out});
    CHECK(x.code == 0);
    CHECK(nlohmann::json::parse(x.out) == nlohmann::json::parse(R"({"u":1,"t":1,"v":2})"));
    CHECK(run({"shtp", "witness", "--system", "u = 1\n", "--solution", R"({"u":3})"}).code == 2);
}

TEST_CASE("semilinear, pml and gadgets") {
    auto s = run({"semilinear", "solve", "--system", R"({"A":[[1],[1]],"c":[2]})"});
    CHECK(s.code == 0);
    auto j = nlohmann::json::parse(s.out);
    CHECK(j["B"].size() == 3);
    CHECK(run({"pml", "translate", "--formula", "(count >= 1 ((1 R p)))"}).code == 0);
    CHECK(run({"gadget", "func"}).code == 0);
    CHECK(run({"gadget", "universal"}).code == 0);
}
