#include <doctest.h>

#include "support.hpp"

#include "fraglab/eval.hpp"
#include "fraglab/fragment.hpp"
#include "fraglab/graph.hpp"
#include "fraglab/syntax.hpp"
#include "fraglab/types.hpp"

using namespace fraglab;
using namespace fraglab::testing;

TEST_CASE("evaluator agrees with the naive semantics") {
    Rng rng(11);
    Signature sig({"P", "Q"}, {"R", "S"});
    for (int i = 0; i < 300; ++i) {
        Structure m = random_structure(rng, uniform(rng, 1, 5), sig, 0.35);
        Formula s = random_gf2pres_sentence(rng, sig, 2);
        CHECK(eval(m, s) == naive_eval(m, s));
        Formula l = random_local_pct(rng, sig, 2);
        Evaluator ev(m);
        for (Element a = 0; a < m.size(); ++a) CHECK(ev.eval(l, Assignment::of(a)) == naive_eval(m, l, a));
        Formula q = random_qf(rng, sig, 3);
        for (Element a = 0; a < m.size(); ++a)
            for (Element b = 0; b < m.size(); ++b) CHECK(ev.eval(q, Assignment::of(a, b)) == naive_eval(m, q, a, b));
    }
}

TEST_CASE("percentages use exact rational comparison") {
    Signature sig({"P"}, {"R"});
    // 1 of 3 elements: exactly 100/3 percent
    StructureBuilder b(3, sig);
    b.set_unary("P", 0);
    Structure m = b.build();
    CHECK(eval(m, global_pct(Comparison::eq(), Rational(100, 3), Var::X, atom("P", Var::X))));
    CHECK_FALSE(eval(m, global_pct(Comparison::gt(), Rational(100, 3), Var::X, atom("P", Var::X))));
    CHECK(eval(m, global_pct(Comparison::lt(), Rational(34), Var::X, atom("P", Var::X))));
    // relative to zero successors every comparison with 0 = 0 is true for weak forms
    Formula rel = local_pct(Comparison::ge(), Rational(75), RoleRef{"R", false}, Var::Y, atom("P", Var::Y));
    for (Element a = 0; a < 3; ++a) CHECK(eval(m, Assignment::of(a), rel));
}

TEST_CASE("Presburger constraints with converse roles and modular comparisons") {
    Signature sig({"P"}, {"R"});
    StructureBuilder b(4, sig);
    b.set_binary("R", 0, 1);
    b.set_binary("R", 0, 2);
    b.set_binary("R", 3, 0);
    b.set_unary("P", 1);
    Structure m = b.build();
    auto f = parse_formula("(count = 1 ((1 R (y) (P y)) (1 (inv R) (y) (top))))", sig);
    CHECK_FALSE(eval(m, Assignment::of(0), f));  // 1 + 1
    CHECK(eval(m, Assignment::of(1), f));
    CHECK_FALSE(eval(m, Assignment::of(3), f));
    // out-degree plus in-degree is odd everywhere
    auto g = parse_formula("(count mod=2 1 ((1 R (y) (top)) (1 (inv R) (y) (top))))", sig);
    for (Element a = 0; a < 4; ++a) CHECK(eval(m, Assignment::of(a), g));
    auto h = parse_formula("(count mod!=2 1 ((1 R (y) (top)) (1 (inv R) (y) (top))))", sig);
    for (Element a = 0; a < 4; ++a) CHECK_FALSE(eval(m, Assignment::of(a), h));
}

TEST_CASE("evaluation errors") {
    Signature sig({"P"}, {"R"});
    Structure m = StructureBuilder(2, sig).build();
    CHECK_THROWS_AS(eval(m, atom("P", Var::X)), PreconditionError);
    CHECK_THROWS(eval(m, atom("Z", Var::X)));
    CHECK_THROWS(eval(StructureBuilder(0, sig).build(), atom("P", Var::X)));
}

TEST_CASE("counting pairs") {
    Signature sig({}, {"R"});
    StructureBuilder b(3, sig);
    b.set_binary("R", 0, 1);
    b.set_binary("R", 1, 1);
    CHECK(count_pairs(b.build(), atom("R", Var::X, Var::Y)) == 2);
}

TEST_CASE("types and degree vectors") {
    Signature sig({"P"}, {"R", "S"});
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        Structure m = random_structure(rng, uniform(rng, 2, 5), sig, 0.4);
        for (Element a = 0; a < m.size(); ++a) {
            auto d = degree_vector(m, a);
            CHECK(d.size() == two_type_count(2));
            Int total = 0;
            for (auto v : d) total += v;
            // every non-null neighbour is counted once
            CHECK(static_cast<std::size_t>(total) == neighbour_types(m, a, m.binary_names()).size());
            for (Element c = 0; c < m.size(); ++c) {
                if (c == a) continue;
                auto t = two_type(m, a, c);
                CHECK(swap_two_type(swap_two_type(t, 2), 2).bits == t.bits);
                CHECK(swap_two_type(t, 2).bits == two_type(m, c, a).bits);
            }
        }
    }
}

TEST_CASE("girth agrees with the oracle") {
    Rng rng(13);
    Signature sig({}, {"E", "F"});
    for (int i = 0; i < 200; ++i) {
        Structure m = random_structure(rng, uniform(rng, 1, 7), sig, 0.25);
        CHECK(girth(m) == oracle_girth(m));
    }
}
