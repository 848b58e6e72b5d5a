#include <doctest.h>

#include "support.hpp"

#include "fraglab/eval.hpp"
#include "fraglab/fragment.hpp"
#include "fraglab/gadgets.hpp"
#include "fraglab/sat.hpp"
#include "fraglab/shtp.hpp"
#include "fraglab/syntax.hpp"

using namespace fraglab;
using namespace fraglab::testing;

TEST_CASE("SHTP solutions round-trip through witnesses") {
    ShtpSystem e = parse_shtp("u = 1\nt = 1\nv = u + t\nw = v * v2\nv2 = u + t\n");
    CHECK(e.variables() == std::vector<std::string>{"t", "u", "v", "v2", "w"});
    ShtpSolution s{{"t", 1}, {"u", 1}, {"v", 2}, {"v2", 2}, {"w", 4}};
    CHECK(solves(e, s));
    Structure m = shtp_witness(e, s);
    CHECK(m.size() % 2 == 0);
    CHECK(eval(m, shtp_encode(e)));
    CHECK(shtp_extract(m, e) == s);
    CHECK(validate(shtp_encode(e), shtp_signature(e)).is_fo2_pct);

    CHECK_FALSE(solves(e, {{"t", 1}, {"u", 1}, {"v", 2}, {"v2", 2}, {"w", 5}}));
    CHECK_THROWS_AS(shtp_witness(e, {{"t", 1}, {"u", 1}, {"v", 3}, {"v2", 3}, {"w", 9}}), PreconditionError);
    StructureBuilder bb(m);
    bb.set_unary(shtp_var_pred("w"), 0, !m.unary(shtp_var_pred("w"), 0));
    CHECK_THROWS_AS(shtp_extract(bb.build(), e), PreconditionError);
}

TEST_CASE("SHTP systems without solutions have no small models") {
    // w = u + v = 2 contradicts w = 1
    ShtpSystem e = parse_shtp("u = 1\nv = 1\nw = u + v\nw = 1\n");
    for (std::size_t n = 1; n <= 6; ++n) CHECK_FALSE(bounded_sat_exact(shtp_encode(e), shtp_signature(e), n));
}

TEST_CASE("localising global percentages preserves truth on universal relations") {
    Rng rng(51);
    Signature sig({"P", "Q"}, {});
    for (int t = 0; t < 60; ++t) {
        Formula f = global_pct(Comparison::ge(), Rational(uniform_int(rng, 0, 100)), Var::X,
                               coin(rng) ? atom("P", Var::X) : conj({atom("P", Var::X), neg(atom("Q", Var::X))}));
        Localized l = localize_global(f, sig);
        Structure m = random_structure(rng, uniform(rng, 1, 5), sig, 0.5);
        StructureBuilder b(m);
        b.declare_binary(l.relation);
        for (Element a = 0; a < m.size(); ++a)
            for (Element c = 0; c < m.size(); ++c) b.set_binary(l.relation, a, c);
        CHECK(eval(b.build(), l.formula) == eval(m, f));
    }
    Localized clash = localize_global(global_pct(Comparison::ge(), Rational(50), Var::X, atom("U", Var::X)),
                                      Signature({"U"}, {}));
    CHECK(clash.relation != "U");
}

TEST_CASE("universality gadget") {
    auto g = gf_universal_gadget(Signature({"P"}, {"R"}));
    Signature sig({}, {g.relation});
    sig.add_unary(g.half);
    for (std::size_t n = 1; n <= 4; ++n)
        for (auto& m : enumerate_models(g.formula, sig, n, 50))
            CHECK(m.tuples(g.relation).size() == n * n);
    // on even domains the universal relation with half the elements in H is a model
    StructureBuilder b(4, sig);
    for (Element a = 0; a < 4; ++a)
        for (Element c = 0; c < 4; ++c) b.set_binary(g.relation, a, c);
    b.set_unary(g.half, 0);
    b.set_unary(g.half, 1);
    CHECK(eval(b.build(), g.formula));
}

TEST_CASE("functionality gadget extension") {
    StructureBuilder b(1, Signature({}, {"F"}));
    b.set_binary("F", 0, 0);
    CHECK_THROWS_AS(func_extend(b.build()), PreconditionError);
    StructureBuilder c(3, Signature({}, {"F"}));
    c.set_binary("F", 0, 1);
    c.set_binary("F", 0, 2);
    CHECK_FALSE(is_functional(c.build(), "F"));
    CHECK_THROWS_AS(func_extend(c.build()), PreconditionError);
    StructureBuilder d(2, Signature({}, {"F"}));
    d.set_binary("F", 1, 1);
    Structure e = func_extend(d.build());
    CHECK(eval(e, func_gadget()));
}
