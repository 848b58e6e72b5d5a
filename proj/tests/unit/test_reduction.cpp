#include <doctest.h>

#include "support.hpp"

#include "fraglab/c2.hpp"
#include "fraglab/eval.hpp"
#include "fraglab/fragment.hpp"
#include "fraglab/normal_form.hpp"
#include "fraglab/sat.hpp"
#include "fraglab/syntax.hpp"
#include "fraglab/transform.hpp"
#include "fraglab/types.hpp"

using namespace fraglab;
using namespace fraglab::testing;

TEST_CASE("normal form is equisatisfiable and conservative") {
    Rng rng(41);
    Signature sig({"P"}, {"R"});
    for (int t = 0; t < 40; ++t) {
        Formula phi = random_gf2pres_sentence(rng, sig, 2);
        NormalForm nf = normalize(phi, sig);
        Formula nff = to_formula(nf);
        CHECK(validate(nff, nf.sig).is_gf2pres);
        CHECK(is_quantifier_free(nf.gamma));
        for (auto& p : nf.pairs) CHECK(p.guard->kind == Kind::Binary);
        for (std::size_t n = 1; n <= 3; ++n) {
            for (int k = 0; k < 10; ++k) {
                Structure m = random_structure(rng, n, sig, 0.4);
                if (eval(m, phi)) CHECK(eval(expand_model(nf, m), nff));
            }
            for (auto& m : enumerate_models(nff, nf.sig, n, 4)) CHECK(eval(reduct(m, sig), phi));
        }
    }
}

TEST_CASE("degree constraints describe the normal form exactly") {
    Rng rng(42);
    Signature sig({"P", "Q"}, {"R"});
    for (int t = 0; t < 25; ++t) {
        Formula phi = random_gf2pres_sentence(rng, sig, 2);
        NormalForm nf = normalize(phi, sig);
        auto dcs = degree_rewrite(nf);
        auto sets = build_semilinear(dcs);
        PsiStar ps = emit_c2(nf, dcs, sets);
        CHECK(validate(ps.formula, ps.sig).is_c2);
        CHECK(is_sentence(ps.formula));
        Formula psi = psi_formula(ps), nff = to_formula(nf);
        for (int k = 0; k < 30; ++k) {
            Structure m = random_structure(rng, uniform(rng, 1, 4), nf.sig, 0.4);
            CHECK(eval(m, psi) == eval(m, nff));
            if (coin(rng)) {
                Structure e = expand_model(nf, random_structure(rng, uniform(rng, 1, 4), sig, 0.4));
                CHECK(eval(e, psi) == eval(e, nff));
            }
        }
        // expand() returns the same set over all coordinates
        for (std::size_t p = 0; p < sets.size() && p < 2; ++p) {
            if (sets[p].dim() > 15) continue;
            auto full = sets[p].expand();
            Rng r2(p);
            for (int k = 0; k < 40; ++k) {
                DegreeVector d(sets[p].dim());
                for (auto& x : d) x = uniform_int(r2, 0, 1);
                Vec dv(d.begin(), d.end());
                CHECK(member(full, dv) == member(sets[p].set, sets[p].features(d)));
            }
        }
    }
}

TEST_CASE("merging and splitting elements") {
    Signature sig({"P"}, {"R"});
    StructureBuilder b(4, sig);
    b.set_binary("R", 0, 1);
    b.set_binary("R", 2, 3);
    Structure m = b.build();
    Structure g = merge_elements(m, 0, 2);
    CHECK(g.size() == 3);
    CHECK(g.binary("R", 0, 1));
    CHECK(g.binary("R", 0, 2));  // 3 shifted down
    CHECK_THROWS_AS(merge_elements(m, 0, 0), PreconditionError);
    CHECK_THROWS_AS(merge_elements(m, 0, 1), PreconditionError);  // the pair is connected
    StructureBuilder c(m);
    c.set_unary("P", 2);
    CHECK_THROWS_AS(merge_elements(c.build(), 0, 2), PreconditionError);  // 1-types differ

    StructureBuilder sb(3, sig);
    sb.set_binary("R", 0, 1);
    sb.set_binary("R", 2, 0);
    Structure s = sb.build();
    Structure t = split_element(s, 0, {{1}, {2}});
    CHECK(t.size() == 4);
    CHECK(t.binary("R", 0, 1));
    CHECK(t.binary("R", 2, 3));
    CHECK_FALSE(t.binary("R", 2, 0));
    CHECK(one_type(t, 3).bits == one_type(s, 0).bits);
    CHECK_THROWS_AS(split_element(s, 0, {{1}}), PreconditionError);

    auto parts = plan_split(s, 0, {degree_vector(s, 0)});
    CHECK(parts.size() == 1);
    CHECK_THROWS_AS(plan_split(s, 0, {DegreeVector(two_type_count(1), 0)}), PreconditionError);
}

TEST_CASE("model transforms reject non-models") {
    Signature sig({"P"}, {"R"});
    Formula phi = parse_formula("(forall (x) (-> (= x x) (count >= 1 ((1 R (y) (P y))))))", sig);
    PsiStar ps = reduce_to_c2(phi, sig);
    Structure empty = with_signature(StructureBuilder(2, sig).build(), ps.sig);
    CHECK_THROWS_AS(psi_model_to_psi_star(ps, empty), PreconditionError);
    auto m = bounded_sat(ps.formula, ps.sig, 4);
    REQUIRE(m);
    Structure back = psi_star_model_to_psi(ps, *m);
    CHECK(eval(back, psi_formula(ps)));
    CHECK(eval(reduct(back, sig), phi));
}
