#include <doctest.h>

#include "support.hpp"

#include "fraglab/eval.hpp"
#include "fraglab/sat.hpp"
#include "fraglab/syntax.hpp"

#include <set>

using namespace fraglab;
using namespace fraglab::testing;

TEST_CASE("bounded search agrees with exhaustive enumeration") {
    Rng rng(31);
    Signature sig({"P"}, {"R"});
    for (int t = 0; t < 60; ++t) {
        Formula f = t % 3 == 0   ? random_gf2pres_sentence(rng, sig, 2)
                    : t % 3 == 1 ? forall(Var::X, random_local_pct(rng, sig, 1))
                                 : global_pct(Comparison::ge(), Rational(50), Var::X, random_local_pct(rng, sig, 1));
        for (std::size_t n = 1; n <= 3; ++n) {
            std::size_t brute = 0;
            for_each_structure(n, sig, [&](const Structure& m) { brute += naive_eval(m, f); });
            auto m = bounded_sat_exact(f, sig, n);
            CHECK(m.has_value() == (brute > 0));
            if (m) {
                CHECK(m->size() == n);
                CHECK(eval(*m, f));
            }
            if (n <= 2) {
                auto all = enumerate_models(f, sig, n, 1000);
                CHECK(all.size() == brute);
                std::set<std::string> distinct;
                for (auto& x : all) {
                    CHECK(eval(x, f));
                    distinct.insert(print_structure(x));
                }
                CHECK(distinct.size() == all.size());
            }
        }
    }
}

TEST_CASE("counting quantifiers in the search") {
    Signature sig({"P"}, {});
    Formula f = counting(Comparison::eq(), 3, Var::X, atom("P", Var::X));
    CHECK_FALSE(bounded_sat(f, sig, 2));
    auto m = bounded_sat(f, sig, 5);
    REQUIRE(m);
    CHECK(m->size() == 3);
}

TEST_CASE("bounded search preconditions") {
    Signature sig({"P"}, {});
    CHECK_THROWS_AS(bounded_sat(atom("P", Var::X), sig, 2), PreconditionError);
    CHECK_THROWS(bounded_sat_exact(exists(Var::X, atom("P", Var::X)), sig, 0));
    CHECK_THROWS(bounded_sat(exists(Var::X, atom("Q", Var::X)), sig, 2));
}

TEST_CASE("result is lexicographically least") {
    // some P: the least model over P sets only the last bit possible
    Signature sig({"P"}, {});
    auto m = bounded_sat_exact(exists(Var::X, atom("P", Var::X)), sig, 3);
    REQUIRE(m);
    CHECK(m->members("P").size() == 1);
}
