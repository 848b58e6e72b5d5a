#include "support.hpp"

#include <deque>
#include <set>

namespace fraglab::testing {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Int uniform_int(Rng& rng, Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Structure random_structure(Rng& rng, std::size_t n, const Signature& sig, double density) {
    StructureBuilder b(n, sig);
    for (auto& p : sig.unary())
        for (Element a = 0; a < n; ++a)
            if (coin(rng, 0.5)) b.set_unary(p, a);
    for (auto& r : sig.binary())
        for (Element a = 0; a < n; ++a)
            for (Element c = 0; c < n; ++c)
                if (coin(rng, density)) b.set_binary(r, a, c);
    return b.build();
}

namespace {

const Var X = Var::X, Y = Var::Y;

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[uniform(rng, 0, v.size() - 1)];
}

Formula random_atom(Rng& rng, const Signature& sig, bool two) {
    std::vector<Formula> atoms;
    for (auto& p : sig.unary()) {
        atoms.push_back(atom(p, X));
        if (two) atoms.push_back(atom(p, Y));
    }
    for (auto& r : sig.binary()) {
        atoms.push_back(atom(r, X, X));
        if (two) {
            atoms.push_back(atom(r, X, Y));
            atoms.push_back(atom(r, Y, X));
            atoms.push_back(atom(r, Y, Y));
        }
    }
    if (two) atoms.push_back(eq(X, Y));
    if (atoms.empty()) return top();
    return pick(rng, atoms);
}

Formula random_qf_vars(Rng& rng, const Signature& sig, int depth, bool two) {
    if (depth <= 0 || coin(rng, 0.3)) return random_atom(rng, sig, two);
    switch (uniform(rng, 0, 2)) {
        case 0: return neg(random_qf_vars(rng, sig, depth - 1, two));
        case 1: return conj({random_qf_vars(rng, sig, depth - 1, two), random_qf_vars(rng, sig, depth - 1, two)});
        default: return disj({random_qf_vars(rng, sig, depth - 1, two), random_qf_vars(rng, sig, depth - 1, two)});
    }
}

Comparison random_cmp(Rng& rng, bool modular) {
    std::vector<Comparison> cs{Comparison::eq(), Comparison::ne(), Comparison::le(),
                               Comparison::ge(), Comparison::lt(), Comparison::gt()};
    if (modular) {
        cs.push_back(Comparison::mod_eq(2));
        cs.push_back(Comparison::mod_ne(3));
    }
    return pick(rng, cs);
}

RoleRef random_role(Rng& rng, const Signature& sig) { return {pick(rng, sig.binary()), coin(rng)}; }

}  // namespace

Formula random_qf(Rng& rng, const Signature& sig, int depth) { return random_qf_vars(rng, sig, depth, true); }

Formula random_presburger(Rng& rng, const Signature& sig, std::size_t max_terms) {
    std::vector<PresburgerTerm> terms;
    std::size_t k = uniform(rng, 1, max_terms);
    for (std::size_t i = 0; i < k; ++i) {
        Int c = pick(rng, std::vector<Int>{-2, -1, 1, 2});
        terms.push_back({c, random_role(rng, sig), random_qf(rng, sig, 1)});
    }
    return presburger(Y, std::move(terms), random_cmp(rng, true), uniform_int(rng, -3, 3));
}

Formula random_gf2pres_sentence(Rng& rng, const Signature& sig, int max_constraints) {
    int budget = static_cast<int>(uniform(rng, 0, static_cast<std::size_t>(max_constraints)));
    std::size_t parts = uniform(rng, 1, 3);
    std::vector<Formula> ks;
    auto unary_guard = [&] {
        if (sig.unary().empty() || coin(rng)) return eq(X, X);
        return atom(pick(rng, sig.unary()), X);
    };
    auto constraint_body = [&]() -> Formula {
        Formula c = random_presburger(rng, sig);
        --budget;
        switch (uniform(rng, 0, 2)) {
            case 0: return c;
            case 1: return neg(c);
            default: return disj({random_qf_vars(rng, sig, 1, false), c});
        }
    };
    for (std::size_t i = 0; i < parts || budget > 0; ++i) {
        std::size_t kind = budget > 0 ? 0 : uniform(rng, 1, 3);
        switch (kind) {
            case 0: ks.push_back(forall(X, implies(unary_guard(), constraint_body()))); break;
            case 1: {
                Formula g = atom(pick(rng, sig.binary()), X, Y);
                ks.push_back(forall(X, forall(Y, implies(g, random_qf(rng, sig, 2)))));
                break;
            }
            case 2: ks.push_back(exists(X, conj({unary_guard(), random_qf_vars(rng, sig, 1, false)}))); break;
            default: {
                Formula g = coin(rng) ? atom(pick(rng, sig.binary()), X, Y) : atom(pick(rng, sig.binary()), Y, X);
                ks.push_back(forall(X, implies(unary_guard(), exists(Y, conj({g, random_qf(rng, sig, 1)})))));
                break;
            }
        }
        if (i > 8) break;
    }
    return ks.size() == 1 ? ks[0] : conj(ks);
}

Formula random_local_pct(Rng& rng, const Signature& sig, int depth) {
    static const std::vector<Rational> qs{Rational(0), Rational(20), Rational(25), Rational(100, 3),
                                          Rational(50), Rational(200, 3), Rational(75), Rational(100)};
    Formula body = random_qf(rng, sig, 2);
    if (depth > 0 && coin(rng, 0.5)) {
        Formula inner = swap_vars(random_local_pct(rng, sig, depth - 1));  // free in y
        body = coin(rng) ? conj({body, inner}) : disj({body, inner});
    }
    Formula f = local_pct(random_cmp(rng, false), pick(rng, qs), random_role(rng, sig), Y, body);
    if (coin(rng, 0.3)) f = neg(f);
    if (coin(rng, 0.3)) f = disj({random_qf_vars(rng, sig, 1, false), f});
    return f;
}

Pml random_pml(Rng& rng, int depth, const std::vector<std::string>& props, const std::vector<std::string>& rels) {
    if (depth <= 0 || coin(rng, 0.2)) return coin(rng, 0.85) ? pml_prop(pick(rng, props)) : pml_top();
    switch (uniform(rng, 0, 3)) {
        case 0: return pml_not(random_pml(rng, depth - 1, props, rels));
        case 1:
            return pml_and({random_pml(rng, depth - 1, props, rels), random_pml(rng, depth - 1, props, rels)});
        case 2:
            return pml_or({random_pml(rng, depth - 1, props, rels), random_pml(rng, depth - 1, props, rels)});
        default: {
            std::vector<PmlTerm> ts;
            for (std::size_t i = uniform(rng, 1, 2); i > 0; --i)
                ts.push_back({pick(rng, std::vector<Int>{-2, -1, 1, 2}), {pick(rng, rels), coin(rng)},
                              random_pml(rng, depth - 1, props, rels)});
            std::vector<Comparison> cs{Comparison::le(), Comparison::lt(), Comparison::gt(), Comparison::eq(),
                                       Comparison::ge(), Comparison::mod_eq(2), Comparison::mod_eq(3)};
            Comparison c = pick(rng, cs);
            Int b = c.is_modular() ? uniform_int(rng, 0, c.modulus - 1) : uniform_int(rng, 0, 3);
            return pml_count(std::move(ts), c, b);
        }
    }
}

void for_each_structure(std::size_t n, const Signature& sig, const std::function<void(const Structure&)>& fn) {
    std::size_t bits = n * sig.unary().size() + n * n * sig.binary().size();
    if (bits > 30) throw PreconditionError("for_each_structure: too many structures");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
        StructureBuilder b(n, sig);
        std::size_t k = 0;
        for (auto& p : sig.unary())
            for (Element a = 0; a < n; ++a, ++k)
                if (mask >> k & 1) b.set_unary(p, a);
        for (auto& r : sig.binary())
            for (Element a = 0; a < n; ++a)
                for (Element c = 0; c < n; ++c, ++k)
                    if (mask >> k & 1) b.set_binary(r, a, c);
        fn(b.build());
    }
}

namespace {

struct Naive {
    const Structure& m;

    bool holds(const RoleRef& r, Element a, Element b) const {
        return r.inverse ? m.binary(r.pred, b, a) : m.binary(r.pred, a, b);
    }

    bool ev(const Formula& f, std::optional<Element> x, std::optional<Element> y) const {
        auto val = [&](Var v) {
            auto e = v == X ? x : y;
            if (!e) throw PreconditionError("naive_eval: unassigned variable");
            return *e;
        };
        auto with = [&](Var v, Element b, const Formula& g) { return v == X ? ev(g, b, y) : ev(g, x, b); };
        auto count = [&](Var v, const Formula& g) {
            Int c = 0;
            for (Element b = 0; b < m.size(); ++b) c += with(v, b, g) ? 1 : 0;
            return c;
        };
        switch (f->kind) {
            case Kind::Top: return true;
            case Kind::Unary: return m.unary(f->pred, val(f->v1));
            case Kind::Binary: return m.binary(f->pred, val(f->v1), val(f->v2));
            case Kind::Equal: return val(f->v1) == val(f->v2);
            case Kind::Not: return !ev(f->kids[0], x, y);
            case Kind::And:
                for (auto& k : f->kids)
                    if (!ev(k, x, y)) return false;
                return true;
            case Kind::Or:
                for (auto& k : f->kids)
                    if (ev(k, x, y)) return true;
                return false;
            case Kind::Implies: return !ev(f->kids[0], x, y) || ev(f->kids[1], x, y);
            case Kind::Iff: return ev(f->kids[0], x, y) == ev(f->kids[1], x, y);
            case Kind::Forall: return count(f->v1, f->kids[0]) == static_cast<Int>(m.size());
            case Kind::Exists: return count(f->v1, f->kids[0]) > 0;
            case Kind::CountingExists: return cmp_holds(f->cmp, count(f->v1, f->kids[0]), f->bound);
            case Kind::GlobalPct:
                return cmp_holds(f->cmp, count(f->v1, f->kids[0]) * 100 * f->pct.den,
                                 f->pct.num * static_cast<Int>(m.size()));
            case Kind::LocalPct: {
                Element a = val(other(f->v1));
                Int hit = 0, all = 0;
                for (Element b = 0; b < m.size(); ++b)
                    if (holds(f->role, a, b)) {
                        ++all;
                        hit += with(f->v1, b, f->kids[0]) ? 1 : 0;
                    }
                return cmp_holds(f->cmp, hit * 100 * f->pct.den, f->pct.num * all);
            }
            case Kind::Presburger: {
                Element a = val(other(f->v1));
                Int sum = 0;
                for (auto& t : f->terms)
                    for (Element b = 0; b < m.size(); ++b)
                        if (holds(t.role, a, b) && with(f->v1, b, t.body)) sum += t.coeff;
                return cmp_holds(f->cmp, sum, f->bound);
            }
            case Kind::DegreeAtom: throw PreconditionError("naive_eval: degree atoms unsupported");
        }
        return false;
    }
};

bool member_rec(const std::vector<Vec>& periods, std::size_t i, Vec& r) {
    bool zero = std::all_of(r.begin(), r.end(), [](Int v) { return v == 0; });
    if (zero) return true;
    if (i == periods.size()) return false;
    const Vec& p = periods[i];
    if (std::all_of(p.begin(), p.end(), [](Int v) { return v == 0; })) return member_rec(periods, i + 1, r);
    Vec start = r;
    while (true) {
        if (member_rec(periods, i + 1, r)) {
            r = start;
            return true;
        }
        bool ok = true;
        for (std::size_t j = 0; j < r.size(); ++j) {
            r[j] -= p[j];
            if (r[j] < 0) ok = false;
        }
        if (!ok) break;
    }
    r = start;
    return false;
}

}  // namespace

bool naive_eval(const Structure& m, const Formula& f, std::optional<Element> x, std::optional<Element> y) {
    return Naive{m}.ev(f, x, y);
}

bool oracle_member(const SemilinearSet& s, const Vec& u) {
    for (auto& c : s.components) {
        Vec r = u;
        bool ok = true;
        for (std::size_t j = 0; j < r.size(); ++j) {
            r[j] -= c.offset[j];
            if (r[j] < 0) ok = false;
        }
        if (ok && member_rec(c.periods, 0, r)) return true;
    }
    return false;
}

std::set<Vec> oracle_members_in_box(const SemilinearSet& s, std::size_t dim, Int bound) {
    std::set<Vec> seen;
    auto inside = [&](const Vec& v) {
        return std::all_of(v.begin(), v.end(), [&](Int x) { return x >= 0 && x <= bound; });
    };
    for (auto& c : s.components) {
        if (c.offset.size() != dim || !inside(c.offset)) continue;
        std::set<Vec> local{c.offset};
        std::deque<Vec> todo{c.offset};
        while (!todo.empty()) {
            Vec v = todo.front();
            todo.pop_front();
            for (auto& p : c.periods) {
                Vec w = v;
                for (std::size_t j = 0; j < dim; ++j) w[j] += p[j];
                if (inside(w) && local.insert(w).second) todo.push_back(w);
            }
        }
        seen.insert(local.begin(), local.end());
    }
    return seen;
}

std::optional<std::size_t> oracle_girth(const Structure& m) {
    std::size_t n = m.size();
    std::set<Tuple> edges;
    for (auto& r : m.binary_names())
        for (auto [a, b] : m.tuples(r))
            if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
    std::vector<std::vector<Element>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::optional<std::size_t> best;
    for (auto [u, v] : edges) {
        std::vector<std::size_t> dist(n, SIZE_MAX);
        std::deque<Element> q{u};
        dist[u] = 0;
        while (!q.empty()) {
            Element a = q.front();
            q.pop_front();
            for (auto b : adj[a]) {
                if ((a == u && b == v) || (a == v && b == u)) continue;
                if (dist[b] == SIZE_MAX) {
                    dist[b] = dist[a] + 1;
                    q.push_back(b);
                }
            }
        }
        if (dist[v] != SIZE_MAX && (!best || dist[v] + 1 < *best)) best = dist[v] + 1;
    }
    return best;
}

bool oracle_hom_exists(const ConjunctiveQuery& q, const Structure& m) {
    std::size_t k = q.vars.size(), n = m.size();
    if (k == 0) return true;
    if (n == 0) return false;
    std::vector<Element> h(k, 0);
    while (true) {
        bool ok = true;
        for (auto& a : q.atoms) {
            bool holds = a.args.size() == 1 ? m.unary(a.pred, h[a.args[0]]) : m.binary(a.pred, h[a.args[0]], h[a.args[1]]);
            if (!holds) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
        std::size_t i = 0;
        while (i < k && ++h[i] == n) h[i++] = 0;
        if (i == k) return false;
    }
}

}  // namespace fraglab::testing
