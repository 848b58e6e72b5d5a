#include "fraglab/eval.hpp"
#include "fraglab/fragment.hpp"
#include "fraglab/semilinear.hpp"
#include "fraglab/types.hpp"

#include <unordered_map>

namespace fraglab {

namespace {

constexpr int kNone = -1;

struct CTerm {
    Int coeff;
    int role;  // binary index or kNone
    bool inverse;
    int body;
};

struct CNode {
    Kind kind;
    int pred = kNone;
    Var v1 = Var::X, v2 = Var::Y;
    std::vector<int> kids;
    Comparison cmp;
    Int num = 0, den = 1, bound = 0;
    int role = kNone;
    bool inverse = false;
    std::vector<CTerm> terms;
    const DegreeSpec* degree = nullptr;
    std::vector<int> group_of;  // DegreeAtom: 2-type index -> feature, kNone if not counted
    std::size_t features = 0;
    std::uint8_t fv = 0;  // bit 0: x free, bit 1: y free
    bool memo = false;
    // memo storage
    std::vector<std::int8_t> table;
    std::unordered_map<std::uint64_t, bool> pairs;
};

std::uint8_t mask_of(const std::set<Var>& s) {
    std::uint8_t m = 0;
    for (auto v : s) m |= v == Var::X ? 1 : 2;
    return m;
}

}  // namespace

struct Evaluator::Impl {
    const Structure& m;
    std::vector<CNode> nodes;
    std::unordered_map<const Node*, int> ids;
    std::vector<Formula> keep;  // pins compiled addresses
    std::size_t n;

    explicit Impl(const Structure& s) : m(s), n(s.size()) {}

    int compile(const Formula& f) {
        auto it = ids.find(f.get());
        if (it != ids.end()) return it->second;
        keep.push_back(f);
        CNode c;
        c.kind = f->kind;
        c.v1 = f->v1;
        c.v2 = f->v2;
        c.cmp = f->cmp;
        c.bound = f->bound;
        c.num = f->pct.num;
        c.den = f->pct.den;
        c.fv = mask_of(free_vars(f));
        switch (f->kind) {
            case Kind::Unary: {
                auto i = m.unary_index(f->pred);
                c.pred = i ? static_cast<int>(*i) : kNone;
                break;
            }
            case Kind::Binary: {
                auto i = m.binary_index(f->pred);
                c.pred = i ? static_cast<int>(*i) : kNone;
                break;
            }
            case Kind::LocalPct: {
                auto i = m.binary_index(f->role.pred);
                c.role = i ? static_cast<int>(*i) : kNone;
                c.inverse = f->role.inverse;
                break;
            }
            case Kind::DegreeAtom: {
                c.degree = f->degree.get();
                std::size_t k = c.degree->binaries.size();
                std::size_t ell = two_type_count(k);
                if (c.degree->groups.empty()) {
                    c.group_of.resize(ell);
                    for (std::size_t j = 0; j < ell; ++j) c.group_of[j] = static_cast<int>(j);
                    c.features = ell;
                } else {
                    c.group_of.assign(ell, kNone);
                    for (std::size_t g = 0; g < c.degree->groups.size(); ++g)
                        for (auto j : c.degree->groups[g]) {
                            if (j >= ell) throw ValidationError("degree atom group index out of range");
                            c.group_of[j] = static_cast<int>(g);
                        }
                    c.features = c.degree->groups.size();
                }
                if (c.degree->is_set) {
                    if (c.degree->set->dim != c.features)
                        throw ValidationError("degree atom set dimension does not match its coordinates");
                } else if (c.degree->coeffs.size() != c.features) {
                    throw ValidationError("degree atom coefficient count does not match its coordinates");
                }
                break;
            }
            default: break;
        }
        c.memo = f->kind == Kind::Forall || f->kind == Kind::Exists || f->kind == Kind::GlobalPct ||
                 f->kind == Kind::LocalPct || f->kind == Kind::Presburger || f->kind == Kind::CountingExists ||
                 f->kind == Kind::DegreeAtom;
        int id = static_cast<int>(nodes.size());
        nodes.push_back(std::move(c));
        ids[f.get()] = id;
        std::vector<int> kids;
        for (auto& k : f->kids) kids.push_back(compile(k));
        std::vector<CTerm> terms;
        for (auto& t : f->terms) {
            auto i = m.binary_index(t.role.pred);
            terms.push_back({t.coeff, i ? static_cast<int>(*i) : kNone, t.role.inverse, compile(t.body)});
        }
        nodes[id].kids = std::move(kids);
        nodes[id].terms = std::move(terms);
        if (nodes[id].memo) {
            std::uint8_t fv = nodes[id].fv;
            if (fv == 0) nodes[id].table.assign(1, -1);
            else if (fv != 3) nodes[id].table.assign(n, -1);
        }
        return id;
    }

    static int val(const int* s, Var v) { return s[v == Var::X ? 0 : 1]; }

    int need(const int* s, Var v) const {
        int a = val(s, v);
        if (a < 0) throw PreconditionError(std::string("unassigned free variable ") + var_name(v));
        return a;
    }

    template <class F>
    void for_successors(int role, bool inverse, Element a, F&& fn) {
        if (role == kNone) return;
        const auto& list = inverse ? m.predecessors(role, a) : m.successors(role, a);
        for (auto b : list) fn(b);
    }

    bool eval(int id, const int* s) {
        CNode& c = nodes[id];
        if (!c.memo) return compute(id, s);
        switch (c.fv) {
            case 0: {
                auto& slot = c.table[0];
                if (slot < 0) slot = compute(id, s);
                return slot;
            }
            case 1:
            case 2: {
                int a = need(s, c.fv == 1 ? Var::X : Var::Y);
                auto& slot = nodes[id].table[a];
                if (slot < 0) {
                    bool r = compute(id, s);
                    nodes[id].table[a] = r;
                    return r;
                }
                return slot;
            }
            default: {
                std::uint64_t key = (static_cast<std::uint64_t>(need(s, Var::X)) << 32) | need(s, Var::Y);
                auto it = c.pairs.find(key);
                if (it != c.pairs.end()) return it->second;
                bool r = compute(id, s);
                nodes[id].pairs.emplace(key, r);
                return r;
            }
        }
    }

    Int count_all(int body, Var v, const int* s) {
        int t[2] = {s[0], s[1]};
        int slot = v == Var::X ? 0 : 1;
        Int c = 0;
        for (std::size_t b = 0; b < n; ++b) {
            t[slot] = static_cast<int>(b);
            if (eval(body, t)) ++c;
        }
        return c;
    }

    bool compute(int id, const int* s) {
        // copy what we need: nodes may reallocate only during compile, never here
        const CNode& c = nodes[id];
        switch (c.kind) {
            case Kind::Top: return true;
            case Kind::Unary: {
                int a = need(s, c.v1);
                if (static_cast<std::size_t>(a) >= n) throw PreconditionError("element out of range");
                return c.pred != kNone && m.unary_at(c.pred, a);
            }
            case Kind::Binary: {
                int a = need(s, c.v1), b = need(s, c.v2);
                if (static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
                    throw PreconditionError("element out of range");
                return c.pred != kNone && m.binary_at(c.pred, a, b);
            }
            case Kind::Equal: return need(s, c.v1) == need(s, c.v2);
            case Kind::Not: return !eval(c.kids[0], s);
            case Kind::And:
                for (int k : c.kids)
                    if (!eval(k, s)) return false;
                return true;
            case Kind::Or:
                for (int k : c.kids)
                    if (eval(k, s)) return true;
                return false;
            case Kind::Implies: return !eval(c.kids[0], s) || eval(c.kids[1], s);
            case Kind::Iff: return eval(c.kids[0], s) == eval(c.kids[1], s);
            case Kind::Forall:
            case Kind::Exists: {
                bool univ = c.kind == Kind::Forall;
                int t[2] = {s[0], s[1]};
                int slot = c.v1 == Var::X ? 0 : 1;
                int body = c.kids[0];
                for (std::size_t b = 0; b < n; ++b) {
                    t[slot] = static_cast<int>(b);
                    if (eval(body, t) != univ) return !univ;
                }
                return univ;
            }
            case Kind::GlobalPct: {
                Int cnt = count_all(c.kids[0], c.v1, s);
                Int lhs = checked_mul(checked_mul(cnt, 100), c.den);
                Int rhs = checked_mul(c.num, static_cast<Int>(n));
                return cmp_holds(c.cmp, lhs, rhs);
            }
            case Kind::CountingExists: return cmp_holds(c.cmp, count_all(c.kids[0], c.v1, s), c.bound);
            case Kind::LocalPct: {
                Var anchor = other(c.v1);
                Element a = static_cast<Element>(need(s, anchor));
                int t[2] = {s[0], s[1]};
                int slot = c.v1 == Var::X ? 0 : 1;
                Int hit = 0, all = 0;
                int body = c.kids[0];
                for_successors(c.role, c.inverse, a, [&](Element b) {
                    ++all;
                    t[slot] = static_cast<int>(b);
                    if (eval(body, t)) ++hit;
                });
                Int lhs = checked_mul(checked_mul(hit, 100), c.den);
                Int rhs = checked_mul(c.num, all);
                return cmp_holds(c.cmp, lhs, rhs);
            }
            case Kind::Presburger: {
                Var anchor = other(c.v1);
                Element a = static_cast<Element>(need(s, anchor));
                int t[2] = {s[0], s[1]};
                int slot = c.v1 == Var::X ? 0 : 1;
                Int sum = 0;
                for (const auto& term : c.terms) {
                    Int hit = 0;
                    for_successors(term.role, term.inverse, a, [&](Element b) {
                        t[slot] = static_cast<int>(b);
                        if (eval(term.body, t)) ++hit;
                    });
                    sum = checked_add(sum, checked_mul(term.coeff, hit));
                }
                return cmp_holds(c.cmp, sum, c.bound);
            }
            case Kind::DegreeAtom: {
                Element a = static_cast<Element>(need(s, c.v1));
                Vec fvec(c.features, 0);
                for (auto& [b, t] : neighbour_types(m, a, c.degree->binaries)) {
                    int g = c.group_of[two_type_index(t)];
                    if (g != kNone) ++fvec[g];
                }
                if (c.degree->is_set) return member(*c.degree->set, fvec);
                Int sum = 0;
                for (std::size_t j = 0; j < fvec.size(); ++j)
                    sum = checked_add(sum, checked_mul(c.degree->coeffs[j], fvec[j]));
                return cmp_holds(c.degree->cmp, sum, c.degree->delta);
            }
        }
        return false;
    }
};

Evaluator::Evaluator(const Structure& m) : m_(m), impl_(std::make_unique<Impl>(m)) {}
Evaluator::~Evaluator() = default;

namespace {

void load(const Assignment& a, std::size_t n, int* s) {
    s[0] = a.x ? static_cast<int>(*a.x) : -1;
    s[1] = a.y ? static_cast<int>(*a.y) : -1;
    if ((a.x && *a.x >= n) || (a.y && *a.y >= n)) throw PreconditionError("element out of range");
}

}  // namespace

bool Evaluator::eval(const Formula& f, const Assignment& a) {
    int s[2];
    load(a, m_.size(), s);
    int id = impl_->compile(f);
    return impl_->eval(id, s);
}

Int Evaluator::count(const Formula& f, Var v, const Assignment& a) {
    int s[2];
    load(a, m_.size(), s);
    int id = impl_->compile(f);
    return impl_->count_all(id, v, s);
}

bool eval(const Structure& m, const Assignment& a, const Formula& f) {
    Evaluator e(m);
    return e.eval(f, a);
}

bool eval(const Structure& m, const Formula& f) { return eval(m, Assignment{}, f); }

Int count_pairs(const Structure& m, const Formula& f) {
    Evaluator e(m);
    Int c = 0;
    for (Element a = 0; a < m.size(); ++a) c = checked_add(c, e.count(f, Var::Y, Assignment::of(a)));
    return c;
}

}  // namespace fraglab
