#include "fraglab/sat.hpp"
#include "fraglab/fragment.hpp"

#include "cdcl.hpp"

#include <functional>
#include <map>
#include <unordered_map>

namespace fraglab {

namespace {

using detail::Cdcl;
using detail::Lit;
using detail::mk_lit;
using detail::negate;

struct VecHash {
    std::size_t operator()(const std::vector<Lit>& v) const {
        std::size_t h = v.size();
        for (auto l : v) h = h * 1000003u ^ l;
        return h;
    }
};

class Grounder {
public:
    Grounder(Cdcl& s, const Signature& sig, std::size_t n) : s_(s), sig_(sig), n_(n) {
        true_ = mk_lit(s_.new_var());
        s_.add_clause({true_});
        for (std::size_t p = 0; p < sig.unary().size(); ++p) {
            unary_[sig.unary()[p]] = static_cast<std::uint32_t>(table_.size());
            for (std::size_t a = 0; a < n; ++a) table_.push_back(s_.new_var());
        }
        for (std::size_t r = 0; r < sig.binary().size(); ++r) {
            binary_[sig.binary()[r]] = static_cast<std::uint32_t>(table_.size());
            for (std::size_t i = 0; i < n * n; ++i) table_.push_back(s_.new_var());
        }
    }

    const std::vector<std::uint32_t>& table() const { return table_; }

    Lit ground(const Formula& f) {
        keep_.push_back(f);
        return rec(f.get(), -1, -1);
    }

    Structure decode() const {
        StructureBuilder b(n_, sig_);
        for (auto& u : sig_.unary()) {
            auto base = unary_.at(u);
            for (std::size_t a = 0; a < n_; ++a)
                if (s_.model_value(table_[base + a])) b.set_unary(u, static_cast<Element>(a));
        }
        for (auto& r : sig_.binary()) {
            auto base = binary_.at(r);
            for (std::size_t a = 0; a < n_; ++a)
                for (std::size_t c = 0; c < n_; ++c)
                    if (s_.model_value(table_[base + a * n_ + c]))
                        b.set_binary(r, static_cast<Element>(a), static_cast<Element>(c));
        }
        return b.build();
    }

private:
    Lit T() const { return true_; }
    Lit F() const { return negate(true_); }

    Lit and_gate(std::vector<Lit> ls) {
        std::vector<Lit> out;
        std::sort(ls.begin(), ls.end());
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (ls[i] == T()) continue;
            if (ls[i] == F()) return F();
            if (!out.empty() && out.back() == ls[i]) continue;
            if (!out.empty() && out.back() == negate(ls[i])) return F();
            out.push_back(ls[i]);
        }
        if (out.empty()) return T();
        if (out.size() == 1) return out[0];
        auto it = and_cache_.find(out);
        if (it != and_cache_.end()) return it->second;
        Lit g = mk_lit(s_.new_var());
        std::vector<Lit> big{g};
        for (auto l : out) {
            s_.add_clause({negate(g), l});
            big.push_back(negate(l));
        }
        s_.add_clause(big);
        and_cache_.emplace(out, g);
        return g;
    }

    Lit or_gate(std::vector<Lit> ls) {
        for (auto& l : ls) l = negate(l);
        return negate(and_gate(std::move(ls)));
    }

    Lit iff_gate(Lit a, Lit b) {
        if (a == T()) return b;
        if (a == F()) return negate(b);
        if (b == T()) return a;
        if (b == F()) return negate(a);
        if (a == b) return T();
        if (a == negate(b)) return F();
        Lit g = mk_lit(s_.new_var());
        s_.add_clause({negate(g), negate(a), b});
        s_.add_clause({negate(g), a, negate(b)});
        s_.add_clause({g, a, b});
        s_.add_clause({g, negate(a), negate(b)});
        return g;
    }

    // sum of weights of the true items satisfies `ok`
    Lit sum_gate(const std::vector<std::pair<Lit, Int>>& items, const std::function<bool(Int)>& ok) {
        std::map<Int, Lit> cur{{0, T()}};
        for (auto [l, w] : items) {
            if (w == 0 || l == F()) continue;
            std::map<Int, std::vector<Lit>> acc;
            for (auto& [sum, g] : cur) {
                if (l == T()) {
                    acc[checked_add(sum, w)].push_back(g);
                    continue;
                }
                acc[sum].push_back(and_gate({g, negate(l)}));
                acc[checked_add(sum, w)].push_back(and_gate({g, l}));
            }
            cur.clear();
            for (auto& [sum, gs] : acc) {
                Lit g = or_gate(gs);
                if (g != F()) cur[sum] = g;
            }
        }
        std::vector<Lit> good;
        for (auto& [sum, g] : cur)
            if (ok(sum)) good.push_back(g);
        return or_gate(good);
    }

    Lit unary_lit(const std::string& p, int a) const {
        auto it = unary_.find(p);
        if (it == unary_.end()) throw ValidationError("undeclared predicate '" + p + "'");
        return mk_lit(table_[it->second + a]);
    }

    Lit binary_lit(const std::string& r, int a, int b) const {
        auto it = binary_.find(r);
        if (it == binary_.end()) throw ValidationError("undeclared predicate '" + r + "'");
        return mk_lit(table_[it->second + static_cast<std::size_t>(a) * n_ + b]);
    }

    Lit role_lit(const RoleRef& r, int anchor, int b) const {
        return r.inverse ? binary_lit(r.pred, b, anchor) : binary_lit(r.pred, anchor, b);
    }

    static int get(Var v, int x, int y) { return v == Var::X ? x : y; }

    Lit rec(const Node* f, int x, int y) {
        auto need = [&](Var v) {
            int a = get(v, x, y);
            if (a < 0) throw PreconditionError("bounded_sat needs a sentence");
            return a;
        };
        auto it = memo_.find(f);
        std::uint64_t sub = (static_cast<std::uint64_t>(x + 1) << 32) | static_cast<std::uint32_t>(y + 1);
        if (it != memo_.end()) {
            auto jt = it->second.find(sub);
            if (jt != it->second.end()) return jt->second;
        }
        Lit out = T();
        auto bind = [&](Var v, int b, int& nx, int& ny) {
            nx = x;
            ny = y;
            (v == Var::X ? nx : ny) = b;
        };
        switch (f->kind) {
            case Kind::Top: out = T(); break;
            case Kind::Unary: out = unary_lit(f->pred, need(f->v1)); break;
            case Kind::Binary: out = binary_lit(f->pred, need(f->v1), need(f->v2)); break;
            case Kind::Equal: out = need(f->v1) == need(f->v2) ? T() : F(); break;
            case Kind::Not: out = negate(rec(f->kids[0].get(), x, y)); break;
            case Kind::And:
            case Kind::Or: {
                std::vector<Lit> ls;
                for (auto& k : f->kids) ls.push_back(rec(k.get(), x, y));
                out = f->kind == Kind::And ? and_gate(ls) : or_gate(ls);
                break;
            }
            case Kind::Implies:
                out = or_gate({negate(rec(f->kids[0].get(), x, y)), rec(f->kids[1].get(), x, y)});
                break;
            case Kind::Iff: out = iff_gate(rec(f->kids[0].get(), x, y), rec(f->kids[1].get(), x, y)); break;
            case Kind::Forall:
            case Kind::Exists: {
                std::vector<Lit> ls;
                for (std::size_t b = 0; b < n_; ++b) {
                    int nx, ny;
                    bind(f->v1, static_cast<int>(b), nx, ny);
                    ls.push_back(rec(f->kids[0].get(), nx, ny));
                }
                out = f->kind == Kind::Forall ? and_gate(ls) : or_gate(ls);
                break;
            }
            case Kind::GlobalPct:
            case Kind::CountingExists: {
                std::vector<std::pair<Lit, Int>> items;
                for (std::size_t b = 0; b < n_; ++b) {
                    int nx, ny;
                    bind(f->v1, static_cast<int>(b), nx, ny);
                    items.emplace_back(rec(f->kids[0].get(), nx, ny), 1);
                }
                if (f->kind == Kind::CountingExists) {
                    Int k = f->bound;
                    Comparison c = f->cmp;
                    out = sum_gate(items, [c, k](Int s) { return cmp_holds(c, s, k); });
                } else {
                    Int scale = checked_mul(100, f->pct.den);
                    Int rhs = checked_mul(f->pct.num, static_cast<Int>(n_));
                    Comparison c = f->cmp;
                    out = sum_gate(items, [=](Int s) { return cmp_holds(c, checked_mul(s, scale), rhs); });
                }
                break;
            }
            case Kind::LocalPct: {
                int a = need(other(f->v1));
                std::vector<std::pair<Lit, Int>> items;
                Int scale = checked_mul(100, f->pct.den);
                for (std::size_t b = 0; b < n_; ++b) {
                    int nx, ny;
                    bind(f->v1, static_cast<int>(b), nx, ny);
                    Lit r = role_lit(f->role, a, static_cast<int>(b));
                    items.emplace_back(and_gate({r, rec(f->kids[0].get(), nx, ny)}), scale);
                    items.emplace_back(r, -f->pct.num);
                }
                Comparison c = f->cmp;
                out = sum_gate(items, [c](Int s) { return cmp_holds(c, s, 0); });
                break;
            }
            case Kind::Presburger: {
                int a = need(other(f->v1));
                std::vector<std::pair<Lit, Int>> items;
                for (auto& t : f->terms)
                    for (std::size_t b = 0; b < n_; ++b) {
                        int nx, ny;
                        bind(f->v1, static_cast<int>(b), nx, ny);
                        Lit r = role_lit(t.role, a, static_cast<int>(b));
                        items.emplace_back(and_gate({r, rec(t.body.get(), nx, ny)}), t.coeff);
                    }
                Comparison c = f->cmp;
                Int d = f->bound;
                out = sum_gate(items, [c, d](Int s) { return cmp_holds(c, s, d); });
                break;
            }
            case Kind::DegreeAtom: throw PreconditionError("degree atoms are not supported by bounded_sat");
        }
        memo_[f][sub] = out;
        return out;
    }

    Cdcl& s_;
    const Signature& sig_;
    std::size_t n_;
    Lit true_;
    std::unordered_map<std::string, std::uint32_t> unary_, binary_;
    std::vector<std::uint32_t> table_;
    std::unordered_map<std::vector<Lit>, Lit, VecHash> and_cache_;
    std::unordered_map<const Node*, std::unordered_map<std::uint64_t, Lit>> memo_;
    std::vector<Formula> keep_;
};

void precheck(const Formula& f, const Signature& sig) {
    validate(f, sig);  // throws on undeclared predicates
    if (!is_sentence(f)) throw PreconditionError("bounded_sat needs a sentence (formula has free variables)");
}

}  // namespace

std::optional<Structure> bounded_sat_exact(const Formula& f, const Signature& sig, std::size_t n) {
    precheck(f, sig);
    if (n == 0) throw PreconditionError("domain size must be at least 1");
    Cdcl s;
    Grounder g(s, sig, n);
    Lit root = g.ground(f);
    if (!s.add_clause({root})) return std::nullopt;
    if (!s.solve()) return std::nullopt;
    // lexicographic minimisation over the predicate table
    std::vector<Lit> fixed;
    std::vector<char> cur;
    for (auto v : g.table()) cur.push_back(s.model_value(v));
    for (std::size_t i = 0; i < g.table().size(); ++i) {
        auto v = g.table()[i];
        if (!cur[i]) {
            fixed.push_back(mk_lit(v, true));
            continue;
        }
        auto trial = fixed;
        trial.push_back(mk_lit(v, true));
        if (s.solve(trial)) {
            fixed = std::move(trial);
            for (std::size_t j = 0; j < g.table().size(); ++j) cur[j] = s.model_value(g.table()[j]);
        } else {
            fixed.push_back(mk_lit(v, false));
        }
    }
    if (!s.solve(fixed)) throw Error("internal: lexicographic minimisation lost the model");
    return g.decode();
}

std::optional<Structure> bounded_sat(const Formula& f, const Signature& sig, std::size_t max_n) {
    precheck(f, sig);
    for (std::size_t n = 1; n <= max_n; ++n)
        if (auto m = bounded_sat_exact(f, sig, n)) return m;
    return std::nullopt;
}

std::vector<Structure> enumerate_models(const Formula& f, const Signature& sig, std::size_t n, std::size_t limit) {
    precheck(f, sig);
    if (n == 0) throw PreconditionError("domain size must be at least 1");
    std::vector<Structure> out;
    Cdcl s;
    Grounder g(s, sig, n);
    if (!s.add_clause({g.ground(f)})) return out;
    while (out.size() < limit && s.solve()) {
        out.push_back(g.decode());
        std::vector<Lit> block;
        for (auto v : g.table()) block.push_back(mk_lit(v, s.model_value(v)));
        if (block.empty() || !s.add_clause(block)) break;
    }
    return out;
}

}  // namespace fraglab
