#include "fraglab/semilinear.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

namespace fraglab {

SemilinearSet SemilinearSet::full(std::size_t dim) {
    LinearSet l;
    l.offset.assign(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
        Vec e(dim, 0);
        e[i] = 1;
        l.periods.push_back(e);
    }
    return {dim, {l}};
}

Int norm_inf(const Vec& v) {
    Int m = 0;
    for (auto x : v) m = std::max(m, x < 0 ? checked_sub(0, x) : x);
    return m;
}

Int matrix_norm(const EqSystem& sys) {
    Int m = 0;
    for (auto& row : sys.A) m = std::max(m, norm_inf(row));
    return m;
}

namespace {

constexpr Int kSat = std::numeric_limits<Int>::max();

Int sat_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) return kSat;
    return r;
}

Int sat_pow(Int base, std::size_t e) {
    Int r = 1;
    for (std::size_t i = 0; i < e; ++i) r = sat_mul(r, base);
    return r;
}

void check_system(const EqSystem& sys) {
    for (auto& row : sys.A)
        if (row.size() != sys.c.size())
            throw ValidationError("equation system: every row of A needs one entry per equation");
}

bool zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

bool leq(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

void check_natural(const Vec& v) {
    for (auto x : v)
        if (x < 0) throw PreconditionError("semilinear vectors must be nonnegative");
}

}  // namespace

Int offset_norm_bound(const EqSystem& sys) {
    Int m = static_cast<Int>(sys.equations());
    Int base = sat_mul(m + 1, matrix_norm(sys));
    if (base != kSat) base = base > kSat - norm_inf(sys.c) - 1 ? kSat : base + norm_inf(sys.c) + 1;
    return sat_pow(base, sys.vars());
}

Int period_norm_bound(const EqSystem& sys) {
    Int m = static_cast<Int>(sys.equations());
    Int base = sat_mul(m, matrix_norm(sys));
    if (base != kSat) base += 1;
    return sat_pow(base, sys.vars());
}

EqSolution solve_eq_system(const EqSystem& sys) {
    check_system(sys);
    const std::size_t l = sys.vars(), m = sys.equations();
    const std::size_t nv = l + 1;  // last variable is the homogenising z in {0, 1}
    std::vector<Vec> col(nv, Vec(m, 0));
    for (std::size_t j = 0; j < l; ++j) col[j] = sys.A[j];
    for (std::size_t k = 0; k < m; ++k) col[l][k] = checked_sub(0, sys.c[k]);

    Int bound = std::max(offset_norm_bound(sys), period_norm_bound(sys));
    Int level_cap = sat_mul(bound, static_cast<Int>(nv));

    std::vector<Vec> basis;
    std::map<Vec, Vec> frontier;  // vector -> defect
    for (std::size_t j = 0; j < nv; ++j) {
        Vec v(nv, 0);
        v[j] = 1;
        frontier.emplace(v, col[j]);
    }
    Int level = 1;
    while (!frontier.empty()) {
        if (level > level_cap) throw Error("internal: completion exceeded the solution norm bound");
        std::map<Vec, Vec> next;
        for (auto& [v, d] : frontier) {
            bool dominated = false;
            for (auto& b : basis)
                if (leq(b, v)) {
                    dominated = true;
                    break;
                }
            if (dominated) continue;
            if (zero(d)) {
                basis.push_back(v);
                continue;
            }
            for (std::size_t j = 0; j < nv; ++j) {
                if (j == l && v[l] == 1) continue;
                Int dot = 0;
                for (std::size_t k = 0; k < m; ++k) dot = checked_add(dot, checked_mul(d[k], col[j][k]));
                if (dot >= 0) continue;
                Vec w = v;
                ++w[j];
                if (next.count(w)) continue;
                Vec dw = d;
                for (std::size_t k = 0; k < m; ++k) dw[k] = checked_add(dw[k], col[j][k]);
                next.emplace(std::move(w), std::move(dw));
            }
        }
        frontier = std::move(next);
        ++level;
    }
    EqSolution sol;
    for (auto& b : basis) {
        Vec x(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(l));
        (b[l] == 1 ? sol.offsets : sol.periods).push_back(std::move(x));
    }
    std::sort(sol.offsets.begin(), sol.offsets.end());
    std::sort(sol.periods.begin(), sol.periods.end());
    return sol;
}

SemilinearSet to_semilinear(const EqSolution& sol, std::size_t dim) {
    SemilinearSet s{dim, {}};
    for (auto& b : sol.offsets) s.components.push_back({b, sol.periods});
    return s;
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::pair<std::size_t, Vec>& k) const {
        std::size_t h = k.first;
        for (Int x : k.second) h = h * 1000003u ^ static_cast<std::size_t>(x);
        return h;
    }
};

struct Search {
    const std::vector<Vec>& periods;
    std::unordered_set<std::pair<std::size_t, Vec>, KeyHash> failed;
    std::vector<Int> mult;
    // reach[j][i]: some period at index >= j has a positive entry i
    std::vector<std::vector<char>> reach;

    explicit Search(const std::vector<Vec>& p, std::size_t dim) : periods(p), mult(p.size(), 0) {
        reach.assign(p.size() + 1, std::vector<char>(dim, 0));
        for (std::size_t j = p.size(); j-- > 0;)
            for (std::size_t i = 0; i < dim; ++i) reach[j][i] = reach[j + 1][i] || p[j][i] > 0;
    }

    bool go(std::size_t j, Vec& r) {
        bool all_zero = true;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i] != 0) {
                all_zero = false;
                if (!reach[j][i]) return false;
            }
        }
        if (all_zero) {
            for (std::size_t k = j; k < mult.size(); ++k) mult[k] = 0;
            return true;
        }
        if (j == periods.size()) return false;
        auto key = std::make_pair(j, r);
        if (failed.count(key)) return false;
        const Vec& p = periods[j];
        Int cap = std::numeric_limits<Int>::max();
        bool positive = false;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (p[i] > 0) {
                positive = true;
                cap = std::min(cap, r[i] / p[i]);
            }
        if (!positive) cap = 0;
        Vec rr = r;
        for (Int t = 0; t <= cap; ++t) {
            mult[j] = t;
            if (go(j + 1, rr)) return true;
            for (std::size_t i = 0; i < rr.size(); ++i) rr[i] -= p[i];
        }
        failed.insert(std::move(key));
        return false;
    }
};

}  // namespace

std::optional<std::vector<Int>> linear_member_witness(const LinearSet& s, const Vec& u) {
    if (u.size() != s.offset.size()) throw PreconditionError("vector dimension does not match the set");
    Vec r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        r[i] = checked_sub(u[i], s.offset[i]);
        if (r[i] < 0) return std::nullopt;
    }
    for (auto& p : s.periods) {
        if (p.size() != u.size()) throw PreconditionError("period dimension does not match the set");
        check_natural(p);
    }
    Search search(s.periods, u.size());
    if (!search.go(0, r)) return std::nullopt;
    return search.mult;
}

std::optional<MemberWitness> member_witness(const SemilinearSet& s, const Vec& u) {
    if (u.size() != s.dim) throw PreconditionError("vector dimension does not match the set");
    for (std::size_t c = 0; c < s.components.size(); ++c)
        if (auto w = linear_member_witness(s.components[c], u)) return MemberWitness{c, std::move(*w)};
    return std::nullopt;
}

bool member(const SemilinearSet& s, const Vec& u) { return member_witness(s, u).has_value(); }

bool satisfies(const LinearConstraint& c, const Vec& u) {
    if (c.coeffs.size() != u.size()) throw PreconditionError("constraint dimension does not match the vector");
    Int sum = 0;
    for (std::size_t i = 0; i < u.size(); ++i) sum = checked_add(sum, checked_mul(c.coeffs[i], u[i]));
    return cmp_holds(c.cmp, sum, c.delta);
}

LinearSet canonical(LinearSet s) {
    std::vector<Vec> ps;
    for (auto& p : s.periods)
        if (!zero(p)) ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    // drop periods generated by the remaining ones, largest first
    for (std::size_t k = ps.size(); k-- > 0;) {
        std::vector<Vec> rest;
        for (std::size_t j = 0; j < ps.size(); ++j)
            if (j != k) rest.push_back(ps[j]);
        LinearSet probe{Vec(s.offset.size(), 0), rest};
        if (linear_member_witness(probe, ps[k])) ps = std::move(rest);
    }
    s.periods = std::move(ps);
    return s;
}

namespace {

bool offset_in(const LinearSet& b, const Vec& u) {
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] < b.offset[i]) return false;
    return linear_member_witness(b, u).has_value();
}

}  // namespace

SemilinearSet canonical(SemilinearSet s) {
    // components produced by one solve share their periods, so reduce each distinct list once
    std::map<std::vector<Vec>, std::vector<Vec>> reduced;
    for (auto& c : s.components) {
        if (c.offset.size() != s.dim) throw PreconditionError("offset dimension does not match the set");
        check_natural(c.offset);
        std::vector<Vec> key = c.periods;
        std::sort(key.begin(), key.end());
        auto it = reduced.find(key);
        if (it == reduced.end()) it = reduced.emplace(key, canonical(LinearSet{c.offset, key}).periods).first;
        c.periods = it->second;
    }
    auto less = [](const LinearSet& a, const LinearSet& b) {
        if (a.offset != b.offset) return a.offset < b.offset;
        return a.periods < b.periods;
    };
    std::sort(s.components.begin(), s.components.end(), less);
    s.components.erase(std::unique(s.components.begin(), s.components.end()), s.components.end());
    if (s.components.size() <= 4000) {
        // cone(a.periods) inside cone(b.periods), cached per pair of period lists
        std::map<std::pair<const std::vector<Vec>*, const std::vector<Vec>*>, bool> cone;
        std::map<std::vector<Vec>, const std::vector<Vec>*> ids;
        for (auto& c : s.components) ids.emplace(c.periods, &c.periods);
        auto cone_in = [&](const LinearSet& a, const LinearSet& b) {
            const auto* pa = ids.at(a.periods);
            const auto* pb = ids.at(b.periods);
            if (pa == pb) return true;
            auto key = std::make_pair(pa, pb);
            auto it = cone.find(key);
            if (it != cone.end()) return it->second;
            LinearSet cb{Vec(s.dim, 0), b.periods};
            bool ok = std::all_of(a.periods.begin(), a.periods.end(),
                                  [&](const Vec& p) { return linear_member_witness(cb, p).has_value(); });
            return cone[key] = ok;
        };
        std::vector<char> drop(s.components.size(), 0);
        for (std::size_t i = 0; i < s.components.size(); ++i)
            for (std::size_t j = 0; j < s.components.size() && !drop[i]; ++j)
                if (i != j && !drop[j] && offset_in(s.components[j], s.components[i].offset) &&
                    cone_in(s.components[i], s.components[j]))
                    drop[i] = 1;
        std::vector<LinearSet> keep;
        for (std::size_t i = 0; i < s.components.size(); ++i)
            if (!drop[i]) keep.push_back(std::move(s.components[i]));
        s.components = std::move(keep);
    }
    return s;
}

SemilinearSet project(const SemilinearSet& s, const std::vector<std::size_t>& keep) {
    for (auto k : keep)
        if (k >= s.dim) throw PreconditionError("projection coordinate out of range");
    SemilinearSet out{keep.size(), {}};
    auto sel = [&](const Vec& v) {
        Vec r;
        for (auto k : keep) r.push_back(v[k]);
        return r;
    };
    for (auto& c : s.components) {
        LinearSet l{sel(c.offset), {}};
        for (auto& p : c.periods) l.periods.push_back(sel(p));
        out.components.push_back(std::move(l));
    }
    return canonical(std::move(out));
}

namespace {

struct Atomic {
    CmpOp op;  // Eq, Le, Ge, ModEq
    Int d = 0;
    Int delta;
    const Vec* coeffs;
};

std::vector<Atomic> alternatives(const LinearConstraint& c) {
    const Vec* co = &c.coeffs;
    switch (c.cmp.op) {
        case CmpOp::Eq: return {{CmpOp::Eq, 0, c.delta, co}};
        case CmpOp::Ne:
            return {{CmpOp::Le, 0, checked_sub(c.delta, 1), co}, {CmpOp::Ge, 0, checked_add(c.delta, 1), co}};
        case CmpOp::Le: return {{CmpOp::Le, 0, c.delta, co}};
        case CmpOp::Lt: return {{CmpOp::Le, 0, checked_sub(c.delta, 1), co}};
        case CmpOp::Ge: return {{CmpOp::Ge, 0, c.delta, co}};
        case CmpOp::Gt: return {{CmpOp::Ge, 0, checked_add(c.delta, 1), co}};
        case CmpOp::ModEq: return {{CmpOp::ModEq, c.cmp.modulus, mod_floor(c.delta, c.cmp.modulus), co}};
        case CmpOp::ModNe: {
            std::vector<Atomic> out;
            for (Int r = 1; r < c.cmp.modulus; ++r)
                out.push_back({CmpOp::ModEq, c.cmp.modulus, mod_floor(checked_add(c.delta, r), c.cmp.modulus), co});
            return out;
        }
    }
    return {};
}

SemilinearSet solve_conjunct(std::size_t dim, const std::vector<Atomic>& atoms) {
    std::size_t aux = 0;
    for (auto& a : atoms) aux += a.op == CmpOp::Eq ? 0 : 1;
    EqSystem sys;
    sys.A.assign(dim + aux, Vec(atoms.size(), 0));
    sys.c.assign(atoms.size(), 0);
    std::size_t next = dim;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const auto& a = atoms[k];
        for (std::size_t i = 0; i < dim; ++i) sys.A[i][k] = (*a.coeffs)[i];
        sys.c[k] = a.delta;
        if (a.op == CmpOp::Le) sys.A[next++][k] = 1;
        if (a.op == CmpOp::Ge) sys.A[next++][k] = -1;
        if (a.op == CmpOp::ModEq) {
            // with coefficients reduced into [0, d) the left side is >= 0, so one slack suffices
            for (std::size_t i = 0; i < dim; ++i) sys.A[i][k] = mod_floor(sys.A[i][k], a.d);
            sys.A[next++][k] = -a.d;
        }
    }
    auto full = to_semilinear(solve_eq_system(sys), dim + aux);
    std::vector<std::size_t> keep(dim);
    for (std::size_t i = 0; i < dim; ++i) keep[i] = i;
    return project(full, keep);
}

}  // namespace

SemilinearSet constraints_to_semilinear(std::size_t dim, const std::vector<LinearConstraint>& cs) {
    for (auto& c : cs) {
        if (c.coeffs.size() != dim) throw ValidationError("constraint has the wrong number of coefficients");
        if (c.cmp.is_modular() && c.cmp.modulus < 2) throw ValidationError("modulus must be at least 2");
    }
    if (cs.empty()) return SemilinearSet::full(dim);
    std::vector<std::vector<Atomic>> alts;
    for (auto& c : cs) alts.push_back(alternatives(c));
    SemilinearSet out{dim, {}};
    std::vector<std::size_t> pick(cs.size(), 0);
    while (true) {
        std::vector<Atomic> conj;
        for (std::size_t i = 0; i < cs.size(); ++i) conj.push_back(alts[i][pick[i]]);
        auto part = solve_conjunct(dim, conj);
        for (auto& c : part.components) out.components.push_back(std::move(c));
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == alts[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
    }
    return canonical(std::move(out));
}

}  // namespace fraglab
