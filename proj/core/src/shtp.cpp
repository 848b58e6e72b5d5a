#include "fraglab/shtp.hpp"
#include "fraglab/eval.hpp"

#include <algorithm>
#include <set>

namespace fraglab {

using Op = ShtpEntry::Op;

std::vector<std::string> ShtpSystem::variables() const {
    std::set<std::string> vs;
    for (auto& e : entries) {
        vs.insert(e.w);
        if (e.op != Op::Unit) {
            vs.insert(e.u);
            vs.insert(e.v);
        }
    }
    return {vs.begin(), vs.end()};
}

bool solves(const ShtpSystem& e, const ShtpSolution& s) {
    auto val = [&](const std::string& v) -> std::optional<Int> {
        auto it = s.find(v);
        if (it == s.end() || it->second < 0) return std::nullopt;
        return it->second;
    };
    for (auto& en : e.entries) {
        auto w = val(en.w);
        if (!w) return false;
        if (en.op == Op::Unit) {
            if (*w != 1) return false;
            continue;
        }
        auto u = val(en.u), v = val(en.v);
        if (!u || !v) return false;
        if (en.op == Op::Add) {
            if (checked_add(*u, *v) != *w) return false;
        } else if (checked_mul(*u, *v) != *w) {
            return false;
        }
    }
    return true;
}

std::string shtp_var_pred(const std::string& v) { return "A_" + v; }
std::string shtp_first_half(std::size_t i) { return "F" + std::to_string(i); }
std::string shtp_second_half(std::size_t i) { return "S" + std::to_string(i); }
std::string shtp_mult(std::size_t i) { return "Mult" + std::to_string(i); }

Signature shtp_signature(const ShtpSystem& e) {
    Signature sig;
    for (auto& v : e.variables()) sig.add_unary(shtp_var_pred(v));
    for (std::size_t i = 1; i <= e.entries.size(); ++i) {
        const auto& en = e.entries[i - 1];
        if (en.op == Op::Unit) continue;
        sig.add_unary(shtp_first_half(i));
        sig.add_unary(shtp_second_half(i));
        if (en.op == Op::Mul) sig.add_binary(shtp_mult(i));
    }
    return sig;
}

namespace {

const Var X = Var::X, Y = Var::Y;

Formula A(const std::string& v, Var at) { return atom(shtp_var_pred(v), at); }

Formula half50(Var v, Formula body) { return global_pct(Comparison::eq(), Rational(50), v, std::move(body)); }

Formula phi_var(const std::vector<std::string>& vars) {
    std::vector<Formula> ks;
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j) ks.push_back(neg(conj({A(vars[i], X), A(vars[j], X)})));
    return forall(X, conj(ks));
}

Formula phi_unit(const std::string& u) {
    return conj({exists(X, A(u, X)), forall(X, forall(Y, implies(conj({A(u, X), A(u, Y)}), eq(X, Y))))});
}

Formula phi_halves(std::size_t i) {
    auto f = shtp_first_half(i), s = shtp_second_half(i);
    return conj({forall(X, iff(atom(f, X), neg(atom(s, X)))), half50(X, atom(f, X))});
}

Formula phi_parti(std::size_t i, const ShtpEntry& en) {
    return forall(X, conj({implies(disj({A(en.u, X), A(en.v, X)}), atom(shtp_first_half(i), X)),
                           implies(A(en.w, X), atom(shtp_second_half(i), X))}));
}

Formula phi_add(std::size_t i, const ShtpEntry& en) {
    return half50(X, disj({A(en.w, X), conj({atom(shtp_first_half(i), X), neg(A(en.u, X)), neg(A(en.v, X))})}));
}

Formula phi_mult(std::size_t i, const ShtpEntry& en) {
    auto m = shtp_mult(i);
    auto s = shtp_second_half(i);
    Formula link = conj({forall(Y, implies(A(en.w, Y), exists(X, atom(m, X, Y)))),
                         forall(X, forall(Y, implies(atom(m, X, Y), conj({A(en.u, X), A(en.w, Y)}))))});
    Formula count = forall(
        X, implies(A(en.u, X), half50(Y, disj({conj({atom(s, Y), neg(atom(m, X, Y))}), A(en.v, Y)}))));
    Formula bfunc =
        forall(X, implies(A(en.w, X), half50(Y, disj({conj({atom(s, Y), neg(eq(X, Y))}), atom(m, Y, X)}))));
    return conj({link, count, bfunc});
}

}  // namespace

Formula phi_eq(const std::string& half, const std::string& r, const std::string& j) {
    return half50(X, disj({conj({atom(half, X), neg(atom(r, X))}), atom(j, X)}));
}

Formula shtp_encode(const ShtpSystem& e) {
    std::vector<Formula> parts{phi_var(e.variables())};
    for (std::size_t i = 1; i <= e.entries.size(); ++i) {
        const auto& en = e.entries[i - 1];
        switch (en.op) {
            case Op::Unit: parts.push_back(phi_unit(en.w)); break;
            case Op::Add:
                parts.push_back(phi_halves(i));
                parts.push_back(phi_parti(i, en));
                parts.push_back(phi_add(i, en));
                break;
            case Op::Mul:
                parts.push_back(phi_halves(i));
                parts.push_back(phi_parti(i, en));
                parts.push_back(phi_mult(i, en));
                break;
        }
    }
    return conj(std::move(parts));
}

Structure shtp_witness(const ShtpSystem& e, const ShtpSolution& s) {
    if (!solves(e, s)) throw PreconditionError("solution does not solve the system");
    auto vars = e.variables();
    Int mx = 0, total = 0;
    for (auto& v : vars) {
        mx = std::max(mx, s.at(v));
        total = checked_add(total, s.at(v));
    }
    // n even, n/2 > S(u)+S(v) for all u, v (u = v allowed), n > sum S
    Int n = checked_add(checked_mul(4, mx), 2);
    while (n <= total) n += 2;
    if (n > 1'000'000) throw PreconditionError("solution too large for a witness");
    auto N = static_cast<std::size_t>(n);
    StructureBuilder b(N, shtp_signature(e));
    std::map<std::string, std::vector<Element>> block;
    Element next = 0;
    for (auto& v : vars)
        for (Int k = 0; k < s.at(v); ++k) {
            b.set_unary(shtp_var_pred(v), next);
            block[v].push_back(next++);
        }
    for (std::size_t i = 1; i <= e.entries.size(); ++i) {
        const auto& en = e.entries[i - 1];
        if (en.op == Op::Unit) continue;
        std::vector<bool> first(N, false);
        std::size_t left = N / 2;
        for (auto* v : {&en.u, &en.v})
            for (auto a : block[*v]) {
                first[a] = true;
                --left;
            }
        std::set<Element> w(block[en.w].begin(), block[en.w].end());
        for (Element a = 0; a < N && left > 0; ++a)
            if (!first[a] && !w.count(a)) {
                first[a] = true;
                --left;
            }
        for (Element a = 0; a < N; ++a) b.set_unary(first[a] ? shtp_first_half(i) : shtp_second_half(i), a);
        if (en.op == Op::Mul) {
            const auto& us = block[en.u];
            const auto& ws = block[en.w];
            std::size_t q = static_cast<std::size_t>(s.at(en.v));
            for (std::size_t k = 0; k < us.size(); ++k)
                for (std::size_t j = 0; j < q; ++j) b.set_binary(shtp_mult(i), us[k], ws[k * q + j]);
        }
    }
    return b.build();
}

ShtpSolution shtp_extract(const Structure& m, const ShtpSystem& e) {
    Structure full = with_signature(m, shtp_signature(e));
    if (!eval(full, shtp_encode(e))) throw PreconditionError("model does not satisfy encoding");
    ShtpSolution s;
    for (auto& v : e.variables()) s[v] = static_cast<Int>(full.members(shtp_var_pred(v)).size());
    if (!solves(e, s)) throw PreconditionError("extracted values do not solve the system");
    return s;
}

}  // namespace fraglab
