#include "fraglab/syntax.hpp"
#include "fraglab/sexpr.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace fraglab {

using ojson = nlohmann::ordered_json;

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "top", "and", "or", "not", "->", "<->", "=", "forall", "exists", "pct", "pct-rel", "count",
    "exists=", "exists<=", "exists>=", "deg-in", "deg-lin", "inv", "all"};

[[noreturn]] void fail(const std::string& msg, const SExpr& at) { throw ParseError(msg, at.span); }

Int parse_int(const SExpr& e) {
    if (e.is_list) fail("expected an integer", e);
    Int v = 0;
    const char* b = e.atom.data();
    const char* end = b + e.atom.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec == std::errc::result_out_of_range) fail("integer out of range", e);
    if (ec != std::errc() || p != end) fail("expected an integer, got '" + e.atom + "'", e);
    return v;
}

void check_name(const std::string& name, const SExpr& at, const ParseOptions& opt) {
    if (name.empty()) fail("empty predicate name", at);
    if (kKeywords.count(name)) fail("'" + name + "' is reserved and cannot name a predicate", at);
    if (name[0] == '@' && !opt.allow_reserved) fail("predicate names starting with '@' are reserved", at);
    if (std::isdigit(static_cast<unsigned char>(name[0]))) fail("predicate names cannot start with a digit", at);
    for (char c : name)
        if (c == '"' || c == '\'') fail("invalid character in predicate name", at);
}

Comparison parse_cmp(const SExpr& e) {
    if (e.is_list) fail("expected a comparison", e);
    const auto& s = e.atom;
    if (s == "=") return Comparison::eq();
    if (s == "!=") return Comparison::ne();
    if (s == "<=") return Comparison::le();
    if (s == ">=") return Comparison::ge();
    if (s == "<") return Comparison::lt();
    if (s == ">") return Comparison::gt();
    auto modular = [&](std::size_t skip, bool eq) {
        SExpr num;
        num.atom = s.substr(skip);
        num.span = e.span;
        Int d = parse_int(num);
        if (d < 2) fail("modulus must be at least 2", e);
        return eq ? Comparison::mod_eq(d) : Comparison::mod_ne(d);
    };
    if (s.rfind("mod!=", 0) == 0) return modular(5, false);
    if (s.rfind("mod=", 0) == 0) return modular(4, true);
    fail("unknown comparison '" + s + "'", e);
}

Rational parse_rational(const SExpr& e) {
    if (e.is_list) fail("malformed rational", e);
    auto slash = e.atom.find('/');
    SExpr a = e, b = e;
    a.atom = e.atom.substr(0, slash);
    b.atom = slash == std::string::npos ? "1" : e.atom.substr(slash + 1);
    Int n, d;
    try {
        n = parse_int(a);
        d = parse_int(b);
    } catch (const ParseError&) {
        fail("malformed rational '" + e.atom + "'", e);
    }
    if (d <= 0) fail("malformed rational '" + e.atom + "'", e);
    try {
        return Rational(n, d);
    } catch (const ValidationError& err) {
        fail(err.what(), e);
    }
}

Var parse_var(const SExpr& e) {
    if (e.is_atom("x")) return Var::X;
    if (e.is_atom("y")) return Var::Y;
    fail("unknown variable '" + e.to_string() + "' (only x and y)", e);
}

Var parse_binder(const SExpr& e) {
    if (!e.is_list || e.items.size() != 1) fail("expected a binder like (x)", e);
    return parse_var(e.items[0]);
}

class FormulaParser {
public:
    FormulaParser(const Signature* sig, Signature* inferred, ParseOptions opt)
        : sig_(sig), inferred_(inferred), opt_(opt) {}

    Formula parse(const SExpr& e, std::size_t depth = 0) {
        if (depth > 1500) fail("nesting too deep", e);
        if (!e.is_list) fail("expected a formula, got '" + e.atom + "'", e);
        if (e.items.empty()) fail("empty list", e);
        const SExpr& h = e.items[0];
        if (h.is_list) fail("expected an operator", h);
        const std::string& op = h.atom;
        auto arity = [&](std::size_t n) {
            if (e.items.size() != n + 1)
                fail("'" + op + "' takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"), e);
        };
        auto sub = [&](std::size_t i) { return parse(e.items[i], depth + 1); };
        if (op == "top") {
            arity(0);
            return top();
        }
        if (op == "and" || op == "or") {
            std::vector<Formula> ks;
            for (std::size_t i = 1; i < e.items.size(); ++i) ks.push_back(sub(i));
            return op == "and" ? conj(std::move(ks)) : disj(std::move(ks));
        }
        if (op == "not") {
            arity(1);
            return neg(sub(1));
        }
        if (op == "->" || op == "<->") {
            arity(2);
            Formula l = sub(1);
            Formula r = sub(2);
            return op == "->" ? implies(l, r) : iff(l, r);
        }
        if (op == "=") {
            arity(2);
            return eq(parse_var(e.items[1]), parse_var(e.items[2]));
        }
        if (op == "forall" || op == "exists") {
            arity(2);
            Var v = parse_binder(e.items[1]);
            return op == "forall" ? forall(v, sub(2)) : exists(v, sub(2));
        }
        if (op == "pct") {
            arity(4);
            Comparison c = parse_cmp(e.items[1]);
            if (c.is_modular()) fail("percentage quantifiers take =, !=, <, >, <= or >=", e.items[1]);
            Rational q = parse_rational(e.items[2]);
            return global_pct(c, q, parse_binder(e.items[3]), sub(4));
        }
        if (op == "pct-rel") {
            arity(5);
            Comparison c = parse_cmp(e.items[1]);
            if (c.is_modular()) fail("percentage quantifiers take =, !=, <, >, <= or >=", e.items[1]);
            Rational q = parse_rational(e.items[2]);
            RoleRef r = parse_role(e.items[3]);
            return local_pct(c, q, r, parse_binder(e.items[4]), sub(5));
        }
        if (op == "count") {
            arity(3);
            Comparison c = parse_cmp(e.items[1]);
            Int delta = parse_int(e.items[2]);
            const SExpr& ts = e.items[3];
            if (!ts.is_list || ts.items.empty()) fail("expected a non-empty list of terms", ts);
            std::vector<PresburgerTerm> terms;
            std::optional<Var> bound;
            for (const auto& t : ts.items) {
                if (!t.is_list || t.items.size() != 4) fail("term must look like (lambda role (y) formula)", t);
                Int lam = parse_int(t.items[0]);
                if (lam == 0) fail("Presburger coefficients must be nonzero", t.items[0]);
                RoleRef r = parse_role(t.items[1]);
                Var v = parse_binder(t.items[2]);
                if (bound && *bound != v) fail("all terms of a constraint must bind the same variable", t.items[2]);
                bound = v;
                terms.push_back({lam, r, parse(t.items[3], depth + 1)});
            }
            return presburger(*bound, std::move(terms), c, delta);
        }
        if (op == "exists=" || op == "exists<=" || op == "exists>=") {
            arity(3);
            Int k = parse_int(e.items[1]);
            if (k < 0) fail("counting bound must be nonnegative", e.items[1]);
            Comparison c = op == "exists=" ? Comparison::eq() : op == "exists<=" ? Comparison::le() : Comparison::ge();
            return counting(c, k, parse_binder(e.items[2]), sub(3));
        }
        if (op == "deg-in" || op == "deg-lin") return parse_degree(e, op == "deg-in");
        // predicate application
        if (e.items.size() == 2) {
            use_pred(h, 1);
            return atom(op, parse_var(e.items[1]));
        }
        if (e.items.size() == 3) {
            use_pred(h, 2);
            return atom(op, parse_var(e.items[1]), parse_var(e.items[2]));
        }
        if (kKeywords.count(op)) fail("malformed '" + op + "'", e);
        fail("predicate '" + op + "' must take one or two variables", e);
    }

private:
    RoleRef parse_role(const SExpr& e) {
        if (!e.is_list) {
            use_pred(e, 2);
            return {e.atom, false};
        }
        if (e.items.size() == 2 && e.items[0].is_atom("inv") && !e.items[1].is_list) {
            use_pred(e.items[1], 2);
            return {e.items[1].atom, true};
        }
        fail("expected a role: R or (inv R)", e);
    }

    void use_pred(const SExpr& at, int arity) {
        const std::string& name = at.atom;
        check_name(name, at, opt_);
        if (sig_) {
            bool un = sig_->has_unary(name), bin = sig_->has_binary(name);
            if (!un && !bin) fail("undeclared predicate '" + name + "'", at);
            if (arity == 1 && !un) fail("predicate '" + name + "' is binary", at);
            if (arity == 2 && !bin) fail("predicate '" + name + "' is unary", at);
        }
        if (inferred_) {
            if ((arity == 1 && inferred_->has_binary(name)) || (arity == 2 && inferred_->has_unary(name)))
                fail("predicate '" + name + "' used with two different arities", at);
            if (arity == 1)
                inferred_->add_unary(name);
            else
                inferred_->add_binary(name);
        }
    }

    std::vector<Int> parse_ints(const SExpr& e) {
        if (!e.is_list) fail("expected a list of integers", e);
        std::vector<Int> out;
        for (auto& i : e.items) out.push_back(parse_int(i));
        return out;
    }

    Formula parse_degree(const SExpr& e, bool is_set) {
        auto spec = std::make_shared<DegreeSpec>();
        spec->is_set = is_set;
        if (e.items.size() != (is_set ? 5u : 7u)) fail("malformed degree atom", e);
        Var v = parse_var(e.items[1]);
        if (!e.items[2].is_list) fail("expected a list of binary predicates", e.items[2]);
        for (auto& b : e.items[2].items) {
            if (b.is_list) fail("expected a predicate name", b);
            use_pred(b, 2);
            spec->binaries.push_back(b.atom);
        }
        std::size_t k = spec->binaries.size();
        if (k > 10) fail("too many binary predicates in a degree atom", e.items[2]);
        std::size_t ell = (std::size_t{1} << (2 * k)) - 1;
        const SExpr& g = e.items[3];
        std::size_t dim = ell;
        if (!g.is_atom("all")) {
            if (!g.is_list) fail("expected 'all' or a list of coordinate groups", g);
            for (auto& grp : g.items) {
                std::vector<std::uint32_t> ids;
                for (auto x : parse_ints(grp)) {
                    if (x < 0 || static_cast<std::size_t>(x) >= ell) fail("2-type index out of range", grp);
                    ids.push_back(static_cast<std::uint32_t>(x));
                }
                spec->groups.push_back(std::move(ids));
            }
            dim = spec->groups.size();
        }
        if (is_set) {
            SemilinearSet s{dim, {}};
            if (!e.items[4].is_list) fail("expected a list of linear sets", e.items[4]);
            for (auto& comp : e.items[4].items) {
                if (!comp.is_list || comp.items.size() != 2 || !comp.items[1].is_list)
                    fail("linear set must look like ((offset...) ((period...) ...))", comp);
                LinearSet l{parse_ints(comp.items[0]), {}};
                for (auto& p : comp.items[1].items) l.periods.push_back(parse_ints(p));
                if (l.offset.size() != dim) fail("offset has the wrong dimension", comp);
                for (auto& p : l.periods)
                    if (p.size() != dim) fail("period has the wrong dimension", comp);
                for (auto x : l.offset)
                    if (x < 0) fail("semilinear vectors must be nonnegative", comp);
                for (auto& p : l.periods)
                    for (auto x : p)
                        if (x < 0) fail("semilinear vectors must be nonnegative", comp);
                s.components.push_back(std::move(l));
            }
            spec->set = std::make_shared<SemilinearSet>(std::move(s));
        } else {
            spec->cmp = parse_cmp(e.items[4]);
            spec->delta = parse_int(e.items[5]);
            spec->coeffs = parse_ints(e.items[6]);
            if (spec->coeffs.size() != dim) fail("coefficient list has the wrong dimension", e.items[6]);
        }
        return degree_atom(v, spec);
    }

    const Signature* sig_;
    Signature* inferred_;
    ParseOptions opt_;
};

void print_ints(std::ostringstream& os, const std::vector<Int>& v) {
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << ')';
}

std::string role_str(const RoleRef& r) { return r.inverse ? "(inv " + r.pred + ")" : r.pred; }

std::string rational_str(const Rational& q) {
    return q.den == 1 ? std::to_string(q.num) : std::to_string(q.num) + "/" + std::to_string(q.den);
}

void print_rec(std::ostringstream& os, const Formula& f) {
    auto bind = [&](Var v) { os << '(' << var_name(v) << ") "; };
    switch (f->kind) {
        case Kind::Top: os << "(top)"; return;
        case Kind::Unary: os << '(' << f->pred << ' ' << var_name(f->v1) << ')'; return;
        case Kind::Binary: os << '(' << f->pred << ' ' << var_name(f->v1) << ' ' << var_name(f->v2) << ')'; return;
        case Kind::Equal: os << "(= " << var_name(f->v1) << ' ' << var_name(f->v2) << ')'; return;
        case Kind::Not:
            os << "(not ";
            print_rec(os, f->kids[0]);
            os << ')';
            return;
        case Kind::And:
        case Kind::Or:
            os << '(' << (f->kind == Kind::And ? "and" : "or");
            for (auto& k : f->kids) {
                os << ' ';
                print_rec(os, k);
            }
            os << ')';
            return;
        case Kind::Implies:
        case Kind::Iff:
            os << '(' << (f->kind == Kind::Implies ? "->" : "<->") << ' ';
            print_rec(os, f->kids[0]);
            os << ' ';
            print_rec(os, f->kids[1]);
            os << ')';
            return;
        case Kind::Forall:
        case Kind::Exists:
            os << '(' << (f->kind == Kind::Forall ? "forall" : "exists") << ' ';
            bind(f->v1);
            print_rec(os, f->kids[0]);
            os << ')';
            return;
        case Kind::GlobalPct:
            os << "(pct " << cmp_symbol(f->cmp) << ' ' << rational_str(f->pct) << ' ';
            bind(f->v1);
            print_rec(os, f->kids[0]);
            os << ')';
            return;
        case Kind::LocalPct:
            os << "(pct-rel " << cmp_symbol(f->cmp) << ' ' << rational_str(f->pct) << ' ' << role_str(f->role) << ' ';
            bind(f->v1);
            print_rec(os, f->kids[0]);
            os << ')';
            return;
        case Kind::Presburger:
            os << "(count " << cmp_symbol(f->cmp) << ' ' << f->bound << " (";
            for (std::size_t i = 0; i < f->terms.size(); ++i) {
                const auto& t = f->terms[i];
                os << (i ? " " : "") << '(' << t.coeff << ' ' << role_str(t.role) << ' ';
                bind(f->v1);
                print_rec(os, t.body);
                os << ')';
            }
            os << "))";
            return;
        case Kind::CountingExists: {
            const char* op = f->cmp.op == CmpOp::Eq ? "exists=" : f->cmp.op == CmpOp::Le ? "exists<=" : "exists>=";
            os << '(' << op << ' ' << f->bound << ' ';
            bind(f->v1);
            print_rec(os, f->kids[0]);
            os << ')';
            return;
        }
        case Kind::DegreeAtom: {
            const auto& d = *f->degree;
            os << '(' << (d.is_set ? "deg-in " : "deg-lin ") << var_name(f->v1) << " (";
            for (std::size_t i = 0; i < d.binaries.size(); ++i) os << (i ? " " : "") << d.binaries[i];
            os << ") ";
            if (d.groups.empty()) {
                os << "all";
            } else {
                os << '(';
                for (std::size_t i = 0; i < d.groups.size(); ++i) {
                    if (i) os << ' ';
                    print_ints(os, std::vector<Int>(d.groups[i].begin(), d.groups[i].end()));
                }
                os << ')';
            }
            os << ' ';
            if (d.is_set) {
                os << '(';
                for (std::size_t i = 0; i < d.set->components.size(); ++i) {
                    const auto& c = d.set->components[i];
                    os << (i ? " " : "") << '(';
                    print_ints(os, c.offset);
                    os << " (";
                    for (std::size_t j = 0; j < c.periods.size(); ++j) {
                        if (j) os << ' ';
                        print_ints(os, c.periods[j]);
                    }
                    os << "))";
                }
                os << "))";
            } else {
                os << cmp_symbol(d.cmp) << ' ' << d.delta << ' ';
                print_ints(os, d.coeffs);
                os << ')';
            }
            return;
        }
    }
}

SourceSpan span_at(std::string_view text, std::size_t offset) {
    SourceSpan s;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++s.line;
            s.column = 1;
        } else {
            ++s.column;
        }
    }
    s.offset = offset;
    return s;
}

ojson parse_json(std::string_view text) {
    try {
        return ojson::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), span_at(text, e.byte > 0 ? e.byte - 1 : 0));
    }
}

[[noreturn]] void jfail(const std::string& msg) { throw ParseError(msg, SourceSpan{}); }

Int json_int(const ojson& v, const std::string& what) {
    if (!v.is_number_integer()) jfail(what + " must be an integer");
    return v.get<Int>();
}

std::vector<Int> json_ints(const ojson& v, const std::string& what) {
    if (!v.is_array()) jfail(what + " must be an array of integers");
    std::vector<Int> out;
    for (auto& x : v) out.push_back(json_int(x, what));
    return out;
}

void check_struct_name(const std::string& name) {
    if (name.empty()) jfail("empty predicate name");
    for (char c : name)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';')
            jfail("invalid predicate name '" + name + "'");
}

void check_prop_name(const SExpr& at) {
    if (at.atom.empty() || kKeywords.count(at.atom) || at.atom[0] == '@' ||
        std::isdigit(static_cast<unsigned char>(at.atom[0])))
        fail("invalid proposition name '" + at.atom + "'", at);
}

bool is_ident(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig, ParseOptions opt) {
    SExpr e = read_sexpr(text);
    FormulaParser p(&sig, nullptr, opt);
    return p.parse(e);
}

Formula parse_formula(std::string_view text, ParseOptions opt) {
    SExpr e = read_sexpr(text);
    Signature inferred;
    FormulaParser p(nullptr, &inferred, opt);
    return p.parse(e);
}

Signature infer_signature(std::string_view text, ParseOptions opt) {
    SExpr e = read_sexpr(text);
    Signature inferred;
    FormulaParser p(nullptr, &inferred, opt);
    p.parse(e);
    return inferred;
}

std::string print_formula(const Formula& f) {
    std::ostringstream os;
    print_rec(os, f);
    return os.str();
}

Structure parse_structure(std::string_view text) {
    ojson j = parse_json(text);
    if (!j.is_object()) jfail("structure must be a JSON object");
    for (auto& [k, v] : j.items())
        if (k != "domain" && k != "unary" && k != "binary") jfail("unknown key '" + k + "' in structure");
    if (!j.contains("domain")) jfail("structure needs a \"domain\"");
    Int n = json_int(j["domain"], "domain");
    if (n < 0) jfail("negative domain");
    if (n > (Int{1} << 31)) jfail("domain too large");
    StructureBuilder b(static_cast<std::size_t>(n));
    auto elem = [&](const ojson& v) {
        Int a = json_int(v, "element");
        if (a < 0 || a >= n) jfail("element out of range");
        return static_cast<Element>(a);
    };
    if (j.contains("unary")) {
        if (!j["unary"].is_object()) jfail("\"unary\" must be an object");
        for (auto& [name, members] : j["unary"].items()) {
            check_struct_name(name);
            if (!members.is_array()) jfail("members of '" + name + "' must be an array");
            b.declare_unary(name);
            for (auto& a : members) b.set_unary(name, elem(a));
        }
    }
    if (j.contains("binary")) {
        if (!j["binary"].is_object()) jfail("\"binary\" must be an object");
        for (auto& [name, tuples] : j["binary"].items()) {
            check_struct_name(name);
            if (!tuples.is_array()) jfail("tuples of '" + name + "' must be an array");
            try {
                b.declare_binary(name);
            } catch (const ValidationError& e) {
                jfail(e.what());
            }
            for (auto& t : tuples) {
                if (!t.is_array() || t.size() != 2) jfail("tuples of '" + name + "' must be pairs");
                b.set_binary(name, elem(t[0]), elem(t[1]));
            }
        }
    }
    return b.build();
}

std::string print_structure(const Structure& m) {
    ojson j;
    j["domain"] = m.size();
    j["unary"] = ojson::object();
    for (auto& u : m.unary_names()) j["unary"][u] = m.members(u);
    j["binary"] = ojson::object();
    for (auto& r : m.binary_names()) {
        ojson arr = ojson::array();
        for (auto [a, b] : m.tuples(r)) arr.push_back({a, b});
        j["binary"][r] = arr;
    }
    return j.dump();
}

ConjunctiveQuery parse_query(std::string_view text) {
    SExpr e = read_sexpr(text);
    if (!e.is_list || e.items.empty() || !e.items[0].is_atom("q")) fail("query must look like (q atom ...)", e);
    if (e.items.size() < 2) fail("query must have at least one atom", e);
    ConjunctiveQuery q;
    Signature seen;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& a = e.items[i];
        if (!a.is_list || (a.items.size() != 2 && a.items.size() != 3) || a.items[0].is_list)
            fail("query atom must look like (P v) or (R v w)", a);
        check_name(a.items[0].atom, a.items[0], ParseOptions{});
        int arity = static_cast<int>(a.items.size()) - 1;
        const std::string& p = a.items[0].atom;
        if ((arity == 1 && seen.has_binary(p)) || (arity == 2 && seen.has_unary(p)))
            fail("predicate '" + p + "' used with two different arities", a);
        if (arity == 1)
            seen.add_unary(p);
        else
            seen.add_binary(p);
        QueryAtom qa{p, {}};
        for (std::size_t k = 1; k < a.items.size(); ++k) {
            const SExpr& v = a.items[k];
            if (v.is_list || !is_ident(v.atom)) fail("expected a variable name", v);
            auto it = std::find(q.vars.begin(), q.vars.end(), v.atom);
            if (it == q.vars.end()) {
                q.vars.push_back(v.atom);
                qa.args.push_back(q.vars.size() - 1);
            } else {
                qa.args.push_back(static_cast<std::size_t>(it - q.vars.begin()));
            }
        }
        q.atoms.push_back(std::move(qa));
    }
    return q;
}

std::string print_query(const ConjunctiveQuery& q) {
    std::string s = "(q";
    for (auto& a : q.atoms) {
        s += " (" + a.pred;
        for (auto v : a.args) s += " " + q.vars.at(v);
        s += ")";
    }
    return s + ")";
}

ShtpSystem parse_shtp(std::string_view text) {
    ShtpSystem e;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream is(line);
        std::vector<std::string> tok;
        for (std::string t; is >> t;) tok.push_back(t);
        SourceSpan sp{line_no, 1, 0};
        if (tok.empty()) {
            if (end == text.size()) break;
            continue;
        }
        auto var = [&](const std::string& s) {
            if (!is_ident(s)) throw ParseError("invalid variable name '" + s + "'", sp);
            return s;
        };
        if (tok.size() == 3 && tok[1] == "=" && tok[2] == "1") {
            e.entries.push_back({ShtpEntry::Op::Unit, var(tok[0]), "", ""});
        } else if (tok.size() == 5 && tok[1] == "=" && (tok[3] == "+" || tok[3] == "*")) {
            ShtpEntry en{tok[3] == "+" ? ShtpEntry::Op::Add : ShtpEntry::Op::Mul, var(tok[0]), var(tok[2]),
                         var(tok[4])};
            if (en.w == en.u || en.w == en.v || en.u == en.v)
                throw ParseError("variables must be pairwise distinct", sp);
            e.entries.push_back(en);
        } else {
            throw ParseError("expected 'w = 1', 'w = u + v' or 'w = u * v'", sp);
        }
        if (end == text.size()) break;
    }
    if (e.entries.empty()) throw ParseError("empty system", SourceSpan{});
    return e;
}

std::string print_shtp(const ShtpSystem& e) {
    std::string s;
    for (auto& en : e.entries) {
        if (en.op == ShtpEntry::Op::Unit)
            s += en.w + " = 1\n";
        else
            s += en.w + " = " + en.u + (en.op == ShtpEntry::Op::Add ? " + " : " * ") + en.v + "\n";
    }
    return s;
}

ShtpSolution parse_solution(std::string_view text) {
    ojson j = parse_json(text);
    if (!j.is_object()) jfail("solution must be a JSON object");
    ShtpSolution s;
    for (auto& [k, v] : j.items()) {
        Int x = json_int(v, "value of '" + k + "'");
        if (x < 0) jfail("solution values must be natural numbers");
        s[k] = x;
    }
    return s;
}

std::string print_solution(const ShtpSolution& s) {
    ojson j = ojson::object();
    for (auto& [k, v] : s) j[k] = v;
    return j.dump();
}

SemilinearSet parse_semilinear(std::string_view text) {
    ojson j = parse_json(text);
    if (!j.is_object() || !j.contains("l") || !j.contains("components"))
        jfail("semilinear set needs \"l\" and \"components\"");
    Int l = json_int(j["l"], "l");
    if (l < 0) jfail("dimension must be nonnegative");
    SemilinearSet s{static_cast<std::size_t>(l), {}};
    if (!j["components"].is_array()) jfail("\"components\" must be an array");
    for (auto& c : j["components"]) {
        if (!c.is_object() || !c.contains("offset")) jfail("component needs an \"offset\"");
        LinearSet ls{json_ints(c["offset"], "offset"), {}};
        if (c.contains("periods")) {
            if (!c["periods"].is_array()) jfail("\"periods\" must be an array");
            for (auto& p : c["periods"]) ls.periods.push_back(json_ints(p, "period"));
        }
        if (ls.offset.size() != s.dim) jfail("offset has the wrong dimension");
        for (auto& p : ls.periods)
            if (p.size() != s.dim) jfail("period has the wrong dimension");
        for (auto x : ls.offset)
            if (x < 0) jfail("semilinear vectors must be nonnegative");
        for (auto& p : ls.periods)
            for (auto x : p)
                if (x < 0) jfail("semilinear vectors must be nonnegative");
        s.components.push_back(std::move(ls));
    }
    return s;
}

std::string print_semilinear(const SemilinearSet& s) {
    ojson j;
    j["l"] = s.dim;
    j["components"] = ojson::array();
    for (auto& c : s.components) {
        ojson o;
        o["offset"] = c.offset;
        o["periods"] = ojson::array();
        for (auto& p : c.periods) o["periods"].push_back(p);
        j["components"].push_back(o);
    }
    return j.dump();
}

EqSystem parse_eq_system(std::string_view text) {
    ojson j = parse_json(text);
    if (!j.is_object() || !j.contains("A") || !j.contains("c")) jfail("equation system needs \"A\" and \"c\"");
    EqSystem sys;
    sys.c = json_ints(j["c"], "c");
    if (!j["A"].is_array() || j["A"].empty()) jfail("\"A\" must be a non-empty array of rows");
    for (auto& row : j["A"]) {
        sys.A.push_back(json_ints(row, "row of A"));
        if (sys.A.back().size() != sys.c.size()) jfail("every row of A needs one entry per equation");
    }
    return sys;
}

std::string print_eq_system(const EqSystem& sys) {
    ojson j;
    j["A"] = ojson::array();
    for (auto& r : sys.A) j["A"].push_back(r);
    j["c"] = sys.c;
    return j.dump();
}

std::string print_eq_solution(const EqSolution& sol) {
    ojson j;
    j["B"] = ojson::array();
    for (auto& b : sol.offsets) j["B"].push_back(b);
    j["P"] = ojson::array();
    for (auto& p : sol.periods) j["P"].push_back(p);
    return j.dump();
}

namespace {

Pml parse_pml_rec(const SExpr& e, std::size_t depth) {
    if (depth > 1500) fail("nesting too deep", e);
    if (!e.is_list) {
        check_prop_name(e);
        return pml_prop(e.atom);
    }
    if (e.items.empty() || e.items[0].is_list) fail("expected an operator", e);
    const std::string& op = e.items[0].atom;
    if (op == "top") {
        if (e.items.size() != 1) fail("'top' takes no arguments", e);
        return pml_top();
    }
    if (op == "not") {
        if (e.items.size() != 2) fail("'not' takes 1 argument", e);
        return pml_not(parse_pml_rec(e.items[1], depth + 1));
    }
    if (op == "and" || op == "or") {
        std::vector<Pml> ks;
        for (std::size_t i = 1; i < e.items.size(); ++i) ks.push_back(parse_pml_rec(e.items[i], depth + 1));
        return op == "and" ? pml_and(std::move(ks)) : pml_or(std::move(ks));
    }
    if (op == "count") {
        if (e.items.size() != 4) fail("'count' takes a comparison, a bound and a term list", e);
        Comparison c = parse_cmp(e.items[1]);
        Int b = parse_int(e.items[2]);
        const SExpr& ts = e.items[3];
        if (!ts.is_list || ts.items.empty()) fail("expected a non-empty list of terms", ts);
        std::vector<PmlTerm> terms;
        for (auto& t : ts.items) {
            if (!t.is_list || t.items.size() != 3) fail("term must look like (a S formula)", t);
            const SExpr& s = t.items[1];
            RoleRef role;
            if (!s.is_list) {
                role.pred = s.atom;
            } else if (s.items.size() == 2 && s.items[0].is_atom("inv") && !s.items[1].is_list) {
                role = {s.items[1].atom, true};
            } else {
                fail("relation must be R or (inv R)", s);
            }
            check_name(role.pred, s, ParseOptions{});
            terms.push_back({parse_int(t.items[0]), role, parse_pml_rec(t.items[2], depth + 1)});
        }
        return pml_count(std::move(terms), c, b);
    }
    fail("unknown modal operator '" + op + "'", e);
}

void print_pml_rec(std::ostringstream& os, const Pml& f) {
    switch (f->kind) {
        case PmlNode::Kind::Top: os << "(top)"; return;
        case PmlNode::Kind::Prop: os << f->prop; return;
        case PmlNode::Kind::Not:
            os << "(not ";
            print_pml_rec(os, f->kids[0]);
            os << ')';
            return;
        case PmlNode::Kind::And:
        case PmlNode::Kind::Or:
            os << '(' << (f->kind == PmlNode::Kind::And ? "and" : "or");
            for (auto& k : f->kids) {
                os << ' ';
                print_pml_rec(os, k);
            }
            os << ')';
            return;
        case PmlNode::Kind::Count:
            os << "(count " << cmp_symbol(f->cmp) << ' ' << f->bound << " (";
            for (std::size_t i = 0; i < f->terms.size(); ++i) {
                os << (i ? " " : "") << '(' << f->terms[i].coeff << ' ';
                const auto& r = f->terms[i].role;
                os << (r.inverse ? "(inv " + r.pred + ")" : r.pred) << ' ';
                print_pml_rec(os, f->terms[i].body);
                os << ')';
            }
            os << "))";
            return;
    }
}

}  // namespace

Pml parse_pml(std::string_view text) { return parse_pml_rec(read_sexpr(text), 0); }

std::string print_pml(const Pml& f) {
    std::ostringstream os;
    print_pml_rec(os, f);
    return os.str();
}

}  // namespace fraglab
