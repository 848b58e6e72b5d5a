#pragma once

#include <cstdint>
#include <vector>

namespace fraglab::detail {

// literal = 2*var + (negated ? 1 : 0)
using Lit = std::uint32_t;
inline Lit mk_lit(std::uint32_t var, bool negated = false) { return 2 * var + (negated ? 1u : 0u); }
inline Lit negate(Lit l) { return l ^ 1u; }
inline std::uint32_t lit_var(Lit l) { return l >> 1; }
inline bool lit_neg(Lit l) { return l & 1u; }

class Cdcl {
public:
    std::uint32_t new_var();
    std::uint32_t vars() const { return static_cast<std::uint32_t>(assign_.size()); }
    // returns false if the clause set became trivially unsatisfiable
    bool add_clause(std::vector<Lit> lits);
    bool solve(const std::vector<Lit>& assumptions = {});
    bool model_value(std::uint32_t var) const { return model_[var] == 1; }
    std::uint64_t conflicts() const { return conflicts_; }

private:
    enum : std::int8_t { kUndef = -1 };
    struct Clause {
        std::vector<Lit> lits;
        bool learnt = false;
    };

    std::int8_t value(Lit l) const {
        std::int8_t v = assign_[lit_var(l)];
        if (v == kUndef) return kUndef;
        return lit_neg(l) ? static_cast<std::int8_t>(1 - v) : v;
    }
    void enqueue(Lit l, int reason);
    int propagate();
    void analyze(int confl, std::vector<Lit>& learnt, int& back_level);
    void backtrack(int level);
    void bump(std::uint32_t v);
    void decay();
    std::uint32_t pick_branch();
    void heap_insert(std::uint32_t v);
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    std::uint32_t heap_pop();
    bool attach(int ci);

    std::vector<Clause> clauses_;
    std::vector<std::vector<int>> watches_;  // per literal: clauses watching its negation becoming false
    std::vector<std::int8_t> assign_;
    std::vector<std::int8_t> phase_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<double> activity_;
    double inc_ = 1.0;
    std::vector<std::uint32_t> heap_;
    std::vector<int> heap_pos_;
    std::vector<std::int8_t> model_;
    std::vector<char> seen_;
    bool unsat_ = false;
    std::uint64_t conflicts_ = 0;
};

}  // namespace fraglab::detail
