#include "cdcl.hpp"

#include <algorithm>

namespace fraglab::detail {

namespace {

double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    double r = 1;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
}

}  // namespace

std::uint32_t Cdcl::new_var() {
    auto v = static_cast<std::uint32_t>(assign_.size());
    assign_.push_back(kUndef);
    phase_.push_back(0);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    heap_pos_.push_back(-1);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v;
}

void Cdcl::enqueue(Lit l, int reason) {
    auto v = lit_var(l);
    assign_[v] = lit_neg(l) ? 0 : 1;
    level_[v] = static_cast<int>(trail_lim_.size());
    reason_[v] = reason;
    trail_.push_back(l);
}

bool Cdcl::attach(int ci) {
    auto& c = clauses_[ci].lits;
    watches_[c[0]].push_back(ci);
    watches_[c[1]].push_back(ci);
    return true;
}

bool Cdcl::add_clause(std::vector<Lit> lits) {
    backtrack(0);
    if (unsat_) return false;
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<Lit> out;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i])) return true;  // tautology
        auto v = value(lits[i]);
        if (v == 1) return true;
        if (v == 0) continue;
        out.push_back(lits[i]);
    }
    if (out.empty()) {
        unsat_ = true;
        return false;
    }
    if (out.size() == 1) {
        enqueue(out[0], -1);
        if (propagate() >= 0) {
            unsat_ = true;
            return false;
        }
        return true;
    }
    clauses_.push_back({std::move(out), false});
    attach(static_cast<int>(clauses_.size()) - 1);
    return true;
}

int Cdcl::propagate() {
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        Lit false_lit = negate(p);
        auto& ws = watches_[false_lit];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            int ci = ws[i++];
            auto& c = clauses_[ci].lits;
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            if (value(c[0]) == 1) {
                ws[j++] = ci;
                continue;
            }
            bool found = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (value(c[k]) != 0) {
                    std::swap(c[1], c[k]);
                    watches_[c[1]].push_back(ci);
                    found = true;
                    break;
                }
            }
            if (found) continue;
            ws[j++] = ci;
            if (value(c[0]) == 0) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return ci;
            }
            enqueue(c[0], ci);
        }
        ws.resize(j);
    }
    return -1;
}

void Cdcl::bump(std::uint32_t v) {
    activity_[v] += inc_;
    if (activity_[v] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void Cdcl::decay() { inc_ /= 0.95; }

void Cdcl::analyze(int confl, std::vector<Lit>& learnt, int& back_level) {
    int path = 0;
    Lit p = 0;
    bool have_p = false;
    learnt.assign(1, 0);
    std::size_t idx = trail_.size();
    int cur = static_cast<int>(trail_lim_.size());
    do {
        auto& c = clauses_[confl].lits;
        for (std::size_t k = have_p ? 1 : 0; k < c.size(); ++k) {
            Lit q = c[k];
            auto v = lit_var(q);
            if (!seen_[v] && level_[v] > 0) {
                bump(v);
                seen_[v] = 1;
                if (level_[v] >= cur)
                    ++path;
                else
                    learnt.push_back(q);
            }
        }
        do {
            --idx;
        } while (!seen_[lit_var(trail_[idx])]);
        p = trail_[idx];
        have_p = true;
        confl = reason_[lit_var(p)];
        seen_[lit_var(p)] = 0;
        --path;
    } while (path > 0);
    learnt[0] = negate(p);
    back_level = 0;
    std::size_t best = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
        int l = level_[lit_var(learnt[k])];
        if (l > back_level) {
            back_level = l;
            best = k;
        }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[best]);
    for (auto l : learnt) seen_[lit_var(l)] = 0;
}

void Cdcl::backtrack(int level) {
    if (static_cast<int>(trail_lim_.size()) <= level) return;
    for (std::size_t i = trail_.size(); i > trail_lim_[level]; --i) {
        auto v = lit_var(trail_[i - 1]);
        phase_[v] = assign_[v];
        assign_[v] = kUndef;
        reason_[v] = -1;
        if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
}

void Cdcl::heap_insert(std::uint32_t v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

namespace {

inline bool before(const std::vector<double>& act, std::uint32_t a, std::uint32_t b) {
    if (act[a] != act[b]) return act[a] > act[b];
    return a < b;
}

}  // namespace

void Cdcl::heap_up(std::size_t i) {
    auto v = heap_[i];
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (!before(activity_, v, heap_[parent])) break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = static_cast<int>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
}

void Cdcl::heap_down(std::size_t i) {
    auto v = heap_[i];
    while (true) {
        std::size_t l = 2 * i + 1;
        if (l >= heap_.size()) break;
        std::size_t r = l + 1;
        std::size_t c = (r < heap_.size() && before(activity_, heap_[r], heap_[l])) ? r : l;
        if (!before(activity_, heap_[c], v)) break;
        heap_[i] = heap_[c];
        heap_pos_[heap_[i]] = static_cast<int>(i);
        i = c;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
}

std::uint32_t Cdcl::heap_pop() {
    auto v = heap_[0];
    heap_pos_[v] = -1;
    auto last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[last] = 0;
        heap_down(0);
    }
    return v;
}

std::uint32_t Cdcl::pick_branch() {
    while (!heap_.empty()) {
        auto v = heap_pop();
        if (assign_[v] == kUndef) return v;
    }
    return UINT32_MAX;
}

bool Cdcl::solve(const std::vector<Lit>& assumptions) {
    backtrack(0);
    if (unsat_) return false;
    if (propagate() >= 0) {
        unsat_ = true;
        return false;
    }
    int restart_no = 0;
    std::uint64_t budget = static_cast<std::uint64_t>(luby(2, restart_no) * 100);
    std::uint64_t since = 0;
    std::vector<Lit> learnt;
    while (true) {
        int confl = propagate();
        if (confl >= 0) {
            ++conflicts_;
            ++since;
            if (trail_lim_.empty()) {
                unsat_ = true;
                return false;
            }
            int back = 0;
            analyze(confl, learnt, back);
            backtrack(back);
            if (learnt.size() == 1) {
                enqueue(learnt[0], -1);
            } else {
                clauses_.push_back({learnt, true});
                int ci = static_cast<int>(clauses_.size()) - 1;
                attach(ci);
                enqueue(learnt[0], ci);
            }
            decay();
            continue;
        }
        if (since >= budget) {
            since = 0;
            budget = static_cast<std::uint64_t>(luby(2, ++restart_no) * 100);
            backtrack(0);
            continue;
        }
        std::size_t lvl = trail_lim_.size();
        if (lvl < assumptions.size()) {
            Lit a = assumptions[lvl];
            auto v = value(a);
            trail_lim_.push_back(trail_.size());
            if (v == 1) continue;
            if (v == 0) {
                backtrack(0);
                return false;
            }
            enqueue(a, -1);
            continue;
        }
        auto v = pick_branch();
        if (v == UINT32_MAX) {
            model_ = assign_;
            backtrack(0);
            return true;
        }
        trail_lim_.push_back(trail_.size());
        enqueue(mk_lit(v, phase_[v] != 1), -1);
    }
}

}  // namespace fraglab::detail
