#pragma once

#include "fraglab/formula.hpp"
#include "fraglab/structure.hpp"

#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace fraglab {

struct Assignment {
    std::optional<Element> x, y;
    std::optional<Element> get(Var v) const { return v == Var::X ? x : y; }
    static Assignment of(Element a) { return {a, std::nullopt}; }
    static Assignment of(Element a, Element b) { return {a, b}; }
};

// evaluates formulas over one structure; results of quantified subformulas are memoised per assignment
// of their free variables
class Evaluator {
public:
    explicit Evaluator(const Structure& m);
    ~Evaluator();
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    bool eval(const Formula& f, const Assignment& a = {});
    // number of b such that f holds with v := b (other variable from a)
    Int count(const Formula& f, Var v, const Assignment& a = {});
    const Structure& structure() const { return m_; }

private:
    struct Impl;
    const Structure& m_;
    std::unique_ptr<Impl> impl_;
};

bool eval(const Structure& m, const Assignment& a, const Formula& f);
bool eval(const Structure& m, const Formula& f);
Int count_pairs(const Structure& m, const Formula& f);

}  // namespace fraglab
