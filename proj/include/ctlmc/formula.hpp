#pragma once

#include <memory>
#include <string>
#include <vector>

namespace ctlmc {

enum class Op {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    AX,
    EX,
    AF,
    EF,
    AG,
    EG,
    AU,
    EU,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable CTL syntax tree node. Structural equality via operator==.
struct Formula {
    Op op;
    std::string atom;  // Op::Atom only
    FormulaPtr lhs;    // unary operand / left operand
    FormulaPtr rhs;    // right operand of binary operators

    bool operator==(const Formula& other) const;
};

namespace f {
FormulaPtr constant(bool value);
FormulaPtr atom(std::string name);
FormulaPtr negation(FormulaPtr operand);
FormulaPtr conjunction(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr disjunction(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr implication(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr ax(FormulaPtr operand);
FormulaPtr ex(FormulaPtr operand);
FormulaPtr af(FormulaPtr operand);
FormulaPtr ef(FormulaPtr operand);
FormulaPtr ag(FormulaPtr operand);
FormulaPtr eg(FormulaPtr operand);
FormulaPtr au(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr eu(FormulaPtr lhs, FormulaPtr rhs);
}  // namespace f

bool equal(const FormulaPtr& a, const FormulaPtr& b);

/// Canonical text form; parse(to_string(f)) is structurally equal to f.
std::string to_string(const FormulaPtr& formula);

/// Atom names occurring in the formula, in first-occurrence order.
std::vector<std::string> atom_names(const FormulaPtr& formula);

bool contains_temporal(const FormulaPtr& formula);

/// Existential normal form: only True, Atom, Not, And, EX, EU, EG remain.
/// Semantically equivalent to the formula it was derived from.
class NormalFormula {
public:
    const FormulaPtr& root() const { return root_; }

private:
    friend NormalFormula to_enf(const FormulaPtr&);
    explicit NormalFormula(FormulaPtr root) : root_(std::move(root)) {}
    FormulaPtr root_;
};

NormalFormula to_enf(const FormulaPtr& formula);

/// True when the tree uses only the existential-fragment constructors.
bool is_enf(const FormulaPtr& formula);

}  // namespace ctlmc
