#include "ctlmc/formula.hpp"

#include <algorithm>

namespace ctlmc {

bool Formula::operator==(const Formula& other) const {
    if (op != other.op) return false;
    if (op == Op::Atom) return atom == other.atom;
    if (lhs && !equal(lhs, other.lhs)) return false;
    if (!lhs && other.lhs) return false;
    if (rhs && !equal(rhs, other.rhs)) return false;
    if (!rhs && other.rhs) return false;
    return true;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

namespace f {

namespace {
FormulaPtr node(Op op, FormulaPtr lhs = nullptr, FormulaPtr rhs = nullptr) {
    return std::make_shared<Formula>(Formula{op, {}, std::move(lhs), std::move(rhs)});
}
}  // namespace

FormulaPtr constant(bool value) { return node(value ? Op::True : Op::False); }
FormulaPtr atom(std::string name) {
    return std::make_shared<Formula>(Formula{Op::Atom, std::move(name), nullptr, nullptr});
}
FormulaPtr negation(FormulaPtr operand) { return node(Op::Not, std::move(operand)); }
FormulaPtr conjunction(FormulaPtr lhs, FormulaPtr rhs) {
    return node(Op::And, std::move(lhs), std::move(rhs));
}
FormulaPtr disjunction(FormulaPtr lhs, FormulaPtr rhs) {
    return node(Op::Or, std::move(lhs), std::move(rhs));
}
FormulaPtr implication(FormulaPtr lhs, FormulaPtr rhs) {
    return node(Op::Implies, std::move(lhs), std::move(rhs));
}
FormulaPtr ax(FormulaPtr operand) { return node(Op::AX, std::move(operand)); }
FormulaPtr ex(FormulaPtr operand) { return node(Op::EX, std::move(operand)); }
FormulaPtr af(FormulaPtr operand) { return node(Op::AF, std::move(operand)); }
FormulaPtr ef(FormulaPtr operand) { return node(Op::EF, std::move(operand)); }
FormulaPtr ag(FormulaPtr operand) { return node(Op::AG, std::move(operand)); }
FormulaPtr eg(FormulaPtr operand) { return node(Op::EG, std::move(operand)); }
FormulaPtr au(FormulaPtr lhs, FormulaPtr rhs) { return node(Op::AU, std::move(lhs), std::move(rhs)); }
FormulaPtr eu(FormulaPtr lhs, FormulaPtr rhs) { return node(Op::EU, std::move(lhs), std::move(rhs)); }

}  // namespace f

namespace {

const char* binary_symbol(Op op) {
    switch (op) {
        case Op::And: return " & ";
        case Op::Or: return " | ";
        case Op::Implies: return " -> ";
        default: return nullptr;
    }
}

const char* unary_name(Op op) {
    switch (op) {
        case Op::AX: return "AX";
        case Op::EX: return "EX";
        case Op::AF: return "AF";
        case Op::EF: return "EF";
        case Op::AG: return "AG";
        case Op::EG: return "EG";
        default: return nullptr;
    }
}

void print(const FormulaPtr& formula, std::string& out) {
    switch (formula->op) {
        case Op::True: out += "true"; return;
        case Op::False: out += "false"; return;
        case Op::Atom: out += formula->atom; return;
        case Op::Not:
            out += "!";
            print(formula->lhs, out);
            return;
        case Op::AU:
        case Op::EU:
            out += formula->op == Op::AU ? "A [" : "E [";
            print(formula->lhs, out);
            out += " U ";
            print(formula->rhs, out);
            out += "]";
            return;
        case Op::And:
        case Op::Or:
        case Op::Implies:
            out += "(";
            print(formula->lhs, out);
            out += binary_symbol(formula->op);
            print(formula->rhs, out);
            out += ")";
            return;
        default:
            out += unary_name(formula->op);
            out += " ";
            print(formula->lhs, out);
            return;
    }
}

void collect_atoms(const FormulaPtr& formula, std::vector<std::string>& out) {
    if (!formula) return;
    if (formula->op == Op::Atom) {
        if (std::find(out.begin(), out.end(), formula->atom) == out.end())
            out.push_back(formula->atom);
        return;
    }
    collect_atoms(formula->lhs, out);
    collect_atoms(formula->rhs, out);
}

}  // namespace

std::string to_string(const FormulaPtr& formula) {
    std::string out;
    print(formula, out);
    return out;
}

std::vector<std::string> atom_names(const FormulaPtr& formula) {
    std::vector<std::string> out;
    collect_atoms(formula, out);
    return out;
}

bool contains_temporal(const FormulaPtr& formula) {
    if (!formula) return false;
    switch (formula->op) {
        case Op::True:
        case Op::False:
        case Op::Atom: return false;
        case Op::Not:
        case Op::And:
        case Op::Or:
        case Op::Implies:
            return contains_temporal(formula->lhs) || contains_temporal(formula->rhs);
        default: return true;
    }
}

namespace {

FormulaPtr enf(const FormulaPtr& x) {
    using namespace f;
    switch (x->op) {
        case Op::True: return x;
        case Op::False: return negation(constant(true));
        case Op::Atom: return x;
        case Op::Not: return negation(enf(x->lhs));
        case Op::And: return conjunction(enf(x->lhs), enf(x->rhs));
        case Op::Or: return negation(conjunction(negation(enf(x->lhs)), negation(enf(x->rhs))));
        case Op::Implies: return negation(conjunction(enf(x->lhs), negation(enf(x->rhs))));
        case Op::EX: return ex(enf(x->lhs));
        case Op::AX: return negation(ex(negation(enf(x->lhs))));
        case Op::EF: return eu(constant(true), enf(x->lhs));
        case Op::AF: return negation(eg(negation(enf(x->lhs))));
        case Op::EG: return eg(enf(x->lhs));
        case Op::AG: return negation(eu(constant(true), negation(enf(x->lhs))));
        case Op::EU: return eu(enf(x->lhs), enf(x->rhs));
        case Op::AU: {
            // A[f U g] == !(E[!g U (!f & !g)] | EG !g)
            FormulaPtr nf = negation(enf(x->lhs));
            FormulaPtr ng = negation(enf(x->rhs));
            return conjunction(negation(eu(ng, conjunction(nf, ng))), negation(eg(ng)));
        }
    }
    return x;  // unreachable
}

}  // namespace

NormalFormula to_enf(const FormulaPtr& formula) { return NormalFormula(enf(formula)); }

bool is_enf(const FormulaPtr& formula) {
    if (!formula) return true;
    switch (formula->op) {
        case Op::True:
        case Op::Atom: return true;
        case Op::Not:
        case Op::EX:
        case Op::EG: return is_enf(formula->lhs);
        case Op::And:
        case Op::EU: return is_enf(formula->lhs) && is_enf(formula->rhs);
        default: return false;
    }
}

}  // namespace ctlmc
