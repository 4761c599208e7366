#pragma once

#include "ctlmc/formula.hpp"

#include <string>
#include <vector>

namespace ctlmc {

/// One SPEC line from a spec file (or from the built-in suite).
struct SpecEntry {
    std::string name;         // optional label; empty when the line had none
    std::string source_text;  // formula text as written; reparses to `formula`
    FormulaPtr formula;
    bool probe = false;  // informational entry: reported, but never fails a run
};

/// Parses one formula. Grammar (loosest binding last): unary temporal and `!`,
/// then `&`, `|`, `->` (right-associative). Comparison atoms like
/// `light0.wait <= 54` fold into a single atom named `light0.wait<=54`.
/// Throws SyntaxError with 1-based line/column and the expected-token set.
FormulaPtr parse_formula(const std::string& text);

/// Parses a line-oriented spec file: `--` comments and blank lines are
/// ignored; every other line must read `SPEC [name :] formula`. Order is
/// preserved. Throws SyntaxError carrying the offending line number.
std::vector<SpecEntry> parse_spec_file(const std::string& text);

}  // namespace ctlmc
