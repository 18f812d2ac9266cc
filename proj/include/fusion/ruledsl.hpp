#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fusion/core.hpp"

namespace fusion {

struct RuleSource {
    std::string text;
    std::string origin;  // file path or catalog name
};

// Expression tree over {literal, variable n, +, -, *, ^}.
class IntExpr {
public:
    enum class Kind { Lit, Var, Add, Sub, Mul, Pow };

    static IntExpr lit(BigInt v);
    static IntExpr var();
    static IntExpr binary(Kind k, IntExpr lhs, IntExpr rhs);

    // Parse a standalone expression like "10^n" or "2*n+1".
    static IntExpr parse(const std::string& text);

    // Evaluate at level n; intermediate results are capped at bit_bound
    // bits to keep runaway exponents from exhausting memory.
    BigInt eval(const BigInt& n, int bit_bound = 4096) const;

    std::string str() const;
    bool is_literal() const;

    struct Node;

private:
    std::shared_ptr<const Node> node_;
};

// ---- parsed rule description ----

struct TileDecl {
    std::string label;
    BigRat width = 1;
    BigRat height = 1;  // meaningful only in dimension 2
    bool has_size = false;
};

struct BodyItem {
    std::string name;
    std::optional<IntExpr> reps;  // 1-D repetition exponent
};

struct SuperBody {
    std::vector<BodyItem> items;                  // dimension 1
    std::vector<std::vector<std::string>> rows;   // dimension 2, top row first
};

struct SuperDecl {
    std::string name;
    SuperBody body;
};

struct LevelDecl {
    bool parametric = false;
    int k = 0;     // explicit level index
    int from = 1;  // first level a parametric declaration covers
    std::vector<SuperDecl> supers;
};

struct RuleAst {
    int dimension = 1;
    std::vector<TileDecl> tiles;
    std::vector<LevelDecl> levels;
    std::string origin;
};

RuleAst parse_ast(const RuleSource& src);

// Canonical text form; parse(print(ast)) is structurally identical.
std::string print_ast(const RuleAst& ast);

// Builds the rule and materializes level 1 so structural errors surface
// at parse time.
FusionRule parse_rule(const RuleSource& src);

std::string print_rule(const FusionRule& rule);

using ParamMap = std::map<std::string, std::string>;

// Built-in examples. Names: chacon, fibonacci_1d, two_measures,
// three_letter_kappa, coincidence_waiting, three_tile_solenoid,
// scrambled_fibonacci, fibonacci_dpv, nonpisot_dpv, ap_example.
FusionRule catalog(const std::string& name, const ParamMap& params = {});

std::vector<std::string> catalog_names();

}  // namespace fusion
