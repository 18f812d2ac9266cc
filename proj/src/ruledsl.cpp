#include "fusion/ruledsl.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <set>
#include <sstream>

namespace fusion {

// ---------------------------------------------------------------- IntExpr

struct IntExpr::Node {
    Kind kind = Kind::Lit;
    BigInt lit;
    std::shared_ptr<const Node> l, r;
};

IntExpr IntExpr::lit(BigInt v) {
    IntExpr e;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Lit;
    n->lit = std::move(v);
    e.node_ = n;
    return e;
}

IntExpr IntExpr::var() {
    IntExpr e;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    e.node_ = n;
    return e;
}

IntExpr IntExpr::binary(Kind k, IntExpr lhs, IntExpr rhs) {
    IntExpr e;
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->l = lhs.node_;
    n->r = rhs.node_;
    e.node_ = n;
    return e;
}

bool IntExpr::is_literal() const { return node_ && node_->kind == Kind::Lit; }

namespace {

void check_bits(const BigInt& v, int bound) {
    if (bit_length(v) > bound)
        throw GeneratorEvalError("integer expression result exceeds " +
                                 std::to_string(bound) + " bits");
}

BigInt eval_node(const IntExpr::Node* nd, const BigInt& n, int bound);

BigInt eval_pow(const BigInt& base, const BigInt& exp, int bound) {
    if (exp < 0) throw GeneratorEvalError("negative exponent in integer expression");
    if (base == 0) return exp == 0 ? BigInt(1) : BigInt(0);
    if (base == 1) return 1;
    if (base == -1) return exp % 2 == 0 ? 1 : -1;
    BigInt budget = BigInt(bound) / bit_length(base);
    if (exp > budget)
        throw GeneratorEvalError("integer expression result exceeds " +
                                 std::to_string(bound) + " bits");
    BigInt r = boost::multiprecision::pow(base, exp.convert_to<unsigned>());
    check_bits(r, bound);
    return r;
}

BigInt eval_node(const IntExpr::Node* nd, const BigInt& n, int bound) {
    using K = IntExpr::Kind;
    switch (nd->kind) {
        case K::Lit: return nd->lit;
        case K::Var: return n;
        case K::Add: {
            BigInt r = eval_node(nd->l.get(), n, bound) + eval_node(nd->r.get(), n, bound);
            check_bits(r, bound);
            return r;
        }
        case K::Sub: {
            BigInt r = eval_node(nd->l.get(), n, bound) - eval_node(nd->r.get(), n, bound);
            check_bits(r, bound);
            return r;
        }
        case K::Mul: {
            BigInt r = eval_node(nd->l.get(), n, bound) * eval_node(nd->r.get(), n, bound);
            check_bits(r, bound);
            return r;
        }
        case K::Pow:
            return eval_pow(eval_node(nd->l.get(), n, bound),
                            eval_node(nd->r.get(), n, bound), bound);
    }
    throw GeneratorEvalError("corrupt integer expression");
}

int prec_of(IntExpr::Kind k) {
    using K = IntExpr::Kind;
    switch (k) {
        case K::Add:
        case K::Sub: return 1;
        case K::Mul: return 2;
        case K::Pow: return 3;
        default: return 4;
    }
}

void print_node(const IntExpr::Node* nd, std::ostream& os, int parent_prec) {
    using K = IntExpr::Kind;
    if (nd->kind == K::Lit) {
        os << nd->lit.str();
        return;
    }
    if (nd->kind == K::Var) {
        os << 'n';
        return;
    }
    int p = prec_of(nd->kind);
    bool parens = p < parent_prec;
    if (parens) os << '(';
    const char* op = nd->kind == K::Add   ? "+"
                     : nd->kind == K::Sub ? "-"
                     : nd->kind == K::Mul ? "*"
                                          : "^";
    // '^' is right-associative; '-' needs a guarded right operand.
    int lp = nd->kind == K::Pow ? p + 1 : p;
    int rp = nd->kind == K::Pow ? p : (nd->kind == K::Sub ? p + 1 : p);
    print_node(nd->l.get(), os, lp);
    os << op;
    print_node(nd->r.get(), os, rp);
    if (parens) os << ')';
}

}  // namespace

BigInt IntExpr::eval(const BigInt& n, int bit_bound) const {
    if (!node_) throw GeneratorEvalError("empty integer expression");
    return eval_node(node_.get(), n, bit_bound);
}

std::string IntExpr::str() const {
    if (!node_) return "0";
    std::ostringstream os;
    print_node(node_.get(), os, 0);
    return os.str();
}

// ---------------------------------------------------------------- tokens

namespace {

struct Tok {
    enum T { Word, Int, Sym, End } t = End;
    std::string s;
    int line = 0;
    int col = 0;
};

bool word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Tok> lex_line(const std::string& ln, int lineno) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < ln.size()) {
        char c = ln[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        int col = static_cast<int>(i) + 1;
        if (word_start(c)) {
            std::size_t j = i;
            while (j < ln.size() && word_char(ln[j])) ++j;
            out.push_back({Tok::Word, ln.substr(i, j - i), lineno, col});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < ln.size() && std::isdigit(static_cast<unsigned char>(ln[j]))) ++j;
            out.push_back({Tok::Int, ln.substr(i, j - i), lineno, col});
            i = j;
        } else if (c == '-' && i + 1 < ln.size() && ln[i + 1] == '>') {
            out.push_back({Tok::Sym, "->", lineno, col});
            i += 2;
        } else if (std::string(":;^()[]/*+-").find(c) != std::string::npos) {
            out.push_back({Tok::Sym, std::string(1, c), lineno, col});
            ++i;
        } else {
            throw ParseError("unexpected character '" + std::string(1, c) + "'", lineno, col);
        }
    }
    out.push_back({Tok::End, "", lineno, static_cast<int>(ln.size()) + 1});
    return out;
}

// Cursor over one lexed line.
struct Cur {
    const std::vector<Tok>* toks;
    std::size_t i = 0;

    const Tok& peek() const { return (*toks)[i]; }
    const Tok& next() { return (*toks)[i++]; }
    bool at_end() const { return peek().t == Tok::End; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Tok& t = peek();
        std::string got = t.t == Tok::End ? "end of line" : "'" + t.s + "'";
        throw ParseError("unexpected " + got, t.line, t.col, expected);
    }
    bool is_sym(const std::string& s) const { return peek().t == Tok::Sym && peek().s == s; }
    bool is_word(const std::string& s) const { return peek().t == Tok::Word && peek().s == s; }
    void expect_sym(const std::string& s) {
        if (!is_sym(s)) fail("'" + s + "'");
        next();
    }
    std::string expect_word(const std::string& what) {
        if (peek().t != Tok::Word) fail(what);
        return next().s;
    }
    BigInt expect_int(const std::string& what) {
        if (peek().t != Tok::Int) fail(what);
        return BigInt(next().s);
    }
};

IntExpr parse_expr(Cur& c);

IntExpr parse_base(Cur& c) {
    if (c.is_sym("-")) {
        c.next();
        return IntExpr::binary(IntExpr::Kind::Sub, IntExpr::lit(0), parse_base(c));
    }
    if (c.is_sym("(")) {
        c.next();
        IntExpr e = parse_expr(c);
        c.expect_sym(")");
        return e;
    }
    if (c.peek().t == Tok::Int) return IntExpr::lit(c.expect_int("integer"));
    if (c.is_word("n")) {
        c.next();
        return IntExpr::var();
    }
    c.fail("integer, 'n', or '('");
}

IntExpr parse_power(Cur& c) {
    IntExpr base = parse_base(c);
    if (c.is_sym("^")) {
        c.next();
        return IntExpr::binary(IntExpr::Kind::Pow, base, parse_power(c));
    }
    return base;
}

IntExpr parse_term(Cur& c) {
    IntExpr e = parse_power(c);
    while (c.is_sym("*")) {
        c.next();
        e = IntExpr::binary(IntExpr::Kind::Mul, e, parse_power(c));
    }
    return e;
}

IntExpr parse_expr(Cur& c) {
    IntExpr e = parse_term(c);
    while (c.is_sym("+") || c.is_sym("-")) {
        bool add = c.is_sym("+");
        c.next();
        e = IntExpr::binary(add ? IntExpr::Kind::Add : IntExpr::Kind::Sub, e, parse_term(c));
    }
    return e;
}

BigRat parse_rat_tok(Cur& c) {
    BigInt num = c.expect_int("rational");
    if (c.is_sym("/")) {
        c.next();
        BigInt den = c.expect_int("denominator");
        if (den == 0) c.fail("nonzero denominator");
        return BigRat(num, den);
    }
    return BigRat(num);
}

struct NameRef {
    std::string name;
    int line, col;
};

}  // namespace

// ---------------------------------------------------------------- parse_ast

IntExpr IntExpr::parse(const std::string& text) {
    auto toks = lex_line(text, 1);
    Cur c{&toks};
    IntExpr e = parse_expr(c);
    if (!c.at_end()) c.fail("end of expression");
    return e;
}

RuleAst parse_ast(const RuleSource& src) {
    RuleAst ast;
    ast.origin = src.origin;
    bool have_dim = false;
    std::set<int> explicit_levels;
    std::vector<NameRef> refs;

    std::istringstream in(src.text);
    std::string ln;
    int lineno = 0;
    while (std::getline(in, ln)) {
        ++lineno;
        auto toks = lex_line(ln, lineno);
        Cur c{&toks};
        if (c.at_end()) continue;
        std::string head = c.expect_word("'dim', 'tile', or 'level'");
        if (head == "dim") {
            if (have_dim) c.fail("only one dim declaration");
            BigInt d = c.expect_int("1 or 2");
            if (d != 1 && d != 2) c.fail("1 or 2");
            ast.dimension = static_cast<int>(d);
            have_dim = true;
        } else if (head == "tile") {
            if (!have_dim)
                throw ParseError("dim must be declared before tiles", lineno, 1);
            TileDecl t;
            t.label = c.expect_word("tile label");
            for (const auto& prev : ast.tiles)
                if (prev.label == t.label)
                    throw ParseError("duplicate tile label '" + t.label + "'", lineno, 1);
            if (c.is_word("len")) {
                if (ast.dimension != 1) c.fail("'size' in dimension 2");
                c.next();
                t.width = parse_rat_tok(c);
            } else if (c.is_word("size")) {
                if (ast.dimension != 2) c.fail("'len' in dimension 1");
                c.next();
                t.width = parse_rat_tok(c);
                if (!c.is_word("x")) c.fail("'x'");
                c.next();
                t.height = parse_rat_tok(c);
                t.has_size = true;
            }
            if (t.width <= 0 || t.height <= 0)
                throw ParseError("tile '" + t.label + "' has non-positive size", lineno, 1);
            ast.tiles.push_back(std::move(t));
        } else if (head == "level") {
            if (!have_dim)
                throw ParseError("dim must be declared before levels", lineno, 1);
            LevelDecl lv;
            if (c.is_sym("(")) {
                c.next();
                if (!c.is_word("n")) c.fail("'n'");
                c.next();
                c.expect_sym(")");
                lv.parametric = true;
                if (c.is_word("from")) {
                    c.next();
                    BigInt f = c.expect_int("level number");
                    if (f < 1) c.fail("level number >= 1");
                    lv.from = static_cast<int>(f);
                }
            } else {
                BigInt k = c.expect_int("level number or '(n)'");
                if (k < 1) c.fail("level number >= 1");
                lv.k = static_cast<int>(k);
                if (!explicit_levels.insert(lv.k).second)
                    throw ParseError("duplicate explicit level " + std::to_string(lv.k),
                                     lineno, 1);
            }
            c.expect_sym(":");
            std::set<std::string> lhs_seen;
            while (true) {
                SuperDecl sd;
                sd.name = c.expect_word("supertile name");
                if (!lhs_seen.insert(sd.name).second)
                    throw ParseError("duplicate supertile name '" + sd.name + "' in level",
                                     lineno, 1);
                c.expect_sym("->");
                if (ast.dimension == 2) {
                    c.expect_sym("[");
                    std::vector<std::string> row;
                    while (true) {
                        if (c.peek().t == Tok::Word) {
                            refs.push_back({c.peek().s, c.peek().line, c.peek().col});
                            row.push_back(c.next().s);
                        } else if (c.is_sym("/")) {
                            c.next();
                            if (row.empty()) c.fail("supertile name");
                            sd.body.rows.push_back(std::move(row));
                            row.clear();
                        } else if (c.is_sym("]")) {
                            if (row.empty()) c.fail("supertile name");
                            sd.body.rows.push_back(std::move(row));
                            c.next();
                            break;
                        } else {
                            c.fail("supertile name, '/', or ']'");
                        }
                    }
                } else {
                    while (c.peek().t == Tok::Word) {
                        BodyItem item;
                        refs.push_back({c.peek().s, c.peek().line, c.peek().col});
                        item.name = c.next().s;
                        if (c.is_sym("^")) {
                            c.next();
                            c.expect_sym("(");
                            item.reps = parse_expr(c);
                            c.expect_sym(")");
                        }
                        sd.body.items.push_back(std::move(item));
                    }
                    if (sd.body.items.empty()) c.fail("supertile name");
                }
                lv.supers.push_back(std::move(sd));
                if (c.is_sym(";")) {
                    c.next();
                    continue;
                }
                if (c.at_end()) break;
                c.fail("';' or end of line");
            }
            ast.levels.push_back(std::move(lv));
        } else {
            throw ParseError("unknown statement '" + head + "'", lineno, 1,
                             "'dim', 'tile', or 'level'");
        }
    }
    if (!have_dim) throw ParseError("missing dim declaration", lineno + 1, 1, "'dim 1' or 'dim 2'");
    if (ast.tiles.empty()) throw ParseError("no tiles declared", lineno + 1, 1, "'tile'");
    if (ast.levels.empty()) throw ParseError("no levels declared", lineno + 1, 1, "'level'");

    std::set<std::string> known;
    for (const auto& t : ast.tiles) known.insert(t.label);
    for (const auto& lv : ast.levels)
        for (const auto& sd : lv.supers) known.insert(sd.name);
    for (const auto& r : refs)
        if (!known.count(r.name))
            throw ParseError("undefined symbol '" + r.name + "'", r.line, r.col,
                             "a declared tile or supertile name");
    return ast;
}

// ---------------------------------------------------------------- print

std::string print_ast(const RuleAst& ast) {
    std::ostringstream os;
    os << "dim " << ast.dimension << "\n";
    for (const auto& t : ast.tiles) {
        os << "tile " << t.label;
        if (ast.dimension == 1)
            os << " len " << to_string(t.width);
        else
            os << " size " << to_string(t.width) << " x " << to_string(t.height);
        os << "\n";
    }
    for (const auto& lv : ast.levels) {
        if (lv.parametric) {
            os << "level(n)";
            if (lv.from > 1) os << " from " << lv.from;
        } else {
            os << "level " << lv.k;
        }
        os << ":";
        bool first = true;
        for (const auto& sd : lv.supers) {
            os << (first ? " " : " ; ") << sd.name << " ->";
            first = false;
            if (!sd.body.rows.empty()) {
                os << " [";
                for (std::size_t r = 0; r < sd.body.rows.size(); ++r) {
                    if (r) os << " /";
                    for (const auto& nm : sd.body.rows[r]) os << " " << nm;
                }
                os << " ]";
            } else {
                for (const auto& item : sd.body.items) {
                    os << " " << item.name;
                    if (item.reps) {
                        // drop ^(1): it is the implicit default
                        bool one = item.reps->is_literal() && item.reps->str() == "1";
                        if (!one) os << "^(" << item.reps->str() << ")";
                    }
                }
            }
        }
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------- build

namespace {

constexpr long kMaxWordLen = 100000000;  // per-supertile children cap

struct GenState {
    RuleAst ast;
    std::map<std::string, int> tile_index;

    std::recursive_mutex mu;
    std::map<int, std::vector<SupertileDef>> defs2;                      // dim 2 memo
    std::map<std::pair<int, int>, std::pair<BigRat, BigRat>> extents2;   // (w,h)

    const LevelDecl* decl_for(int n) const {
        const LevelDecl* best = nullptr;
        for (const auto& lv : ast.levels) {
            if (!lv.parametric && lv.k == n) return &lv;
            if (lv.parametric && lv.from <= n && (!best || lv.from >= best->from)) best = &lv;
        }
        return best;
    }

    std::map<std::string, int> names_at(int n) const {
        std::map<std::string, int> m;
        if (n == 0) {
            for (std::size_t i = 0; i < ast.tiles.size(); ++i)
                m[ast.tiles[i].label] = static_cast<int>(i);
            return m;
        }
        const LevelDecl* lv = decl_for(n);
        if (!lv)
            throw GeneratorEvalError("no level declaration covers level " + std::to_string(n));
        for (std::size_t i = 0; i < lv->supers.size(); ++i)
            m[lv->supers[i].name] = static_cast<int>(i);
        return m;
    }

    std::vector<SupertileDef> build1(int n) {
        const LevelDecl* lv = decl_for(n);
        if (!lv)
            throw GeneratorEvalError("no level declaration covers level " + std::to_string(n));
        auto prev = names_at(n - 1);
        std::vector<SupertileDef> out;
        for (std::size_t i = 0; i < lv->supers.size(); ++i) {
            const auto& sd = lv->supers[i];
            SupertileDef def;
            def.level = n;
            def.index = static_cast<int>(i);
            def.label = sd.name;
            for (const auto& item : sd.body.items) {
                auto it = prev.find(item.name);
                if (it == prev.end())
                    throw GeneratorEvalError("symbol '" + item.name +
                                             "' is not a type at level " + std::to_string(n - 1));
                BigInt reps = item.reps ? item.reps->eval(n) : BigInt(1);
                if (reps < 0)
                    throw GeneratorEvalError("negative repetition count at level " +
                                             std::to_string(n));
                if (reps > kMaxWordLen ||
                    BigInt(def.word.size()) + reps > kMaxWordLen)
                    throw GeneratorEvalError("supertile composition exceeds " +
                                             std::to_string(kMaxWordLen) +
                                             " children at level " + std::to_string(n));
                def.word.insert(def.word.end(), reps.convert_to<long>(), it->second);
            }
            out.push_back(std::move(def));
        }
        return out;
    }

    std::pair<BigRat, BigRat> extent(int n, int j) {
        if (n == 0) return {ast.tiles.at(j).width, ast.tiles.at(j).height};
        defs_cached(n);
        return extents2.at({n, j});
    }

    const std::vector<SupertileDef>& defs_cached(int n) {
        std::lock_guard<std::recursive_mutex> lk(mu);
        auto it = defs2.find(n);
        if (it != defs2.end()) return it->second;
        auto defs = build2(n);
        return defs2.emplace(n, std::move(defs)).first->second;
    }

    std::vector<SupertileDef> build2(int n) {
        const LevelDecl* lv = decl_for(n);
        if (!lv)
            throw GeneratorEvalError("no level declaration covers level " + std::to_string(n));
        auto prev = names_at(n - 1);
        std::vector<SupertileDef> out;
        for (std::size_t i = 0; i < lv->supers.size(); ++i) {
            const auto& sd = lv->supers[i];
            SupertileDef def;
            def.level = n;
            def.index = static_cast<int>(i);
            def.label = sd.name;
            // rows are written top to bottom; place them bottom-up
            std::vector<std::vector<int>> grid;
            for (const auto& row : sd.body.rows) {
                std::vector<int> r;
                for (const auto& nm : row) {
                    auto it = prev.find(nm);
                    if (it == prev.end())
                        throw GeneratorEvalError("symbol '" + nm + "' is not a type at level " +
                                                 std::to_string(n - 1));
                    r.push_back(it->second);
                }
                grid.push_back(std::move(r));
            }
            BigRat total_w = -1;
            BigRat y = 0;
            for (auto rit = grid.rbegin(); rit != grid.rend(); ++rit) {
                BigRat row_h = extent(n - 1, rit->front()).second;
                BigRat x = 0;
                for (int idx : *rit) {
                    auto [w, h] = extent(n - 1, idx);
                    if (h != row_h)
                        throw GeneratorEvalError(
                            "layout mismatch in '" + sd.name + "' at level " + std::to_string(n) +
                            ": row mixes heights " + to_string(row_h) + " and " + to_string(h));
                    def.placed.push_back({idx, QuadPhi(BigRat(x)), QuadPhi(BigRat(y))});
                    x += w;
                }
                if (total_w < 0)
                    total_w = x;
                else if (x != total_w)
                    throw GeneratorEvalError(
                        "layout mismatch in '" + sd.name + "' at level " + std::to_string(n) +
                        ": rows of width " + to_string(total_w) + " and " + to_string(x));
                y += row_h;
            }
            extents2[{n, static_cast<int>(i)}] = {total_w, y};
            out.push_back(std::move(def));
        }
        return out;
    }
};

}  // namespace

static FusionRule build_rule(RuleAst ast) {
    int dim = ast.dimension;
    std::vector<Prototile> tiles;
    for (std::size_t i = 0; i < ast.tiles.size(); ++i) {
        const auto& t = ast.tiles[i];
        tiles.push_back({static_cast<int>(i), t.label, QuadPhi(t.width),
                         dim == 1 ? QuadPhi(1) : QuadPhi(t.height)});
    }
    auto st = std::make_shared<GenState>();
    st->ast = std::move(ast);
    std::string name = st->ast.origin;
    LevelGenerator gen = [st, dim](int n) {
        return dim == 1 ? st->build1(n) : st->defs_cached(n);
    };
    return FusionRule(dim, std::move(tiles), std::move(gen), name);
}

FusionRule parse_rule(const RuleSource& src) {
    RuleAst ast = parse_ast(src);
    std::string canonical = print_ast(ast);
    bool has_level2 = false;
    for (const auto& lv : ast.levels)
        if (lv.parametric || lv.k >= 2) has_level2 = true;
    FusionRule rule = build_rule(std::move(ast));
    rule.set_source(std::move(canonical));
    rule.level(1);  // surface structural errors eagerly
    if (has_level2) rule.level(2);
    return rule;
}

std::string print_rule(const FusionRule& rule) {
    if (!rule.source()) throw FusionError("rule '" + rule.name() + "' has no textual form");
    return *rule.source();
}

// ---------------------------------------------------------------- catalog

namespace {

FusionRule from_text(const std::string& name, const char* text) {
    FusionRule r = parse_rule({text, name});
    return r;
}

const char* kChacon = R"(dim 1
tile a len 1
tile b len 1
level(n): a -> a a b a ; b -> b
)";

const char* kFibonacciUnit = R"(dim 1
tile a len 1
tile b len 1
level(n): a -> a b ; b -> a
)";

const char* kTwoMeasures = R"(dim 1
tile a len 1
tile b len 1
level(n): a -> a^(10^n) b ; b -> b^(10^n) a
)";

const char* kThreeLetterKappa = R"(dim 1
tile a len 1
tile b len 1
tile c len 1
level(n): a -> a^(10^n) b c a^(10^n) ; b -> b^(10^n) a c b^(10^n) ; c -> a^(10^n) c c b^(10^n)
)";

const char* kFibonacciDpv = R"(dim 2
tile a size 1 x 1
tile b size 1 x 1
tile c size 1 x 1
tile d size 1 x 1
level(n): a -> [ b d / a c ] ; b -> [ a c ] ; c -> [ b / a ] ; d -> [ a ]
)";

// Rectangle fusion on a -> abbb, b -> a crossed with itself. Types:
// a = l x l, b = l x s (wide), c = s x l (tall), d = s x s, with sides
// l' = l + 3s, s' = l. The c/d columns in P(a) and the a slot in P(c)
// move from level to level; the transition counts never change, but
// the staggered fault lines between columns make the set of adjacency
// offsets between n-supertiles grow with n.
FusionRule make_nonpisot_dpv() {
    std::vector<Prototile> tiles = {{0, "a", QuadPhi(1), QuadPhi(1)},
                                    {1, "b", QuadPhi(1), QuadPhi(1)},
                                    {2, "c", QuadPhi(1), QuadPhi(1)},
                                    {3, "d", QuadPhi(1), QuadPhi(1)}};
    LevelGenerator gen = [](int n) {
        BigInt l = 1, s = 1;  // child sides at level n-1
        for (int i = 0; i < n - 1; ++i) {
            BigInt nl = l + 3 * s;
            s = l;
            l = nl;
        }
        auto at = [](const BigInt& x, const BigInt& y) {
            return std::pair<QuadPhi, QuadPhi>{QuadPhi(BigRat(x)), QuadPhi(BigRat(y))};
        };
        std::vector<SupertileDef> defs(4);
        // a: column (a,b,b,b) then three staggered c/d columns
        SupertileDef& da = defs[0];
        da = {n, 0, "a", {}, {}};
        da.placed.push_back({0, QuadPhi(0), QuadPhi(0)});
        for (int i = 0; i < 3; ++i) {
            auto [px, py] = at(0, l + i * s);
            da.placed.push_back({1, px, py});
        }
        for (int j = 0; j < 3; ++j) {
            BigInt x = l + j * s;
            int slot = (1 + 2 * n + 3 * j + 2 * j * n) % 4;
            BigInt y = 0;
            for (int pos = 0; pos < 4; ++pos) {
                auto [px, py] = at(x, y);
                if (pos == slot) {
                    da.placed.push_back({2, px, py});
                    y += l;
                } else {
                    da.placed.push_back({3, px, py});
                    y += s;
                }
            }
        }
        // b: row (a,c,c,c)
        SupertileDef& db = defs[1];
        db = {n, 1, "b", {}, {}};
        {
            BigInt x = 0;
            auto [px, py] = at(x, 0);
            db.placed.push_back({0, px, py});
            x = l;
            for (int i = 0; i < 3; ++i) {
                auto [qx, qy] = at(x, 0);
                db.placed.push_back({2, qx, qy});
                x += s;
            }
        }
        // c: column of b's with the single a at a level-dependent slot
        SupertileDef& dc = defs[2];
        dc = {n, 2, "c", {}, {}};
        {
            int slot = n % 4;
            BigInt y = 0;
            for (int pos = 0; pos < 4; ++pos) {
                auto [px, py] = at(0, y);
                if (pos == slot) {
                    dc.placed.push_back({0, px, py});
                    y += l;
                } else {
                    dc.placed.push_back({1, px, py});
                    y += s;
                }
            }
        }
        defs[3] = {n, 3, "d", {}, {{0, QuadPhi(0), QuadPhi(0)}}};
        return defs;
    };
    FusionRule r(2, std::move(tiles), std::move(gen), "nonpisot_dpv");
    r.set_asserted_recognizable(true);
    return r;
}

// words over {a,b} under a -> ab, b -> a
std::string fib_sub(const std::string& w) {
    std::string out;
    out.reserve(w.size() * 2);
    for (char c : w) out += (c == 'a') ? "ab" : "a";
    return out;
}

std::string fib_word(char start, int steps) {
    std::string w(1, start);
    for (int i = 0; i < steps; ++i) w = fib_sub(w);
    return w;
}

std::vector<int> to_word(const std::string& s, const std::string& alphabet) {
    std::vector<int> w;
    w.reserve(s.size());
    for (char c : s) w.push_back(static_cast<int>(alphabet.find(c)));
    return w;
}

FusionRule make_fibonacci_quadratic() {
    std::vector<Prototile> tiles = {{0, "a", QuadPhi::phi(), QuadPhi(1)},
                                    {1, "b", QuadPhi(1), QuadPhi(1)}};
    LevelGenerator gen = [](int n) {
        std::vector<SupertileDef> defs(2);
        defs[0] = {n, 0, "a", {0, 1}, {}};
        defs[1] = {n, 1, "b", {0}, {}};
        return defs;
    };
    return FusionRule(1, std::move(tiles), std::move(gen), "fibonacci_1d");
}

// σ(b) = b c^5 b^4, σ(c) = c b^5 c^4; constant length 10
std::string bc_sub_word(char start, int steps) {
    std::string w(1, start);
    for (int i = 0; i < steps; ++i) {
        std::string next;
        next.reserve(w.size() * 10);
        for (char c : w) next += (c == 'b') ? "bcccccbbbb" : "cbbbbbcccc";
        w = std::move(next);
    }
    return w;
}

FusionRule make_coincidence_waiting() {
    std::vector<Prototile> tiles = {{0, "b", QuadPhi(1), QuadPhi(1)},
                                    {1, "c", QuadPhi(1), QuadPhi(1)}};
    // P_n(b) = P_{n-1}(b) σ^n(b-as-supertiles) P_{n-1}(c), same with σ^n(c)
    LevelGenerator gen = [](int n) {
        std::vector<SupertileDef> defs(2);
        for (int j = 0; j < 2; ++j) {
            std::vector<int> w = {0};
            auto mid = to_word(bc_sub_word(j == 0 ? 'b' : 'c', n), "bc");
            w.insert(w.end(), mid.begin(), mid.end());
            w.push_back(1);
            defs[j] = {n, j, std::string(1, "bc"[j]), std::move(w), {}};
        }
        return defs;
    };
    return FusionRule(1, std::move(tiles), std::move(gen), "coincidence_waiting");
}

// σ(a) = a^10, σ(b) = b c^5 b^4, σ(c) = c b^5 c^4
std::string abc_sub_word(char start, int steps) {
    std::string w(1, start);
    for (int i = 0; i < steps; ++i) {
        std::string next;
        next.reserve(w.size() * 10);
        for (char c : w)
            next += (c == 'a') ? "aaaaaaaaaa" : (c == 'b') ? "bcccccbbbb" : "cbbbbbcccc";
        w = std::move(next);
    }
    return w;
}

FusionRule make_three_tile_solenoid() {
    std::vector<Prototile> tiles = {{0, "a", QuadPhi(1), QuadPhi(1)},
                                    {1, "b", QuadPhi(1), QuadPhi(1)},
                                    {2, "c", QuadPhi(1), QuadPhi(1)}};
    // P_n(x) = P_{n-1}(a) σ^n(x-as-supertiles) P_{n-1}(b) P_{n-1}(c)
    LevelGenerator gen = [](int n) {
        std::vector<SupertileDef> defs(3);
        for (int j = 0; j < 3; ++j) {
            std::vector<int> w = {0};
            auto mid = to_word(abc_sub_word("abc"[j], n), "abc");
            w.insert(w.end(), mid.begin(), mid.end());
            w.push_back(1);
            w.push_back(2);
            defs[j] = {n, j, std::string(1, "abc"[j]), std::move(w), {}};
        }
        return defs;
    };
    return FusionRule(1, std::move(tiles), std::move(gen), "three_tile_solenoid");
}

struct ScrambledSpec {
    IntExpr N;
    bool unit_lengths = false;
    bool exceptional_form = false;  // keep the odd-level third type visible
};

long N_at(const IntExpr& N, int n) {
    if (n == 0) return 0;
    BigInt v = N.eval(n);
    if (v < 0 || v > 1000000) throw BadParamError("level sequence value out of range");
    return v.convert_to<long>();
}

// Exceptional-rule supertile words: odd levels carry an extra type e
// whose children are the b word sorted a-first; even levels replace the
// first b child with e.
std::vector<SupertileDef> scrambled_level(const IntExpr& N, int n) {
    int d = static_cast<int>(N_at(N, n) - N_at(N, n - 1));
    if (d < 3) throw GeneratorEvalError("level sequence must grow by more than 2 per level");
    std::string wa = fib_word('a', d), wb = fib_word('b', d);
    bool odd = n % 2 == 1;
    std::vector<SupertileDef> defs;
    if (odd) {
        defs.push_back({n, 0, "a", to_word(wa, "ab"), {}});
        defs.push_back({n, 1, "b", to_word(wb, "ab"), {}});
        long na = std::count(wb.begin(), wb.end(), 'a');
        std::vector<int> we(wb.size(), 1);
        std::fill(we.begin(), we.begin() + na, 0);
        defs.push_back({n, 2, "e", std::move(we), {}});
    } else {
        for (int j = 0; j < 2; ++j) {
            auto w = to_word(j == 0 ? wa : wb, "abe");
            auto it = std::find(w.begin(), w.end(), 1);
            if (it == w.end())
                throw GeneratorEvalError("no b child available for the exceptional swap");
            *it = 2;
            defs.push_back({n, j, std::string(1, "ab"[j]), std::move(w), {}});
        }
    }
    return defs;
}

FusionRule make_scrambled_fibonacci(const ScrambledSpec& spec) {
    std::vector<Prototile> tiles;
    if (spec.unit_lengths)
        tiles = {{0, "a", QuadPhi(1), QuadPhi(1)}, {1, "b", QuadPhi(1), QuadPhi(1)}};
    else
        tiles = {{0, "a", QuadPhi::phi(), QuadPhi(1)}, {1, "b", QuadPhi(1), QuadPhi(1)}};
    IntExpr N = spec.N;
    LevelGenerator gen;
    if (spec.exceptional_form) {
        gen = [N](int n) { return scrambled_level(N, n); };
    } else {
        // induced on even levels: level m composes exceptional levels 2m-1, 2m
        gen = [N](int m) {
            auto lo = scrambled_level(N, 2 * m - 1);
            auto hi = scrambled_level(N, 2 * m);
            std::vector<SupertileDef> defs;
            for (int j = 0; j < 2; ++j) {
                SupertileDef def{m, j, hi[j].label, {}, {}};
                for (int c : hi[j].word)
                    def.word.insert(def.word.end(), lo[c].word.begin(), lo[c].word.end());
                defs.push_back(std::move(def));
            }
            return defs;
        };
    }
    FusionRule r(1, std::move(tiles), std::move(gen), "scrambled_fibonacci");
    r.set_asserted_recognizable(true);
    return r;
}

FusionRule make_ap_example() {
    std::vector<Prototile> tiles = {{0, "a", QuadPhi(1), QuadPhi(1)},
                                    {1, "b", QuadPhi(1), QuadPhi(1)}};
    // P_n(a) = a b b; P_n(b) permutes two a's and three b's, starting
    // with a and ending with b at every level so that borders are forced
    LevelGenerator gen = [](int n) {
        std::vector<SupertileDef> defs(2);
        defs[0] = {n, 0, "a", {0, 1, 1}, {}};
        defs[1] = {n, 1, "b",
                   n % 2 == 1 ? std::vector<int>{0, 1, 0, 1, 1} : std::vector<int>{0, 0, 1, 1, 1},
                   {}};
        return defs;
    };
    return FusionRule(1, std::move(tiles), std::move(gen), "ap_example");
}

void check_keys(const ParamMap& params, std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : params) {
        bool ok = false;
        for (const char* a : allowed)
            if (k == a) ok = true;
        if (!ok) throw BadParamError("unknown parameter '" + k + "'");
    }
}

bool unit_geometry(const ParamMap& params) {
    auto it = params.find("geometry");
    if (it == params.end()) return false;  // quadratic lengths by default
    if (it->second == "unit") return true;
    if (it->second == "quadratic") return false;
    throw BadParamError("geometry must be 'unit' or 'quadratic'");
}

}  // namespace

std::vector<std::string> catalog_names() {
    return {"chacon",          "fibonacci_1d",      "two_measures",
            "three_letter_kappa", "coincidence_waiting", "three_tile_solenoid",
            "scrambled_fibonacci", "fibonacci_dpv",   "nonpisot_dpv",
            "ap_example"};
}

FusionRule catalog(const std::string& name, const ParamMap& params) {
    if (name == "chacon") {
        check_keys(params, {});
        return from_text(name, kChacon);
    }
    if (name == "fibonacci_1d") {
        check_keys(params, {"geometry"});
        FusionRule r = unit_geometry(params) ? from_text(name, kFibonacciUnit)
                                             : make_fibonacci_quadratic();
        r.set_asserted_recognizable(true);
        return r;
    }
    if (name == "two_measures") {
        check_keys(params, {});
        return from_text(name, kTwoMeasures);
    }
    if (name == "three_letter_kappa") {
        check_keys(params, {});
        return from_text(name, kThreeLetterKappa);
    }
    if (name == "coincidence_waiting") {
        check_keys(params, {});
        return make_coincidence_waiting();
    }
    if (name == "three_tile_solenoid") {
        check_keys(params, {});
        return make_three_tile_solenoid();
    }
    if (name == "scrambled_fibonacci") {
        check_keys(params, {"N", "geometry", "form"});
        ScrambledSpec spec;
        spec.N = IntExpr::parse("3*n");
        if (auto it = params.find("N"); it != params.end()) {
            try {
                spec.N = IntExpr::parse(it->second);
            } catch (const ParseError& e) {
                throw BadParamError(std::string("bad level sequence: ") + e.what());
            }
        }
        long prev = 0;
        for (int n = 1; n <= 8; ++n) {
            long v;
            try {
                v = N_at(spec.N, n);
            } catch (const FusionError& e) {
                throw BadParamError(std::string("bad level sequence: ") + e.what());
            }
            if (v - prev < 3)
                throw BadParamError("level sequence must satisfy N(n) - N(n-1) > 2");
            prev = v;
        }
        spec.unit_lengths = unit_geometry(params);
        if (auto it = params.find("form"); it != params.end()) {
            if (it->second == "exceptional")
                spec.exceptional_form = true;
            else if (it->second != "induced")
                throw BadParamError("form must be 'induced' or 'exceptional'");
        }
        return make_scrambled_fibonacci(spec);
    }
    if (name == "fibonacci_dpv") {
        check_keys(params, {});
        FusionRule r = from_text(name, kFibonacciDpv);
        r.set_asserted_recognizable(true);
        return r;
    }
    if (name == "nonpisot_dpv") {
        check_keys(params, {});
        return make_nonpisot_dpv();
    }
    if (name == "ap_example") {
        check_keys(params, {});
        return make_ap_example();
    }
    throw UnknownCatalogEntryError("unknown catalog entry '" + name + "'");
}

}  // namespace fusion
