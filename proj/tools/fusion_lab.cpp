#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fusion/cohomology1d.hpp"
#include "fusion/entropy.hpp"
#include "fusion/measures.hpp"
#include "fusion/ruledsl.hpp"
#include "fusion/spectral.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace fusion;

namespace {

constexpr const char* kToolVersion = "1.0.0";

std::string fnv1a64(const std::string& s) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

json qp_json(const QuadPhi& v) {
    return {{"rat", to_string(v.rat())}, {"phi", to_string(v.phi_part())}};
}

json matrix_json(const TransitionMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j).str());
        rows.push_back(row);
    }
    return {{"fromLevel", m.fromLevel}, {"toLevel", m.toLevel}, {"entries", rows}};
}

struct RuleOpts {
    std::string file;
    std::string catalog_name;
    std::vector<std::string> params;
};

void add_rule_opts(CLI::App* cmd, RuleOpts& o) {
    cmd->add_option("rule", o.file, "rule file (.fuse)");
    cmd->add_option("--catalog", o.catalog_name, "catalog entry name");
    cmd->add_option("--param", o.params, "catalog parameter key=value");
}

FusionRule load_rule(const RuleOpts& o) {
    if (!o.catalog_name.empty()) {
        ParamMap params;
        for (const auto& p : o.params) {
            auto eq = p.find('=');
            if (eq == std::string::npos)
                throw BadParamError("--param needs key=value, got '" + p + "'");
            params[p.substr(0, eq)] = p.substr(eq + 1);
        }
        return catalog(o.catalog_name, params);
    }
    if (o.file.empty()) throw FusionError("no rule given: pass a file or --catalog");
    std::ifstream in(o.file);
    if (!in) throw ParseError("cannot open '" + o.file + "'", 0, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_rule({ss.str(), o.file});
}

// canonical DSL text when available, a structural dump otherwise
std::string canonical_text(const FusionRule& rule) {
    try {
        return print_rule(rule);
    } catch (const FusionError&) {
        std::ostringstream os;
        os << rule.name() << "|dim" << rule.dimension();
        for (const auto& t : rule.prototiles())
            os << "|tile " << t.label << " " << t.width.str() << "x" << t.height.str();
        for (int n = 1; n <= 3; ++n)
            for (const auto& s : rule.level(n)) {
                os << "|L" << n << "#" << s.index << ":";
                for (int c : s.word) os << c << ",";
                for (const auto& c : s.placed)
                    os << c.index << "@" << c.x.str() << ";" << c.y.str() << ",";
            }
        return os.str();
    }
}

json report_head(const FusionRule& rule, const std::string& command) {
    return {{"schema", 1},
            {"toolVersion", kToolVersion},
            {"rule", rule.name()},
            {"ruleHash", fnv1a64(canonical_text(rule))},
            {"command", command}};
}

// one coordinate: "p/q", "phi", "2phi", "1/3+2/5phi", "-1/5+2/5phi"
QuadPhi parse_field_scalar(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty field element", 0, 0, "number");
    BigRat rat(0), phi(0);
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t start = pos;
        if (s[pos] == '+' || s[pos] == '-') ++pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '/'))
            ++pos;
        std::string num = s.substr(start, pos - start);
        if (num == "+" || num.empty()) num = "1";
        if (num == "-") num = "-1";
        bool is_phi = false;
        if (s.compare(pos, 3, "phi") == 0) {
            is_phi = true;
            pos += 3;
        }
        BigRat v;
        try {
            v = parse_rational(num);
        } catch (...) {
            throw ParseError("bad field element '" + raw + "'", 0, 0, "p/q or p/q phi");
        }
        (is_phi ? phi : rat) += v;
    }
    return QuadPhi(rat, phi);
}

std::vector<QuadPhi> parse_alpha(const std::string& raw) {
    std::string s = raw;
    if (!s.empty() && s.front() == '(') {
        if (s.back() != ')') throw ParseError("unbalanced parentheses in alpha", 0, 0);
        s = s.substr(1, s.size() - 2);
    }
    std::vector<QuadPhi> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_field_scalar(item));
    if (out.empty()) throw ParseError("empty alpha", 0, 0);
    return out;
}

const char* kPalette[] = {"#4878d0", "#ee854a", "#6acc64", "#d65f5f",
                          "#956cb4", "#8c613c", "#dc7ec0", "#797979"};

std::string svg_render(const FusionRule& rule, const ConcretePatch& p, int scale) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    double h_legend = 26;
    if (p.dimension == 1) {
        double x = 0, height = scale;
        std::vector<double> xs;
        for (int t : p.word) {
            xs.push_back(x);
            x += rule.width(p.level, t).to_double() * scale;
        }
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << x << "\" height=\""
           << height + h_legend << "\">\n";
        for (std::size_t i = 0; i < p.word.size(); ++i) {
            double w = rule.width(p.level, p.word[i]).to_double() * scale;
            os << "<rect x=\"" << xs[i] << "\" y=\"0\" width=\"" << w << "\" height=\""
               << height << "\" fill=\"" << kPalette[p.word[i] % 8]
               << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
        }
        double lx = 0;
        for (std::size_t t = 0; t < rule.type_count(p.level); ++t) {
            os << "<rect x=\"" << lx << "\" y=\"" << height + 6
               << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[t % 8] << "\"/>"
               << "<text x=\"" << lx + 16 << "\" y=\"" << height + 16
               << "\" font-size=\"11\">type " << t << "</text>\n";
            lx += 80;
        }
        os << "</svg>\n";
        return os.str();
    }
    double maxx = 0, maxy = 0;
    for (const auto& t : p.tiles) {
        maxx = std::max(maxx, (t.x + rule.width(p.level, t.index)).to_double());
        maxy = std::max(maxy, (t.y + rule.height(p.level, t.index)).to_double());
    }
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << maxx * scale
       << "\" height=\"" << maxy * scale + h_legend << "\">\n";
    for (const auto& t : p.tiles) {
        double w = rule.width(p.level, t.index).to_double() * scale;
        double h = rule.height(p.level, t.index).to_double() * scale;
        double y = (maxy - t.y.to_double()) * scale - h;  // svg y grows downward
        os << "<rect x=\"" << t.x.to_double() * scale << "\" y=\"" << y << "\" width=\""
           << w << "\" height=\"" << h << "\" fill=\"" << kPalette[t.index % 8]
           << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    }
    double lx = 0;
    for (std::size_t t = 0; t < rule.type_count(p.level); ++t) {
        os << "<rect x=\"" << lx << "\" y=\"" << maxy * scale + 6
           << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[t % 8] << "\"/>"
           << "<text x=\"" << lx + 16 << "\" y=\"" << maxy * scale + 16
           << "\" font-size=\"11\">type " << t << "</text>\n";
        lx += 80;
    }
    os << "</svg>\n";
    return os.str();
}

json patch_json(const FusionRule& rule, const ConcretePatch& p) {
    json out = {{"dimension", p.dimension}, {"level", p.level}};
    if (p.dimension == 1) {
        out["word"] = p.word;
        json widths = json::array();
        for (std::size_t t = 0; t < rule.type_count(p.level); ++t)
            widths.push_back(qp_json(rule.width(p.level, static_cast<int>(t))));
        out["typeWidths"] = widths;
    } else {
        json tiles = json::array();
        for (const auto& t : p.tiles)
            tiles.push_back({{"type", t.index}, {"x", qp_json(t.x)}, {"y", qp_json(t.y)}});
        out["tiles"] = tiles;
    }
    return out;
}

void emit(const json& out, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << out.dump(2) << "\n";
        return;
    }
    std::ofstream f(path);
    f << out.dump(2) << "\n";
}

int run_analyze(const RuleOpts& ro, int horizon, bool do_validate, bool do_matrices,
                bool do_primitivity, bool do_ergodicity, bool do_profile) {
    FusionRule rule = load_rule(ro);
    if (!do_validate && !do_matrices && !do_primitivity && !do_ergodicity && !do_profile)
        do_validate = do_matrices = do_primitivity = do_ergodicity = do_profile = true;

    json out = report_head(rule, "analyze");
    out["parameters"] = {{"horizon", horizon}};
    json res;

    if (do_validate) {
        auto rep = validate(rule, std::min(horizon, 4));
        json issues = json::array();
        for (const auto& i : rep.issues)
            issues.push_back(
                {{"level", i.level}, {"index", i.index}, {"message", i.message}});
        res["validate"] = {{"ok", rep.ok()}, {"issues", issues}};
        if (!rep.ok()) {
            out["results"] = res;
            emit(out, "");
            return 2;
        }
    }
    if (do_matrices) {
        json ms = json::array();
        for (int n = 1; n <= horizon; ++n) ms.push_back(matrix_json(transition_matrix(rule, n - 1, n)));
        res["transitionMatrices"] = ms;
    }
    if (do_primitivity) {
        auto rep = primitivity(rule, horizon);
        json entries = json::array();
        for (const auto& e : rep.perN) {
            const char* v = e.verdict == PrimitivityVerdict::Primitive ? "Primitive"
                            : e.verdict == PrimitivityVerdict::NotPrimitive
                                ? "NotPrimitive"
                                : "Inconclusive";
            entries.push_back({{"n", e.n},
                               {"verdict", v},
                               {"witnessN", e.witnessN},
                               {"certificate", e.certificate}});
        }
        res["primitivity"] = entries;
    }
    if (do_ergodicity) {
        auto v = unique_ergodicity(rule, horizon);
        const char* s = v.status == ErgodicityStatus::UniquelyErgodic ? "UniquelyErgodic"
                        : v.status == ErgodicityStatus::NotUniquelyErgodic
                            ? "NotUniquelyErgodic"
                            : "Inconclusive";
        json diams = json::array();
        for (const auto& d : v.diameters) diams.push_back(qp_json(d));
        json deltas = json::array();
        for (int n = 1; n <= horizon; ++n) deltas.push_back(qp_json(balance_delta(rule, n)));
        res["ergodicity"] = {{"status", s},
                             {"clause", std::string(1, v.clause)},
                             {"certificate", v.certificate},
                             {"diameters", diams},
                             {"balanceDeltas", deltas}};
    }
    if (do_profile) {
        auto prof = constant_length_profile(rule, horizon);
        json ls = json::array();
        for (const auto& l : prof.L) ls.push_back(l.str());
        res["constantLength"] = {{"isConstantLength", prof.isConstantLength},
                                 {"L", ls},
                                 {"reason", prof.reason}};
    }
    out["results"] = res;
    emit(out, "");
    return 0;
}

int run_expand_render(const RuleOpts& ro, int n, int j, const std::string& format,
                      const std::string& outPath, int scale) {
    FusionRule rule = load_rule(ro);
    ConcretePatch p = expand(rule, n, j, 0);
    if (format == "svg") {
        std::string svg = svg_render(rule, p, scale);
        if (outPath.empty() || outPath == "-") {
            std::cout << svg;
        } else {
            std::ofstream f(outPath);
            f << svg;
        }
        return 0;
    }
    json out = report_head(rule, "expand");
    out["parameters"] = {{"n", n}, {"j", j}};
    out["results"] = {{"patch", patch_json(rule, p)}};
    emit(out, outPath);
    return 0;
}

int run_spectrum(const RuleOpts& ro, const std::string& alphaRaw, int horizon) {
    FusionRule rule = load_rule(ro);
    auto alpha = parse_alpha(alphaRaw);
    auto rep = eigenvalue_test(rule, alpha, horizon);
    json out = report_head(rule, "spectrum");
    json acoords = json::array();
    for (const auto& a : alpha) acoords.push_back(qp_json(a));
    out["parameters"] = {{"alpha", acoords}, {"horizon", horizon}};
    const char* v = rep.verdict == EigenvalueVerdict::Pass ? "Pass"
                    : rep.verdict == EigenvalueVerdict::Fail ? "Fail"
                                                             : "Inconclusive";
    out["results"] = {{"verdict", v},
                      {"etas", rep.etas},
                      {"fittedRatio", rep.fitted_ratio},
                      {"floor", rep.floor},
                      {"certificate", rep.certificate}};
    emit(out, "");
    return 0;
}

int run_entropy(const RuleOpts& ro, int maxn, int harvest) {
    FusionRule rule = load_rule(ro);
    auto prof = complexity(rule, maxn, harvest);
    auto est = entropy_estimate(prof);
    auto zb = zero_entropy_bound(rule, harvest);
    json out = report_head(rule, "entropy");
    out["parameters"] = {{"maxn", maxn}, {"harvestLevel", harvest}};
    out["results"] = {
        {"complexity",
         {{"counts", prof.counts}, {"certifiedLowerBound", true}}},
        {"entropyEstimate", {{"sequence", est.sequence}, {"limit", est.limit}}},
        {"zeroEntropyBound",
         {{"sequence", zb.sequence},
          {"verdict", zb.verdict == EntropyBoundVerdict::ZeroEntropyBoundHolds
                          ? "ZeroEntropyBoundHolds"
                          : "Silent"},
          {"diameterSurrogate", "width plus height"}}}};
    emit(out, "");
    return 0;
}

int run_cohomology(const RuleOpts& ro, int horizon) {
    FusionRule rule = load_rule(ro);
    auto rep = h1_direct_limit(rule, horizon);
    json out = report_head(rule, "cohomology");
    out["parameters"] = {{"horizon", horizon}};
    json pulls = json::array();
    for (const auto& m : rep.pullbacks) {
        json rows = json::array();
        for (const auto& r : m) {
            json row = json::array();
            for (const auto& v : r) row.push_back(v.str());
            rows.push_back(row);
        }
        pulls.push_back(rows);
    }
    json dets = json::array();
    for (const auto& d : rep.determinants) dets.push_back(d.str());
    json invf = json::array();
    for (const auto& f : rep.invariantFactors) {
        json step = json::array();
        for (const auto& v : f) step.push_back(v.str());
        invf.push_back(step);
    }
    out["results"] = {{"recognizabilityAsserted", rule.asserted_recognizable()},
                      {"borderForced", rep.border_forced},
                      {"label", rep.label},
                      {"pullbacks", pulls},
                      {"determinants", dets},
                      {"stabilized", rep.stabilized},
                      {"group", rep.groupDescription},
                      {"ranks", rep.ranks},
                      {"invariantFactors", invf}};
    emit(out, "");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analysis of hierarchical fusion tiling rules"};
    app.require_subcommand(1);

    RuleOpts ro_an, ro_ex, ro_sp, ro_en, ro_co;
    int horizon = 5, n = 1, j = 0, maxn = 8, harvest = 4, scale = 20;
    bool f_validate = false, f_matrices = false, f_primitivity = false,
         f_ergodicity = false, f_profile = false;
    std::string format = "json", outPath, alphaRaw;

    auto* an = app.add_subcommand("analyze", "validate and run the standard passes");
    add_rule_opts(an, ro_an);
    an->add_option("--horizon", horizon);
    an->add_flag("--validate", f_validate);
    an->add_flag("--matrices", f_matrices);
    an->add_flag("--primitivity", f_primitivity);
    an->add_flag("--ergodicity", f_ergodicity);
    an->add_flag("--constant-length", f_profile);

    auto* ex = app.add_subcommand("expand", "subdivide a supertile to prototiles");
    add_rule_opts(ex, ro_ex);
    ex->add_option("-n", n);
    ex->add_option("-j", j);
    ex->add_option("--format", format)->check(CLI::IsMember({"json", "svg"}));
    ex->add_option("--out", outPath);
    ex->add_option("--scale", scale);

    auto* re = app.add_subcommand("render", "expand and draw as SVG");

    auto* sp = app.add_subcommand("spectrum", "topological eigenvalue test");
    add_rule_opts(sp, ro_sp);
    sp->add_option("--alpha", alphaRaw)->required();
    sp->add_option("--horizon", horizon);

    auto* en = app.add_subcommand("entropy", "complexity and entropy bounds");
    add_rule_opts(en, ro_en);
    en->add_option("--maxn", maxn);
    en->add_option("--harvest", harvest);

    auto* co = app.add_subcommand("cohomology", "first Cech cohomology direct limit");
    add_rule_opts(co, ro_co);
    co->add_option("--horizon", horizon);

    auto* ca = app.add_subcommand("catalog", "list built-in rules");

    RuleOpts ro_re = ro_ex;
    add_rule_opts(re, ro_re);
    re->add_option("-n", n);
    re->add_option("-j", j);
    re->add_option("--out", outPath);
    re->add_option("--scale", scale);

    CLI11_PARSE(app, argc, argv);

    try {
        if (an->parsed())
            return run_analyze(ro_an, horizon, f_validate, f_matrices, f_primitivity,
                               f_ergodicity, f_profile);
        if (ex->parsed()) return run_expand_render(ro_ex, n, j, format, outPath, scale);
        if (re->parsed()) return run_expand_render(ro_re, n, j, "svg", outPath, scale);
        if (sp->parsed()) return run_spectrum(ro_sp, alphaRaw, horizon);
        if (en->parsed()) return run_entropy(ro_en, maxn, harvest);
        if (co->parsed()) return run_cohomology(ro_co, horizon);
        if (ca->parsed()) {
            json out = {{"schema", 1}, {"toolVersion", kToolVersion}, {"command", "catalog"}};
            out["rules"] = catalog_names();
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const ExpansionTooLargeError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const UnknownCatalogEntryError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const BadParamError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const FusionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
