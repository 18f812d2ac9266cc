#include "fusion/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace fusion {

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b) {
    if (a.cols != b.rows) throw FusionError("transition matrix shape mismatch");
    TransitionMatrix c(a.fromLevel, b.toLevel, a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const BigInt& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

namespace {

TransitionMatrix single_step(const FusionRule& rule, int N) {
    TransitionMatrix m(N - 1, N, rule.type_count(N - 1), rule.type_count(N));
    const auto& defs = rule.level(N);
    for (std::size_t j = 0; j < defs.size(); ++j) {
        for (int c : defs[j].word) m.at(c, j) += 1;
        for (const auto& c : defs[j].placed) m.at(c.index, j) += 1;
    }
    return m;
}

TransitionMatrix identity_matrix(const FusionRule& rule, int n) {
    TransitionMatrix m(n, n, rule.type_count(n), rule.type_count(n));
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, i) = 1;
    return m;
}

}  // namespace

TransitionMatrix transition_matrix(const FusionRule& rule, int n, int N) {
    if (n > N) throw FusionError("transition matrix needs n <= N");
    if (n == N) return identity_matrix(rule, n);
    TransitionMatrix m = single_step(rule, n + 1);
    for (int k = n + 2; k <= N; ++k) m = multiply(m, single_step(rule, k));
    return m;
}

PopulationVector population(const FusionRule& rule, int N, int j, int t) {
    TransitionMatrix m = transition_matrix(rule, t, N);
    PopulationVector pv{t, {}};
    pv.counts.resize(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) pv.counts[i] = m.at(i, static_cast<std::size_t>(j));
    return pv;
}

BigInt expansion_cap() {
    if (const char* env = std::getenv("FUSIONLAB_CAP")) {
        try {
            BigInt v(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    return BigInt(10000000);
}

namespace {

void expand_rec_2d(const FusionRule& rule, int N, int j, int t, const QuadPhi& ox,
                   const QuadPhi& oy, std::vector<Placement>& out) {
    if (N == t) {
        out.push_back({j, ox, oy});
        return;
    }
    for (const auto& c : rule.level(N).at(j).placed)
        expand_rec_2d(rule, N - 1, c.index, t, ox + c.x, oy + c.y, out);
}

}  // namespace

ConcretePatch expand(const FusionRule& rule, int N, int j, int t, const BigInt& cap) {
    if (t > N) throw FusionError("expansion target level exceeds source level");
    BigInt count = transition_matrix(rule, t, N).column_sum(static_cast<std::size_t>(j));
    if (count > cap)
        throw ExpansionTooLargeError("expansion of level-" + std::to_string(N) + " type " +
                                         std::to_string(j) + " to level " + std::to_string(t) +
                                         " has " + count.str() + " tiles (cap " + cap.str() + ")",
                                     count);
    ConcretePatch patch;
    patch.dimension = rule.dimension();
    patch.level = t;
    if (rule.dimension() == 1) {
        std::vector<int> word = {j};
        for (int L = N; L > t; --L) {
            std::vector<int> next;
            next.reserve(word.size() * 2);
            for (int idx : word) {
                const auto& w = rule.level(L).at(idx).word;
                next.insert(next.end(), w.begin(), w.end());
            }
            word = std::move(next);
        }
        patch.word = std::move(word);
    } else {
        expand_rec_2d(rule, N, j, t, QuadPhi(0), QuadPhi(0), patch.tiles);
    }
    return patch;
}

std::vector<long long> find_patch_1d(const std::vector<int>& haystack,
                                     const std::vector<int>& needle) {
    std::vector<long long> hits;
    if (needle.empty() || needle.size() > haystack.size()) return hits;
    std::vector<std::size_t> fail(needle.size(), 0);
    for (std::size_t i = 1, k = 0; i < needle.size(); ++i) {
        while (k > 0 && needle[i] != needle[k]) k = fail[k - 1];
        if (needle[i] == needle[k]) ++k;
        fail[i] = k;
    }
    for (std::size_t i = 0, k = 0; i < haystack.size(); ++i) {
        while (k > 0 && haystack[i] != needle[k]) k = fail[k - 1];
        if (haystack[i] == needle[k]) ++k;
        if (k == needle.size()) {
            hits.push_back(static_cast<long long>(i + 1 - k));
            k = fail[k - 1];
        }
    }
    return hits;
}

long long count_patch(const ConcretePatch& haystack, const ConcretePatch& needle) {
    if (haystack.dimension != needle.dimension)
        throw FusionError("patch dimensions differ");
    if (haystack.dimension == 1)
        return static_cast<long long>(find_patch_1d(haystack.word, needle.word).size());
    if (needle.tiles.empty()) return 0;
    using Key = std::tuple<std::string, std::string, int>;
    std::set<Key> hay;
    for (const auto& p : haystack.tiles) hay.insert({p.x.str(), p.y.str(), p.index});
    // anchor on the needle's first tile; try every matching haystack tile
    const Placement& ref = needle.tiles.front();
    long long count = 0;
    for (const auto& h : haystack.tiles) {
        if (h.index != ref.index) continue;
        QuadPhi dx = h.x - ref.x, dy = h.y - ref.y;
        bool ok = true;
        for (const auto& p : needle.tiles) {
            if (!hay.count({(p.x + dx).str(), (p.y + dy).str(), p.index})) {
                ok = false;
                break;
            }
        }
        if (ok) ++count;
    }
    return count;
}

namespace {

using BoolMat = std::vector<std::vector<bool>>;

BoolMat bool_mul(const BoolMat& a, const BoolMat& b) {
    std::size_t n = a.size(), m = b[0].size(), k = b.size();
    BoolMat c(n, std::vector<bool>(m, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t)
            if (a[i][t])
                for (std::size_t j = 0; j < m; ++j)
                    if (b[t][j]) c[i][j] = true;
    return c;
}

}  // namespace

PrimitivityReport primitivity(const FusionRule& rule, int horizon) {
    PrimitivityReport report;
    for (int n = 0; n < horizon; ++n) {
        PrimitivityEntry entry;
        entry.n = n;
        TransitionMatrix m = identity_matrix(rule, n);
        for (int N = n + 1; N <= horizon; ++N) {
            m = multiply(m, single_step(rule, N));
            if (m.all_positive()) {
                entry.verdict = PrimitivityVerdict::Primitive;
                entry.witnessN = N;
                break;
            }
        }
        if (entry.verdict != PrimitivityVerdict::Primitive) {
            // certificate hunt: union the step supports and look for a
            // zero entry surviving every eventual boolean power
            bool square = true;
            std::size_t j = rule.type_count(n);
            for (int k = n + 1; k <= horizon; ++k)
                if (rule.type_count(k) != j) square = false;
            if (square && j > 0) {
                BoolMat s(j, std::vector<bool>(j, false));
                for (int k = n + 1; k <= horizon; ++k) {
                    TransitionMatrix step = single_step(rule, k);
                    for (std::size_t a = 0; a < j; ++a)
                        for (std::size_t b = 0; b < j; ++b)
                            if (step.at(a, b) > 0) s[a][b] = true;
                }
                std::map<BoolMat, int> seen;
                std::vector<BoolMat> powers;
                BoolMat p = s;
                int cycle_start = -1;
                for (std::size_t it = 0; it <= 2 * j * j + 4; ++it) {
                    auto found = seen.find(p);
                    if (found != seen.end()) {
                        cycle_start = found->second;
                        break;
                    }
                    seen[p] = static_cast<int>(powers.size());
                    powers.push_back(p);
                    p = bool_mul(p, s);
                }
                if (cycle_start >= 0) {
                    for (std::size_t a = 0; a < j && entry.certificate.empty(); ++a)
                        for (std::size_t b = 0; b < j && entry.certificate.empty(); ++b) {
                            bool always_zero = true;
                            for (std::size_t k = cycle_start; k < powers.size(); ++k)
                                if (powers[k][a][b]) always_zero = false;
                            if (always_zero) {
                                entry.verdict = PrimitivityVerdict::NotPrimitive;
                                entry.certificate =
                                    "entry (" + std::to_string(a) + "," + std::to_string(b) +
                                    ") of M_{" + std::to_string(n) +
                                    ",N} is forced to stay zero: the union of step supports "
                                    "has a multiplicatively stable zero there";
                            }
                        }
                }
            }
        }
        report.perN.push_back(std::move(entry));
    }
    return report;
}

std::vector<bool> strong_primitivity(const FusionRule& rule, int horizon) {
    std::vector<bool> out;
    for (int n = 1; n <= horizon; ++n) out.push_back(single_step(rule, n).all_positive());
    return out;
}

std::vector<QuadPhi> van_hove_diagnostic(const FusionRule& rule, int n, const BigRat& r) {
    if (r < 0) throw FusionError("thickening radius must be nonnegative");
    std::vector<QuadPhi> out;
    QuadPhi rr{r};
    for (std::size_t j = 0; j < rule.type_count(n); ++j) {
        QuadPhi w = rule.width(n, static_cast<int>(j));
        if (rule.dimension() == 1) {
            out.push_back(QuadPhi(2) * rr / w);
        } else {
            QuadPhi h = rule.height(n, static_cast<int>(j));
            out.push_back((QuadPhi(2) * rr * (w + h) + QuadPhi(4) * rr * rr) / (w * h));
        }
    }
    return out;
}

long adjacency_complexity(const FusionRule& rule, int n) {
    if (rule.dimension() != 2)
        throw FusionError("adjacency complexity is defined for dimension 2");
    try {
        rule.level(n + 2);
    } catch (const FusionError& e) {
        throw HorizonTooSmallError(std::string("no level-") + std::to_string(n + 2) +
                                   " supertiles: " + e.what());
    }
    std::set<std::string> classes;
    for (std::size_t j = 0; j < rule.type_count(n + 2); ++j) {
        ConcretePatch patch = expand(rule, n + 2, static_cast<int>(j), n);
        const auto& ts = patch.tiles;
        std::vector<QuadPhi> w(ts.size()), h(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            w[i] = rule.width(n, ts[i].index);
            h[i] = rule.height(n, ts[i].index);
        }
        for (std::size_t a = 0; a < ts.size(); ++a)
            for (std::size_t b = 0; b < ts.size(); ++b) {
                if (a == b) continue;
                // a strictly left of b, sharing an edge segment
                if (ts[a].x + w[a] == ts[b].x && ts[a].y < ts[b].y + h[b] &&
                    ts[b].y < ts[a].y + h[a])
                    classes.insert("H|" + std::to_string(ts[a].index) + "|" +
                                   std::to_string(ts[b].index) + "|" +
                                   (ts[b].y - ts[a].y).str());
                // a strictly below b
                if (ts[a].y + h[a] == ts[b].y && ts[a].x < ts[b].x + w[b] &&
                    ts[b].x < ts[a].x + w[a])
                    classes.insert("V|" + std::to_string(ts[a].index) + "|" +
                                   std::to_string(ts[b].index) + "|" +
                                   (ts[b].x - ts[a].x).str());
            }
    }
    return static_cast<long>(classes.size());
}

RankBound rank_bound(const FusionRule& rule, int horizon) {
    RankBound rb{rule.type_count(0), 0};
    for (int n = 1; n <= horizon; ++n) {
        std::size_t j = rule.type_count(n);
        if (j < rb.min_types) {
            rb.min_types = j;
            rb.argmin = n;
        }
    }
    return rb;
}

FusionRule induced_rule(const FusionRule& rule, int stride) {
    if (stride < 1) throw FusionError("stride must be at least 1");
    FusionRule base = rule;  // shares the memo cache
    int dim = base.dimension();
    LevelGenerator gen = [base, stride, dim](int m) {
        int hi = stride * m, lo = stride * (m - 1);
        std::vector<SupertileDef> defs;
        for (std::size_t j = 0; j < base.type_count(hi); ++j) {
            ConcretePatch p = expand(base, hi, static_cast<int>(j), lo);
            SupertileDef def;
            def.level = m;
            def.index = static_cast<int>(j);
            def.label = base.level(hi)[j].label;
            if (dim == 1) {
                def.word = std::move(p.word);
            } else {
                for (auto& t : p.tiles) def.placed.push_back({t.index, t.x, t.y});
            }
            defs.push_back(std::move(def));
        }
        return defs;
    };
    FusionRule out(dim, base.prototiles(), std::move(gen),
                   base.name() + "@" + std::to_string(stride));
    out.set_asserted_recognizable(base.asserted_recognizable());
    return out;
}

}  // namespace fusion
