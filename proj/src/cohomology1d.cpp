#include "fusion/cohomology1d.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace fusion {

namespace {

void require_1d(const FusionRule& rule) {
    if (rule.dimension() != 1)
        throw FusionError("cohomology is implemented for dimension 1");
}

// flank pair (left level-n type, right level-n type) or -1 when unseen
struct Flanks {
    std::set<int> left, right;
};

bool forced_at(const FusionRule& rule, int n, int N) {
    std::size_t types = rule.type_count(N);
    std::vector<Flanks> flanks(types);
    std::vector<int> first(types), last(types);
    for (std::size_t s = 0; s < types; ++s) {
        auto w = expand(rule, N, static_cast<int>(s), n).word;
        first[s] = w.front();
        last[s] = w.back();
    }
    // two harvest depths: a fixed two-level window can miss admitted
    // adjacencies (the fibonacci sigma^2-words are always aba / ab and
    // never exhibit aa), so level N+3 occurrences are scanned as well
    for (int top = N + 2; top <= N + 3; ++top)
        for (std::size_t T = 0; T < rule.type_count(top); ++T) {
            auto w = expand(rule, top, static_cast<int>(T), N).word;
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (i > 0) flanks[w[i]].left.insert(last[w[i - 1]]);
                if (i + 1 < w.size()) flanks[w[i]].right.insert(first[w[i + 1]]);
            }
        }
    // a type with no interior occurrence has no witnessed context at all
    for (const auto& f : flanks)
        if (f.left.size() != 1 || f.right.size() != 1) return false;
    return true;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

BigInt determinant(std::vector<std::vector<BigInt>> a) {
    // Bareiss fraction-free elimination
    std::size_t n = a.size();
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

// invariant factors of the integer matrix (Smith normal form diagonal)
std::vector<BigInt> smith_factors(std::vector<std::vector<BigInt>> a) {
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<BigInt> out;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // find a nonzero pivot
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < rows && !found; ++i)
            for (std::size_t j = t; j < cols && !found; ++j)
                if (a[i][j] != 0) {
                    pi = i;
                    pj = j;
                    found = true;
                }
        if (!found) break;
        std::swap(a[t], a[pi]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pj]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i)
                if (a[i][t] != 0) {
                    BigInt q = a[i][t] / a[t][t];
                    for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                    if (a[i][t] != 0) {
                        std::swap(a[t], a[i]);
                        clean = false;
                    }
                }
            for (std::size_t j = t + 1; j < cols; ++j)
                if (a[t][j] != 0) {
                    BigInt q = a[t][j] / a[t][t];
                    for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                    if (a[t][j] != 0) {
                        for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][j]);
                        clean = false;
                    }
                }
        }
        out.push_back(abs(a[t][t]));
        ++t;
    }
    // enforce divisibility d1 | d2 | ...
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j) {
            BigInt g = gcd(out[i], out[j]);
            BigInt l = out[i] / g * out[j];
            out[i] = g;
            out[j] = l;
        }
    return out;
}

std::vector<std::vector<BigInt>> winding(const FusionRule& rule, int n) {
    TransitionMatrix m = transition_matrix(rule, n, n + 1);
    std::vector<std::vector<BigInt>> w(m.cols, std::vector<BigInt>(m.rows));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) w[j][i] = m.at(i, j);
    return w;
}

}  // namespace

BorderForcingResult border_forcing_check(const FusionRule& rule, int n, int maxN) {
    require_1d(rule);
    BorderForcingResult res;
    for (int N = n; N <= maxN; ++N) {
        try {
            if (forced_at(rule, n, N)) {
                res.forced = true;
                res.leastN = N;
                return res;
            }
        } catch (const ExpansionTooLargeError&) {
            break;
        }
    }
    return res;
}

ApComplex ap_complex(const FusionRule& rule, int n) {
    require_1d(rule);
    ApComplex cx;
    cx.level = n;
    int j = static_cast<int>(rule.type_count(n));
    for (int i = 0; i < j; ++i) cx.cellLengths.push_back(rule.width(n, i));

    UnionFind uf(2 * j);
    for (int i = 0; i < j; ++i) uf.unite(i, j + i);  // each cell closes into a circle
    for (std::size_t T = 0; T < rule.type_count(n + 2); ++T) {
        auto w = expand(rule, n + 2, static_cast<int>(T), n).word;
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            uf.unite(j + w[i], w[i + 1]);  // right endpoint of w[i] meets left of w[i+1]
    }
    std::vector<int> remap(2 * j, -1);
    for (int s = 0; s < 2 * j; ++s) {
        int root = uf.find(s);
        if (remap[root] < 0) remap[root] = cx.vertexCount++;
        cx.vertexClasses.push_back(remap[root]);
    }
    cx.windingMatrix = winding(rule, n);
    return cx;
}

DirectLimitReport h1_direct_limit(const FusionRule& rule, int horizon) {
    require_1d(rule);
    DirectLimitReport rep;
    auto bf = border_forcing_check(rule, 1, std::min(horizon, 3));
    rep.border_forced = bf.forced;
    if (!bf.forced) rep.label = "pre-collaring, informational only";

    bool all_unimodular = true;
    bool all_square = true;
    std::size_t j0 = rule.type_count(0);
    for (int n = 0; n < horizon; ++n) {
        auto w = winding(rule, n);
        rep.pullbacks.push_back(w);
        bool square = w.size() == (w.empty() ? 0 : w[0].size()) && w.size() == j0;
        all_square = all_square && square;
        if (square) {
            BigInt det = determinant(w);
            rep.determinants.push_back(det);
            all_unimodular = all_unimodular && (det == 1 || det == -1);
        }
        auto inv = smith_factors(w);
        int rank = 0;
        for (const auto& d : inv)
            if (d != 0) ++rank;
        rep.ranks.push_back(rank);
        std::vector<BigInt> nontrivial;
        for (const auto& d : inv)
            if (d != 0 && d != 1) nontrivial.push_back(d);
        rep.invariantFactors.push_back(std::move(nontrivial));
    }
    if (all_square && all_unimodular) {
        rep.stabilized = true;
        rep.groupDescription = "Z^" + std::to_string(j0) + " (stable)";
    } else {
        rep.groupDescription = "direct limit not stable; see ranks and invariant factors";
    }
    return rep;
}

}  // namespace fusion
