#include "fusion/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fusion {

DirectionMatrix direction_matrix(const FusionRule& rule, int n, int N) {
    TransitionMatrix m = transition_matrix(rule, n, N);
    DirectionMatrix d;
    d.fromLevel = n;
    d.toLevel = N;
    d.rows = m.rows;
    d.cols = m.cols;
    d.e.resize(m.rows * m.cols);
    for (std::size_t k = 0; k < m.cols; ++k) {
        QuadPhi norm;
        for (std::size_t l = 0; l < m.rows; ++l)
            norm += QuadPhi(BigRat(m.at(l, k))) * rule.volume(n, static_cast<int>(l));
        if (norm.is_zero())
            throw ZeroColumnError("column " + std::to_string(k) + " of M_{" +
                                  std::to_string(n) + "," + std::to_string(N) +
                                  "} is all zero");
        for (std::size_t i = 0; i < m.rows; ++i)
            d.at(i, k) = QuadPhi(BigRat(m.at(i, k))) / norm;
    }
    return d;
}

QuadPhi delta_diameter(const FusionRule& rule, int n, int N) {
    DirectionMatrix d = direction_matrix(rule, n, N);
    QuadPhi best;
    for (std::size_t a = 0; a < d.cols; ++a)
        for (std::size_t b = a + 1; b < d.cols; ++b) {
            QuadPhi dist;
            for (std::size_t i = 0; i < d.rows; ++i) dist += (d.at(i, a) - d.at(i, b)).abs();
            if (dist > best) best = dist;
        }
    return best;
}

QuadPhi balance_delta(const FusionRule& rule, int n) {
    if (n < 1) throw FusionError("balance delta needs n >= 1");
    TransitionMatrix m = transition_matrix(rule, n - 1, n);
    QuadPhi delta;
    bool first = true;
    for (std::size_t k = 0; k < m.cols; ++k) {
        BigInt mn = m.at(0, k), mx = m.at(0, k);
        for (std::size_t i = 1; i < m.rows; ++i) {
            mn = std::min(mn, m.at(i, k));
            mx = std::max(mx, m.at(i, k));
        }
        QuadPhi ratio = mx == 0 ? QuadPhi(0) : QuadPhi(BigRat(mn, mx));
        if (first || ratio < delta) {
            delta = ratio;
            first = false;
        }
    }
    return delta;
}

// ---------------------------------------------------------------- ergodicity

namespace {

bool same_matrix(const TransitionMatrix& a, const TransitionMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.e == b.e;
}

// strong primitivity with identical step matrices: the bounded-matrix
// hypothesis is certified, not assumed
bool regular_strongly_primitive(const FusionRule& rule, int steps) {
    if (steps < 2) return false;
    TransitionMatrix first = transition_matrix(rule, 0, 1);
    if (!first.all_positive()) return false;
    for (int k = 2; k <= steps; ++k) {
        TransitionMatrix step = transition_matrix(rule, k - 1, k);
        if (!step.all_positive() || !same_matrix(first, step)) return false;
    }
    return true;
}

}  // namespace

ErgodicityVerdict unique_ergodicity(const FusionRule& rule, int horizon,
                                    const ErgodicityTolerances& tol) {
    ErgodicityVerdict v;
    for (int N = 1; N <= horizon; ++N) v.diameters.push_back(delta_diameter(rule, 0, N));

    // (a) level-independent positive step matrices, possibly after
    // merging 2 or 3 levels per step
    for (int stride = 1; stride <= 3; ++stride) {
        int steps = horizon / stride;
        if (steps < 2) break;
        bool regular = false;
        try {
            FusionRule merged = stride == 1 ? rule : induced_rule(rule, stride);
            regular = regular_strongly_primitive(merged, steps);
        } catch (const ExpansionTooLargeError&) {
            // merged supertiles too big to materialize; fall through
        }
        if (regular) {
            v.status = ErgodicityStatus::UniquelyErgodic;
            v.clause = 'a';
            v.certificate = "every " + std::to_string(stride) +
                            "-level step has the same entrywise positive transition matrix "
                            "(checked over " + std::to_string(steps) + " steps)";
            return v;
        }
    }

    // (b) delta_n admits a lower bound c/n^p with p <= 1, so the series
    // sum delta_n diverges
    {
        std::vector<double> deltas;
        bool positive = true;
        for (int n = 1; n <= horizon; ++n) {
            QuadPhi d = balance_delta(rule, n);
            if (d.sign() <= 0) positive = false;
            deltas.push_back(d.to_double());
        }
        if (positive && deltas.size() >= 3) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int cnt = 0;
            for (std::size_t i = 1; i < deltas.size(); ++i) {  // skip n=1 (log 0)
                double x = std::log(static_cast<double>(i + 1));
                double y = std::log(deltas[i]);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                ++cnt;
            }
            double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
            double p = -slope;
            if (p <= tol.fit_exponent_max) {
                std::ostringstream os;
                os << "delta_n stays above c/n^p with fitted p = " << p
                   << " <= 1, so the balance series diverges";
                v.status = ErgodicityStatus::UniquelyErgodic;
                v.clause = 'b';
                v.certificate = os.str();
                return v;
            }
        }
    }

    // (c) diameters d_N decrease with geometrically shrinking gaps but
    // extrapolate to a positive floor: two direction columns stay apart
    if (v.diameters.size() >= 3) {
        std::size_t last = v.diameters.size() - 1;
        double d_last = v.diameters[last].to_double();
        double g_last = (v.diameters[last - 1] - v.diameters[last]).to_double();
        double g_prev = (v.diameters[last - 2] - v.diameters[last - 1]).to_double();
        double floor;
        if (g_prev <= 0) {
            floor = g_last <= 0 ? d_last : 0;
        } else {
            double r = g_last / g_prev;
            floor = r <= tol.gap_ratio_max ? d_last - g_last * r / (1 - r) : 0;
        }
        if (floor >= tol.diameter_floor_min) {
            // name the witnessing pair at the deepest level
            DirectionMatrix d = direction_matrix(rule, 0, horizon);
            std::size_t ba = 0, bb = 0;
            QuadPhi best;
            for (std::size_t a = 0; a < d.cols; ++a)
                for (std::size_t b = a + 1; b < d.cols; ++b) {
                    QuadPhi dist;
                    for (std::size_t i = 0; i < d.rows; ++i)
                        dist += (d.at(i, a) - d.at(i, b)).abs();
                    if (dist > best) {
                        best = dist;
                        ba = a;
                        bb = b;
                    }
                }
            std::ostringstream os;
            os << "direction columns " << ba << " and " << bb
               << " keep L1 distance >= " << floor << " at every sampled level";
            v.status = ErgodicityStatus::NotUniquelyErgodic;
            v.clause = 'c';
            v.certificate = os.str();
            return v;
        }
    }
    v.certificate = "no clause applied within the horizon";
    return v;
}

// ---------------------------------------------------------------- kappa

FrequencyVector kappa_frequencies(const FusionRule& rule, const SupertileSequence& kappa,
                                  int n, int N) {
    if (N < 1 || static_cast<std::size_t>(N) > kappa.size())
        throw FusionError("kappa sequence does not reach level " + std::to_string(N));
    int kN = kappa[N - 1];
    if (kN < 0 || static_cast<std::size_t>(kN) >= rule.type_count(N))
        throw FusionError("kappa label out of range at level " + std::to_string(N));
    TransitionMatrix m = transition_matrix(rule, n, N);
    QuadPhi vol = rule.volume(N, kN);
    FrequencyVector rho;
    rho.level = n;
    for (std::size_t i = 0; i < m.rows; ++i)
        rho.entries.push_back(QuadPhi(BigRat(m.at(i, kN))) / vol);
    return rho;
}

namespace {

const FrequencyVector& rho_at(const std::vector<FrequencyVector>& rho, int level) {
    for (const auto& r : rho)
        if (r.level == level) return r;
    throw FusionError("no frequency vector supplied for level " + std::to_string(level));
}

}  // namespace

FrequencySeries patch_frequency(const FusionRule& rule,
                                const std::vector<FrequencyVector>& rho,
                                const ConcretePatch& patch, const std::vector<int>& levels) {
    FrequencySeries out;
    for (int n : levels) {
        const FrequencyVector& r = rho_at(rho, n);
        QuadPhi sum;
        for (std::size_t i = 0; i < rule.type_count(n); ++i) {
            ConcretePatch big = expand(rule, n, static_cast<int>(i), patch.level);
            sum += QuadPhi(BigRat(count_patch(big, patch))) * r.entries.at(i);
        }
        if (!out.partial_sums.empty())
            out.gaps.push_back((sum - out.partial_sums.back()).abs());
        out.levels.push_back(n);
        out.partial_sums.push_back(sum);
    }
    return out;
}

// ---------------------------------------------------------------- exact LP

namespace {

struct LpResult {
    bool feasible = false;
    QuadPhi objective;
};

// min c.x  s.t.  A x = b, x >= 0; small dense simplex with Bland's rule
LpResult solve_lp(std::vector<std::vector<QuadPhi>> A, std::vector<QuadPhi> b,
                  std::vector<QuadPhi> c) {
    std::size_t m = A.size(), n = c.size();
    for (std::size_t i = 0; i < m; ++i)
        if (b[i].sign() < 0) {
            b[i] = -b[i];
            for (auto& v : A[i]) v = -v;
        }
    // tableau with artificial variables n..n+m-1
    std::size_t total = n + m;
    std::vector<std::vector<QuadPhi>> T(m, std::vector<QuadPhi>(total + 1));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
        T[i][n + i] = QuadPhi(1);
        T[i][total] = b[i];
        basis[i] = n + i;
    }
    auto run = [&](const std::vector<QuadPhi>& cost, std::size_t enterable) -> QuadPhi {
        while (true) {
            // reduced costs via basis cost vector
            std::vector<QuadPhi> y(m);
            for (std::size_t i = 0; i < m; ++i) y[i] = cost[basis[i]];
            std::size_t enter = total;
            for (std::size_t j = 0; j < enterable; ++j) {
                bool basic = false;
                for (std::size_t i = 0; i < m; ++i)
                    if (basis[i] == j) basic = true;
                if (basic) continue;
                QuadPhi red = cost[j];
                for (std::size_t i = 0; i < m; ++i) red -= y[i] * T[i][j];
                if (red.sign() < 0) {
                    enter = j;  // Bland: first improving index
                    break;
                }
            }
            if (enter == total) break;
            std::size_t leave = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (T[i][enter].sign() <= 0) continue;
                if (leave == m) {
                    leave = i;
                    continue;
                }
                QuadPhi cur = T[i][total] / T[i][enter];
                QuadPhi best = T[leave][total] / T[leave][enter];
                if (cur < best || (cur == best && basis[i] < basis[leave])) leave = i;
            }
            if (leave == m) throw FusionError("unbounded linear program");
            QuadPhi piv = T[leave][enter];
            for (auto& v : T[leave]) v /= piv;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == leave || T[i][enter].is_zero()) continue;
                QuadPhi f = T[i][enter];
                for (std::size_t j = 0; j <= total; ++j) T[i][j] -= f * T[leave][j];
            }
            basis[leave] = enter;
        }
        QuadPhi obj;
        for (std::size_t i = 0; i < m; ++i) obj += cost[basis[i]] * T[i][total];
        return obj;
    };

    std::vector<QuadPhi> phase1(total);
    for (std::size_t j = n; j < total; ++j) phase1[j] = QuadPhi(1);
    QuadPhi art = run(phase1, total);
    LpResult res;
    if (art.sign() > 0) return res;  // infeasible
    res.feasible = true;
    std::vector<QuadPhi> phase2(total);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
    // artificials stay degenerate-basic at 0; they may not re-enter
    res.objective = run(phase2, n);
    return res;
}

}  // namespace

ErgodicVertices ergodic_vertices(const FusionRule& rule, int n, int N) {
    if (rule.type_count(n) > 8)
        throw DimensionTooHighError("hull test limited to 8 supertile types");
    DirectionMatrix dm = direction_matrix(rule, n, N);
    std::size_t d = dm.rows;
    std::vector<std::vector<QuadPhi>> cols(dm.cols, std::vector<QuadPhi>(d));
    for (std::size_t k = 0; k < dm.cols; ++k)
        for (std::size_t i = 0; i < d; ++i) cols[k][i] = dm.at(i, k);

    // group duplicate columns
    std::vector<int> rep;  // group representative column index
    std::vector<int> mult;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        bool found = false;
        for (std::size_t g = 0; g < rep.size(); ++g)
            if (cols[rep[g]] == cols[k]) {
                ++mult[g];
                found = true;
            }
        if (!found) {
            rep.push_back(static_cast<int>(k));
            mult.push_back(1);
        }
    }

    ErgodicVertices out;
    for (std::size_t g = 0; g < rep.size(); ++g) {
        std::vector<int> others;
        for (std::size_t h = 0; h < rep.size(); ++h)
            if (h != g) others.push_back(rep[h]);
        QuadPhi sep;
        if (!others.empty()) {
            // min sum(u+v)  s.t.  sum_k lambda_k col_k + u - v = col_g,
            // sum lambda = 1, all vars >= 0: exact L1 distance to the hull
            std::size_t nl = others.size();
            std::size_t vars = nl + 2 * d;
            std::vector<std::vector<QuadPhi>> A(d + 1, std::vector<QuadPhi>(vars));
            std::vector<QuadPhi> b(d + 1), obj(vars);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t k = 0; k < nl; ++k) A[i][k] = cols[others[k]][i];
                A[i][nl + i] = QuadPhi(1);
                A[i][nl + d + i] = QuadPhi(-1);
                b[i] = cols[rep[g]][i];
            }
            for (std::size_t k = 0; k < nl; ++k) A[d][k] = QuadPhi(1);
            b[d] = QuadPhi(1);
            for (std::size_t i = 0; i < 2 * d; ++i) obj[nl + i] = QuadPhi(1);
            LpResult lp = solve_lp(std::move(A), std::move(b), std::move(obj));
            if (!lp.feasible) throw FusionError("hull distance program infeasible");
            sep = lp.objective;
        }
        if (others.empty() || sep.sign() > 0) {
            out.vertex_columns.push_back(rep[g]);
            out.multiplicity.push_back(mult[g]);
            out.separation.push_back(sep);
        }
    }
    return out;
}

// ---------------------------------------------------------------- pairs

PairFrequencyReport pair_frequency(const FusionRule& rule,
                                   const std::vector<FrequencyVector>& rho,
                                   const ConcretePatch& patch, const QuadPhi& v,
                                   const std::vector<int>& levels) {
    if (rule.dimension() != 1 || patch.dimension != 1)
        throw FusionError("pair frequency is implemented for dimension 1");
    PairFrequencyReport report;
    report.base_series = patch_frequency(rule, rho, patch, levels);
    for (int n : levels) {
        const FrequencyVector& r = rho_at(rho, n);
        QuadPhi sum;
        for (std::size_t i = 0; i < rule.type_count(n); ++i) {
            ConcretePatch big = expand(rule, n, static_cast<int>(i), patch.level);
            const auto& w = big.word;
            std::vector<QuadPhi> pos(w.size() + 1);
            for (std::size_t k = 0; k < w.size(); ++k)
                pos[k + 1] = pos[k] + rule.width(patch.level, w[k]);
            auto hits = find_patch_1d(w, patch.word);
            std::vector<char> is_hit(w.size(), 0);
            for (long long h : hits) is_hit[static_cast<std::size_t>(h)] = 1;
            long long pairs = 0;
            for (long long h : hits) {
                QuadPhi target = pos[static_cast<std::size_t>(h)] + v;
                auto it = std::lower_bound(pos.begin(), pos.end(), target);
                if (it == pos.end() || *it != target) continue;
                std::size_t idx = static_cast<std::size_t>(it - pos.begin());
                if (idx < w.size() && is_hit[idx]) ++pairs;
            }
            sum += QuadPhi(BigRat(pairs)) * r.entries.at(i);
        }
        if (!report.pair_series.partial_sums.empty())
            report.pair_series.gaps.push_back(
                (sum - report.pair_series.partial_sums.back()).abs());
        report.pair_series.levels.push_back(n);
        report.pair_series.partial_sums.push_back(sum);
    }
    for (std::size_t i = 0; i < report.pair_series.partial_sums.size(); ++i) {
        double base = report.base_series.partial_sums[i].to_double();
        double pair = report.pair_series.partial_sums[i].to_double();
        report.ratio_to_square.push_back(base > 0 ? pair / (base * base) : 0.0);
    }
    return report;
}

}  // namespace fusion
