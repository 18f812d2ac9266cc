#include "fusion/spectral.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fusion {

namespace {

std::string vec_key(const std::vector<QuadPhi>& v) {
    std::string k;
    for (const auto& c : v) k += c.str() + "|";
    return k;
}

// strong primitivity restored by merging levels when needed
std::pair<FusionRule, int> working_rule(const FusionRule& rule, int levels_needed) {
    for (int stride = 1; stride <= 3; ++stride) {
        FusionRule cand = stride == 1 ? rule : induced_rule(rule, stride);
        bool ok = true;
        try {
            auto steps = strong_primitivity(cand, levels_needed);
            for (bool b : steps) ok = ok && b;
        } catch (const ExpansionTooLargeError&) {
            ok = false;
        }
        if (ok) return {std::move(cand), stride};
    }
    throw NotStronglyPrimitiveError(
        "no induced rule with stride <= 3 has positive step matrices");
}

std::vector<std::vector<QuadPhi>> control_points(const FusionRule& rule,
                                                 const ConcretePatch& p, int type) {
    std::vector<std::vector<QuadPhi>> pts;
    if (p.dimension == 1) {
        QuadPhi x;
        for (int t : p.word) {
            if (t == type) pts.push_back({x});
            x += rule.width(p.level, t);
        }
    } else {
        for (const auto& t : p.tiles)
            if (t.index == type) pts.push_back({t.x, t.y});
    }
    return pts;
}

}  // namespace

bool ReturnVectorSet::contains(const std::vector<QuadPhi>& v) const {
    return std::find(vectors.begin(), vectors.end(), v) != vectors.end();
}

ReturnVectorSet return_vectors(const FusionRule& rule, int n) {
    auto [work, stride] = working_rule(rule, n + 2);
    ReturnVectorSet out;
    out.level = n;
    out.stride = stride;
    std::map<std::string, std::vector<QuadPhi>> seen;
    for (std::size_t j = 0; j < work.type_count(n + 2); ++j) {
        ConcretePatch p = expand(work, n + 2, static_cast<int>(j), n);
        for (std::size_t type = 0; type < work.type_count(n); ++type) {
            auto pts = control_points(work, p, static_cast<int>(type));
            for (std::size_t a = 0; a < pts.size(); ++a)
                for (std::size_t b = 0; b < pts.size(); ++b) {
                    if (a == b) continue;
                    std::vector<QuadPhi> v;
                    for (std::size_t c = 0; c < pts[a].size(); ++c)
                        v.push_back(pts[b][c] - pts[a][c]);
                    if (std::all_of(v.begin(), v.end(),
                                    [](const QuadPhi& q) { return q.is_zero(); }))
                        continue;
                    seen.emplace(vec_key(v), v);
                }
        }
    }
    for (auto& [k, v] : seen) out.vectors.push_back(std::move(v));
    return out;
}

namespace {

Float128 eta_over(const ReturnVectorSet& rv, const std::vector<QuadPhi>& alpha) {
    Float128 best = 0;
    for (const auto& v : rv.vectors) {
        if (v.size() != alpha.size())
            throw FusionError("eigenvalue candidate has wrong dimension");
        QuadPhi theta;
        for (std::size_t c = 0; c < v.size(); ++c) theta += alpha[c] * v[c];
        // |e^{2 pi i t} - 1| = 2 |sin(pi t)|, with t reduced mod 1 exactly
        static const Float128 kPi = 4 * atan(Float128(1));
        Float128 t = theta.frac().to_float();
        Float128 val = 2 * abs(sin(kPi * t));
        if (val > best) best = val;
    }
    return best;
}

}  // namespace

Float128 eta(const FusionRule& rule, int n, const std::vector<QuadPhi>& alpha) {
    return eta_over(return_vectors(rule, n), alpha);
}

EigenvalueReport eigenvalue_test(const FusionRule& rule, const std::vector<QuadPhi>& alpha,
                                 int horizon, const EigenvalueTolerances& tol) {
    EigenvalueReport rep;
    for (int n = 1; n <= horizon; ++n) {
        try {
            rep.etas.push_back(eta(rule, n, alpha).convert_to<double>());
        } catch (const ExpansionTooLargeError&) {
            break;
        }
    }
    if (rep.etas.empty()) return rep;

    bool all_zero = std::all_of(rep.etas.begin(), rep.etas.end(),
                                [](double e) { return e < 1e-30; });
    if (all_zero) {
        rep.verdict = EigenvalueVerdict::Pass;
        rep.certificate = "every phase reduces to an integer; eta vanishes at all levels";
        return rep;
    }

    if (rep.etas.size() >= 4) {
        double worst = 0;
        bool decaying = true;
        for (std::size_t i = rep.etas.size() - 3; i < rep.etas.size(); ++i) {
            if (rep.etas[i - 1] <= 0) {
                decaying = rep.etas[i] <= 0;
                continue;
            }
            worst = std::max(worst, rep.etas[i] / rep.etas[i - 1]);
        }
        if (decaying && worst <= tol.pass_ratio_max) {
            std::ostringstream os;
            os << "eta contracts by <= " << worst
               << " per level over the last 4 levels; the eta series is summable";
            rep.verdict = EigenvalueVerdict::Pass;
            rep.fitted_ratio = worst;
            rep.certificate = os.str();
            return rep;
        }
    }
    // persistent floor: the last levels past burn-in never drop below it
    int high = 0;
    double floor = 0;
    for (std::size_t i = static_cast<std::size_t>(tol.burn_in); i < rep.etas.size(); ++i) {
        if (rep.etas[i] >= tol.fail_floor) {
            ++high;
            floor = high == 1 ? rep.etas[i] : std::min(floor, rep.etas[i]);
        } else {
            high = 0;
        }
    }
    if (high >= 3) {
        std::ostringstream os;
        os << "eta stays >= " << floor << " on the last " << high
           << " levels past burn-in " << tol.burn_in << "; the eta series diverges";
        rep.verdict = EigenvalueVerdict::Fail;
        rep.floor = floor;
        rep.certificate = os.str();
        return rep;
    }

    rep.certificate = "no decay or floor pattern within the horizon";
    return rep;
}

ConstantLengthProfile constant_length_profile(const FusionRule& rule, int horizon) {
    ConstantLengthProfile prof;
    prof.isConstantLength = true;
    for (int n = 1; n <= horizon; ++n) {
        for (std::size_t j = 1; j < rule.type_count(n); ++j)
            if (rule.volume(n, static_cast<int>(j)) != rule.volume(n, 0)) {
                prof.isConstantLength = false;
                prof.reason = "level " + std::to_string(n) + " supertiles differ in size";
                return prof;
            }
        TransitionMatrix m = transition_matrix(rule, n - 1, n);
        BigInt L = m.column_sum(0);
        for (std::size_t j = 1; j < m.cols; ++j)
            if (m.column_sum(j) != L) {
                prof.isConstantLength = false;
                prof.reason =
                    "level " + std::to_string(n) + " supertiles differ in child count";
                return prof;
            }
        prof.L.push_back(L);
    }
    return prof;
}

namespace {

// least N in (n, maxN] where every pair of level-N supertiles agrees on
// an aligned level-n slot; -1 if none found (or expansions blow the cap)
int least_coincident(const FusionRule& rule, int n, int maxN) {
    for (int N = n + 1; N <= maxN; ++N) {
        std::vector<std::vector<int>> words;
        try {
            for (std::size_t j = 0; j < rule.type_count(N); ++j)
                words.push_back(expand(rule, N, static_cast<int>(j), n).word);
        } catch (const ExpansionTooLargeError&) {
            return -1;
        }
        bool all = true;
        for (std::size_t a = 0; a < words.size() && all; ++a)
            for (std::size_t b = a + 1; b < words.size() && all; ++b) {
                bool agree = false;
                for (std::size_t s = 0; s < words[a].size(); ++s)
                    if (words[a][s] == words[b][s]) {
                        agree = true;
                        break;
                    }
                all = agree;
            }
        if (all) return N;
    }
    return -1;
}

}  // namespace

CoincidenceResult coincidence_test(const FusionRule& rule, int n, int maxN) {
    if (rule.dimension() != 1)
        throw FusionError("coincidence slots are implemented for dimension 1");
    auto prof = constant_length_profile(rule, maxN);
    if (!prof.isConstantLength) throw NotConstantLengthError(prof.reason);
    CoincidenceResult res;
    int N = least_coincident(rule, n, maxN);
    if (N < 0) return res;
    res.found = true;
    res.leastN = N;
    res.waiting_k = N - n;
    res.uniform_waiting = true;
    for (int m = 1; m <= 3 && m + res.waiting_k <= maxN; ++m) {
        if (m == n) continue;
        int Nm = least_coincident(rule, m, maxN);
        if (Nm < 0 || Nm - m != res.waiting_k) res.uniform_waiting = false;
    }
    return res;
}

BigRat slot_agreement(const FusionRule& rule, int n) {
    if (rule.dimension() != 1)
        throw FusionError("slot agreement is implemented for dimension 1");
    auto prof = constant_length_profile(rule, n);
    if (!prof.isConstantLength) throw NotConstantLengthError(prof.reason);
    std::vector<std::vector<int>> words;
    for (std::size_t j = 0; j < rule.type_count(n); ++j)
        words.push_back(expand(rule, n, static_cast<int>(j), 0).word);
    BigInt agree = 0;
    for (std::size_t s = 0; s < words[0].size(); ++s) {
        bool same = true;
        for (std::size_t j = 1; j < words.size(); ++j) same = same && words[j][s] == words[0][s];
        if (same) agree += 1;
    }
    return BigRat(agree, BigInt(words[0].size()));
}

PurePointVerdict pure_point_verdict(const FusionRule& rule, int horizon) {
    PurePointVerdict v;
    auto prof = constant_length_profile(rule, horizon);
    if (!prof.isConstantLength) {
        v.status = PurePointStatus::NotApplicable;
        v.reason = prof.reason;
        return v;
    }
    for (int m = 1; m <= 3 && m <= horizon; ++m) {
        try {
            v.agreement_fractions.push_back(
                QuadPhi(slot_agreement(rule, m)).to_double());
        } catch (const ExpansionTooLargeError&) {
            break;
        }
    }

    std::size_t j0 = rule.type_count(0);
    for (int m = 1; m <= horizon; ++m)
        if (rule.type_count(m) != j0) {
            v.status = PurePointStatus::NotApplicable;
            v.reason = "supertile type count varies across levels";
            return v;
        }

    // step-matrix boundedness: certified when the steps repeat verbatim,
    // refuted at this horizon when the max entry keeps growing
    TransitionMatrix first = transition_matrix(rule, 0, 1);
    bool identical = true;
    bool growing = true;
    BigInt prev_max = *std::max_element(first.e.begin(), first.e.end());
    v.matrix_bound = prev_max;
    for (int m = 2; m <= horizon; ++m) {
        TransitionMatrix step = transition_matrix(rule, m - 1, m);
        BigInt mx = *std::max_element(step.e.begin(), step.e.end());
        identical = identical && step.rows == first.rows && step.e == first.e;
        growing = growing && mx > prev_max;
        prev_max = mx;
        v.matrix_bound = std::max(v.matrix_bound, mx);
    }
    if (growing && horizon >= 3) {
        v.status = PurePointStatus::NotApplicable;
        v.reason = "step-matrix entries grow with the level; no uniform bound";
        return v;
    }
    if (!identical) {
        v.reason = "step-matrix boundedness not certified at this horizon";
        return v;
    }

    bool primitive = false;
    auto rep = primitivity(rule, horizon);
    for (const auto& e : rep.perN)
        primitive = primitive || e.verdict == PrimitivityVerdict::Primitive;
    if (!primitive) {
        v.reason = "no primitivity witness within the horizon";
        return v;
    }

    auto coin = coincidence_test(rule, 1, horizon);
    if (!coin.found || !coin.uniform_waiting) {
        v.reason = coin.found ? "coincidence waiting time not uniform over levels"
                              : "no coincidence found within the horizon";
        return v;
    }
    v.waiting_k = coin.waiting_k;
    double ckjk = std::pow(v.matrix_bound.convert_to<double>() *
                               static_cast<double>(j0),
                           v.waiting_k);
    v.agreement_bound = 1.0 - (ckjk - 1.0) / ckjk;
    v.status = PurePointStatus::PurePoint;
    v.reason = "constant length, bounded matrices, primitive, waiting k = " +
               std::to_string(v.waiting_k);
    return v;
}

}  // namespace fusion
