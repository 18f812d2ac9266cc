#pragma once

#include <string>
#include <vector>

#include "fusion/engine.hpp"

namespace fusion {

// Relative control-point positions of same-type level-n supertiles
// within (n+2)-supertiles, as exact field elements per coordinate.
struct ReturnVectorSet {
    int level = 0;
    int stride = 1;  // > 1 when the rule was auto-induced to restore strong primitivity
    std::vector<std::vector<QuadPhi>> vectors;

    bool contains(const std::vector<QuadPhi>& v) const;
};

ReturnVectorSet return_vectors(const FusionRule& rule, int n);

// eta_n(alpha) = max over return vectors v of |exp(2 pi i alpha.v) - 1|;
// the phase is reduced mod 1 exactly, then evaluated in quad floats.
Float128 eta(const FusionRule& rule, int n, const std::vector<QuadPhi>& alpha);

enum class EigenvalueVerdict { Pass, Fail, Inconclusive };

struct EigenvalueReport {
    EigenvalueVerdict verdict = EigenvalueVerdict::Inconclusive;
    std::vector<double> etas;  // n = 1..horizon
    double fitted_ratio = 0;   // geometric ratio over the last levels (Pass path)
    double floor = 0;          // persistent lower bound (Fail path)
    std::string certificate;
};

struct EigenvalueTolerances {
    double pass_ratio_max = 0.95;  // geometric decay over the last 4 levels
    double fail_floor = 1e-3;      // eta stays above this on 3 post-burn-in levels
    int burn_in = 2;
};

EigenvalueReport eigenvalue_test(const FusionRule& rule, const std::vector<QuadPhi>& alpha,
                                 int horizon, const EigenvalueTolerances& tol = {});

struct ConstantLengthProfile {
    bool isConstantLength = false;
    std::vector<BigInt> L;  // per-step child count, levels 1..horizon
    std::string reason;     // first violation when not constant length
};

ConstantLengthProfile constant_length_profile(const FusionRule& rule, int horizon);

struct CoincidenceResult {
    bool found = false;
    int leastN = -1;          // least N where every supertile pair shares a slot
    int waiting_k = -1;       // N - n when uniform over the sampled n
    bool uniform_waiting = false;
};

// Least N in (n, maxN] such that every pair of level-N supertiles agrees
// at some aligned level-n slot; alignment needs constant length.
CoincidenceResult coincidence_test(const FusionRule& rule, int n, int maxN);

// Exact fraction of aligned level-0 slots on which all level-n
// supertiles carry the same tile type.
BigRat slot_agreement(const FusionRule& rule, int n);

enum class PurePointStatus { PurePoint, NotApplicable, Inconclusive };

struct PurePointVerdict {
    PurePointStatus status = PurePointStatus::Inconclusive;
    std::string reason;
    int waiting_k = -1;
    BigInt matrix_bound;           // C: max step-matrix entry over the horizon
    double agreement_bound = 0;    // 1 - ((C^k J^k - 1)/(C^k J^k))^m, m = 1
    std::vector<double> agreement_fractions;  // slot agreement per level
};

PurePointVerdict pure_point_verdict(const FusionRule& rule, int horizon);

}  // namespace fusion
