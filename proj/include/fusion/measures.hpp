#pragma once

#include <string>
#include <vector>

#include "fusion/engine.hpp"

namespace fusion {

// Volume-normalized transition columns: column k is
// M_{n,N}(*,k) / sum_l M_{n,N}(l,k) Vol(P_n(l)).
struct DirectionMatrix {
    int fromLevel = 0;
    int toLevel = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<QuadPhi> e;  // row-major

    QuadPhi& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
    const QuadPhi& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
};

DirectionMatrix direction_matrix(const FusionRule& rule, int n, int N);

// Max pairwise L1 distance between direction columns (the hull
// diameter: the max of a convex function sits at vertices, and the
// columns contain all vertices).
QuadPhi delta_diameter(const FusionRule& rule, int n, int N);

// delta_n: min over columns of M_{n-1,n} of (min entry / max entry).
QuadPhi balance_delta(const FusionRule& rule, int n);

enum class ErgodicityStatus { UniquelyErgodic, NotUniquelyErgodic, Inconclusive };

struct ErgodicityVerdict {
    ErgodicityStatus status = ErgodicityStatus::Inconclusive;
    char clause = '-';        // which test fired: 'a', 'b', or 'c'
    std::string certificate;
    std::vector<QuadPhi> diameters;  // Delta_{0,N} diameters, N = 1..horizon
};

struct ErgodicityTolerances {
    double fit_exponent_max = 1.05;  // clause (b): delta_n >= c/n^p needs p <= this
    double gap_ratio_max = 0.8;      // clause (c): diameter gaps must shrink at least this fast
    double diameter_floor_min = 1e-6;
};

// In order: (a) strong primitivity with level-independent step matrices
// (directly or on an induced 2- or 3-step rule), (b) fitted lower bound
// delta_n >= c/n^p with p <= 1 so sum delta_n diverges, (c) a persistent
// positive floor under the diameter sequence. Otherwise Inconclusive.
ErgodicityVerdict unique_ergodicity(const FusionRule& rule, int horizon,
                                    const ErgodicityTolerances& tol = {});

struct FrequencyVector {
    int level = 0;
    std::vector<QuadPhi> entries;
};

using SupertileSequence = std::vector<int>;  // label k_n per level, index 0 = level 1

// rho_{n,N}(i) = M_{n,N}(i, k_N) / Vol(P_N(k_N)).
FrequencyVector kappa_frequencies(const FusionRule& rule, const SupertileSequence& kappa,
                                  int n, int N);

struct FrequencySeries {
    std::vector<int> levels;
    std::vector<QuadPhi> partial_sums;
    std::vector<QuadPhi> gaps;  // |sum_{k+1} - sum_k|
};

// Partial sums sum_i #(P in P_n(i)) rho_n(i) over the given levels.
FrequencySeries patch_frequency(const FusionRule& rule,
                                const std::vector<FrequencyVector>& rho,
                                const ConcretePatch& patch, const std::vector<int>& levels);

struct ErgodicVertices {
    std::vector<int> vertex_columns;   // one representative per duplicate group
    std::vector<int> multiplicity;
    std::vector<QuadPhi> separation;   // exact L1 distance to the hull of the others
};

// Hull vertices among direction-matrix columns, with their exact L1
// separation from the hull of the remaining columns.
ErgodicVertices ergodic_vertices(const FusionRule& rule, int n, int N);

struct PairFrequencyReport {
    FrequencySeries pair_series;   // freq partial sums of P united with P+v
    FrequencySeries base_series;   // freq partial sums of P
    std::vector<double> ratio_to_square;  // pair / base^2 per level
};

// Frequency of the doubled patch P united with its translate by v
// (1-D only; v an exact displacement).
PairFrequencyReport pair_frequency(const FusionRule& rule,
                                   const std::vector<FrequencyVector>& rho,
                                   const ConcretePatch& patch, const QuadPhi& v,
                                   const std::vector<int>& levels);

}  // namespace fusion
