#pragma once

#include <string>
#include <vector>

#include "fusion/core.hpp"

namespace fusion {

// Exact counts of level-fromLevel supertiles inside each level-toLevel
// supertile; entry (i,j) = number of type-i children in P_toLevel(j).
struct TransitionMatrix {
    int fromLevel = 0;
    int toLevel = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<BigInt> e;  // row-major

    TransitionMatrix() = default;
    TransitionMatrix(int from, int to, std::size_t r, std::size_t c)
        : fromLevel(from), toLevel(to), rows(r), cols(c), e(r * c) {}

    BigInt& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }

    BigInt column_sum(std::size_t j) const {
        BigInt s = 0;
        for (std::size_t i = 0; i < rows; ++i) s += at(i, j);
        return s;
    }
    bool all_positive() const {
        for (const auto& v : e)
            if (v <= 0) return false;
        return true;
    }
};

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b);

// M_{n,N} for n < N, built from single-step counts.
TransitionMatrix transition_matrix(const FusionRule& rule, int n, int N);

struct PopulationVector {
    int level = 0;
    std::vector<BigInt> counts;
};

// Column j of M_{t,N}: how many level-t supertiles of each type sit in
// P_N(j).
PopulationVector population(const FusionRule& rule, int N, int j, int t);

// Expansion cap; FUSIONLAB_CAP overrides the default 10^7 tiles.
BigInt expansion_cap();

// Subdivide P_N(j) down to level t < N. Throws ExpansionTooLarge with
// the exact count when the patch would exceed the cap.
ConcretePatch expand(const FusionRule& rule, int N, int j, int t,
                     const BigInt& cap = expansion_cap());

// Translation-only occurrence count of needle inside haystack.
long long count_patch(const ConcretePatch& haystack, const ConcretePatch& needle);

// 1-D occurrence start positions (tile indices).
std::vector<long long> find_patch_1d(const std::vector<int>& haystack,
                                     const std::vector<int>& needle);

enum class PrimitivityVerdict { Primitive, NotPrimitive, Inconclusive };

struct PrimitivityEntry {
    int n = 0;
    PrimitivityVerdict verdict = PrimitivityVerdict::Inconclusive;
    int witnessN = -1;          // least N <= horizon with M_{n,N} > 0
    std::string certificate;    // stable zero pattern, when verdict is negative
};

struct PrimitivityReport {
    std::vector<PrimitivityEntry> perN;
};

PrimitivityReport primitivity(const FusionRule& rule, int horizon);

// step n entry is true iff M_{n,n+1} is entrywise positive, n = 0..horizon-1
std::vector<bool> strong_primitivity(const FusionRule& rule, int horizon);

// Vol((boundary A)^{+r})/Vol(A) per level-n supertile, with the
// rational over-approximation 2r(w+h) + 4r^2 of the thickened boundary.
std::vector<QuadPhi> van_hove_diagnostic(const FusionRule& rule, int n, const BigRat& r);

// Number of translation classes of edge-adjacent level-n supertile
// pairs seen inside level-(n+2) supertiles (a certified lower bound on
// the admitted set).
long adjacency_complexity(const FusionRule& rule, int n);

struct RankBound {
    std::size_t min_types = 0;
    int argmin = 0;
};

RankBound rank_bound(const FusionRule& rule, int horizon);

// Rule whose level-m supertiles are the base rule's level-(stride*m)
// supertiles.
FusionRule induced_rule(const FusionRule& rule, int stride);

}  // namespace fusion
