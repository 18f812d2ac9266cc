#pragma once

#include <string>
#include <vector>

#include "fusion/engine.hpp"

namespace fusion {

// Distinct length-n windows (1-D) or n-by-n squares (2-D) seen inside
// harvestLevel-supertile expansions; a certified lower bound of the
// admitted count.
struct ComplexityProfile {
    int dim = 1;
    int harvestLevel = 0;
    std::vector<long long> counts;  // index k holds #_{k+1}
};

ComplexityProfile complexity(const FusionRule& rule, int maxn, int harvestLevel);

struct EntropyEstimate {
    std::vector<double> sequence;  // log(#_n) / n^d
    double limit = 0;              // monotone-tail extrapolation, a lower-bound estimate
};

EntropyEstimate entropy_estimate(const ComplexityProfile& profile);

enum class EntropyBoundVerdict { ZeroEntropyBoundHolds, Silent };

struct EntropyBoundReport {
    std::vector<double> sequence;  // log(j_n) / d_n^d, levels 1..horizon
    EntropyBoundVerdict verdict = EntropyBoundVerdict::Silent;
};

// log(type count) against the supertile diameter surrogate (length in
// 1-D, width + height in 2-D); a decaying sequence certifies zero
// configurational entropy.
EntropyBoundReport zero_entropy_bound(const FusionRule& rule, int horizon);

}  // namespace fusion
