#pragma once

#include <string>
#include <vector>

#include "fusion/engine.hpp"

namespace fusion {

struct BorderForcingResult {
    bool forced = false;
    int leastN = -1;  // least N in [n, maxN] with constant flanks, -1 if none
};

// Border forcing at level n: every occurrence of an N-supertile (taken
// from (N+2)-level expansions) has the same level-n neighbor on each
// side.
BorderForcingResult border_forcing_check(const FusionRule& rule, int n, int maxN);

// One circle per level-n supertile type, endpoints glued along admitted
// adjacencies; slot i is the left endpoint of cell i, slot j_n + i its
// right endpoint.
struct ApComplex {
    int level = 0;
    std::vector<QuadPhi> cellLengths;
    std::vector<int> vertexClasses;  // class id per endpoint slot
    int vertexCount = 0;
    // row s counts traversals of each level-n circle by the level-(n+1)
    // cell s; equals M_{n,n+1} transposed
    std::vector<std::vector<BigInt>> windingMatrix;
};

ApComplex ap_complex(const FusionRule& rule, int n);

struct DirectLimitReport {
    bool border_forced = false;
    std::string label;  // "pre-collaring, informational only" when not forced
    std::vector<std::vector<std::vector<BigInt>>> pullbacks;  // winding per step
    std::vector<BigInt> determinants;  // square steps only
    bool stabilized = false;
    std::string groupDescription;
    std::vector<int> ranks;  // rank over Q per step
    std::vector<std::vector<BigInt>> invariantFactors;  // cokernel per step
};

DirectLimitReport h1_direct_limit(const FusionRule& rule, int horizon);

}  // namespace fusion
