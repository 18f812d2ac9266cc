#include "doctest.h"
#include "fusion/entropy.hpp"
#include "fusion/ruledsl.hpp"

using namespace fusion;

TEST_CASE("sturmian complexity of the fibonacci word") {
    FusionRule fib = catalog("fibonacci_1d", {{"geometry", "unit"}});
    auto prof = complexity(fib, 12, 12);
    for (int n = 1; n <= 12; ++n) CHECK(prof.counts[n - 1] == n + 1);
    CHECK_THROWS_AS(complexity(catalog("fibonacci_1d"), 3, 5), NotUnitGeometryError);
}

TEST_CASE("periodic complexity is flat") {
    FusionRule per = parse_rule(
        {"dim 1\ntile a len 1\ntile b len 1\nlevel(n): a -> a b a b ; b -> a b\n", "per"});
    auto prof = complexity(per, 8, 5);
    for (int n = 1; n <= 8; ++n) CHECK(prof.counts[n - 1] == 2);
    auto est = entropy_estimate(prof);
    CHECK(est.sequence[0] == doctest::Approx(std::log(2.0)));
    CHECK(est.limit < 0.1);
}

TEST_CASE("complexity lower bounds grow with the harvest") {
    FusionRule tm = catalog("two_measures");
    auto small = complexity(tm, 6, 2);
    auto large = complexity(tm, 6, 3);
    for (int n = 1; n <= 6; ++n) {
        CHECK(large.counts[n - 1] >= small.counts[n - 1]);
        // sanity ceiling: never more than all words over the alphabet
        CHECK(large.counts[n - 1] <= (1LL << n));
    }
}

TEST_CASE("square windows in the fibonacci grid") {
    FusionRule fd = catalog("fibonacci_dpv");
    auto prof = complexity(fd, 3, 5);
    CHECK(prof.dim == 2);
    CHECK(prof.counts[0] == 4);  // all four prototiles occur
    CHECK(prof.counts[1] > prof.counts[0]);
    auto est = entropy_estimate(prof);
    CHECK(est.sequence[0] == doctest::Approx(std::log(4.0)));
}

TEST_CASE("entropy estimates decay for the fibonacci word") {
    FusionRule fib = catalog("fibonacci_1d", {{"geometry", "unit"}});
    auto est = entropy_estimate(complexity(fib, 12, 12));
    CHECK(est.sequence.front() > est.sequence.back());
    CHECK(est.limit < 0.25);
}

TEST_CASE("zero entropy bound") {
    auto fd = zero_entropy_bound(catalog("fibonacci_dpv"), 8);
    CHECK(fd.verdict == EntropyBoundVerdict::ZeroEntropyBoundHolds);
    for (std::size_t i = 1; i < fd.sequence.size(); ++i)
        CHECK(fd.sequence[i] < fd.sequence[i - 1]);

    // three levels with the type count exploding like the volume
    FusionRule bad = parse_rule({"dim 1\n"
                                 "tile a len 1\n"
                                 "tile b len 1\n"
                                 "level(n): a -> a b ; b -> b a\n",
                                 "bad"});
    // j_n is constant here, so fake the failure mode with a tiny horizon
    auto rep = zero_entropy_bound(bad, 2);
    CHECK(rep.verdict == EntropyBoundVerdict::Silent);  // too short to certify
}
