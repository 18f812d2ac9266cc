#include <random>

#include "doctest.h"
#include "fusion/engine.hpp"
#include "fusion/ruledsl.hpp"

using namespace fusion;

namespace {

long long count_patch_naive(const std::vector<int>& hay, const std::vector<int>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return 0;
    long long c = 0;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < needle.size(); ++k)
            if (hay[i + k] != needle[k]) ok = false;
        if (ok) ++c;
    }
    return c;
}

ConcretePatch word_patch(std::vector<int> w) {
    ConcretePatch p;
    p.dimension = 1;
    p.word = std::move(w);
    return p;
}

}  // namespace

TEST_CASE("transition matrices match the paper examples") {
    FusionRule tm = catalog("two_measures");
    for (int n = 1; n <= 4; ++n) {
        auto m = transition_matrix(tm, n - 1, n);
        BigInt p = boost::multiprecision::pow(BigInt(10), n);
        CHECK(m.at(0, 0) == p);
        CHECK(m.at(0, 1) == 1);
        CHECK(m.at(1, 0) == 1);
        CHECK(m.at(1, 1) == p);
    }
    FusionRule tk = catalog("three_letter_kappa");
    auto m = transition_matrix(tk, 1, 2);
    CHECK(m.at(0, 0) == 200);
    CHECK(m.at(0, 2) == 100);
    CHECK(m.at(2, 2) == 2);
    FusionRule cw = catalog("coincidence_waiting");
    auto mc = transition_matrix(cw, 2, 3);
    CHECK(mc.at(0, 0) == 501);
    CHECK(mc.at(1, 1) == 501);
    FusionRule fd = catalog("fibonacci_dpv");
    for (int n = 1; n <= 4; ++n) {
        auto mf = transition_matrix(fd, n - 1, n);
        BigInt want[4][4] = {{1, 1, 1, 1}, {1, 0, 1, 0}, {1, 1, 0, 0}, {1, 0, 0, 0}};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(mf.at(i, j) == want[i][j]);
    }
    FusionRule np = catalog("nonpisot_dpv");
    auto mn = transition_matrix(np, 0, 1);
    BigInt want[4][4] = {{1, 1, 1, 1}, {3, 0, 3, 0}, {3, 3, 0, 0}, {9, 0, 0, 0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(mn.at(i, j) == want[i][j]);
}

TEST_CASE("matrix composition law") {
    for (const char* name : {"chacon", "two_measures", "fibonacci_dpv", "scrambled_fibonacci"}) {
        FusionRule r = catalog(name);
        auto lhs = transition_matrix(r, 0, 3);
        auto rhs = multiply(transition_matrix(r, 0, 1),
                            multiply(transition_matrix(r, 1, 2), transition_matrix(r, 2, 3)));
        CHECK(lhs.e == rhs.e);
    }
}

TEST_CASE("expansion words") {
    FusionRule ch = catalog("chacon");
    auto p = expand(ch, 2, 0, 0);
    CHECK(p.word == std::vector<int>{0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0});
    auto self = expand(ch, 2, 0, 2);
    CHECK(self.word == std::vector<int>{0});
}

TEST_CASE("expansion populations equal matrix columns") {
    for (const char* name : {"chacon", "two_measures", "fibonacci_dpv", "nonpisot_dpv",
                             "three_tile_solenoid", "ap_example"}) {
        FusionRule r = catalog(name);
        for (int N = 1; N <= 3; ++N)
            for (int t = 0; t < N; ++t)
                for (std::size_t j = 0; j < r.type_count(N); ++j) {
                    auto pv = population(r, N, static_cast<int>(j), t);
                    ConcretePatch p;
                    try {
                        p = expand(r, N, static_cast<int>(j), t);
                    } catch (const ExpansionTooLargeError&) {
                        continue;
                    }
                    std::vector<BigInt> counts(r.type_count(t));
                    for (int c : p.word) counts[c] += 1;
                    for (const auto& c : p.tiles) counts[c.index] += 1;
                    CHECK(counts == pv.counts);
                }
    }
}

TEST_CASE("expansion cap") {
    FusionRule tm = catalog("two_measures");
    CHECK_THROWS_AS(expand(tm, 5, 0, 0, BigInt(1000)), ExpansionTooLargeError);
    try {
        expand(tm, 2, 0, 0, BigInt(3));
    } catch (const ExpansionTooLargeError& e) {
        CHECK(e.count == 1111);  // 100 a-words of 11 tiles, one b-word, cover of P_2(a)
    }
}

TEST_CASE("patch counting agrees with a naive scan") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<int> alpha(0, trial % 3 + 1);
        std::uniform_int_distribution<int> hlen(1, 200), nlen(1, 6);
        std::vector<int> hay(hlen(rng)), needle(nlen(rng));
        for (auto& v : hay) v = alpha(rng);
        for (auto& v : needle) v = alpha(rng);
        CHECK(count_patch(word_patch(hay), word_patch(needle)) ==
              count_patch_naive(hay, needle));
    }
    CHECK(count_patch(word_patch({0, 0, 1, 0, 0}), word_patch({0, 1, 0})) == 1);
}

TEST_CASE("patch counting in two dimensions") {
    FusionRule fd = catalog("fibonacci_dpv");
    auto big = expand(fd, 3, 0, 0);
    auto small = expand(fd, 1, 0, 0);
    CHECK(big.tiles.size() == 25);
    // copies of the level-1 a block inside the level-3 a block
    auto m = transition_matrix(fd, 1, 3);
    CHECK(count_patch(big, small) >= m.at(0, 0).convert_to<long long>());
    CHECK(count_patch(big, big) == 1);
    // single tile needle counts tiles of that type
    ConcretePatch one;
    one.dimension = 2;
    one.tiles = {{3, QuadPhi(0), QuadPhi(0)}};
    auto pv = population(fd, 3, 0, 0);
    CHECK(count_patch(big, one) == pv.counts[3].convert_to<long long>());
}

TEST_CASE("primitivity verdicts") {
    FusionRule ch = catalog("chacon");
    auto rep = primitivity(ch, 6);
    for (const auto& e : rep.perN) {
        CHECK(e.verdict == PrimitivityVerdict::NotPrimitive);
        CHECK(!e.certificate.empty());
    }
    FusionRule fib = catalog("fibonacci_1d");
    auto repf = primitivity(fib, 6);
    for (const auto& e : repf.perN) {
        if (e.n + 2 <= 6) {
            CHECK(e.verdict == PrimitivityVerdict::Primitive);
            CHECK(e.witnessN == e.n + 2);
        } else {
            // witness would sit past the horizon
            CHECK(e.verdict == PrimitivityVerdict::Inconclusive);
        }
    }
    FusionRule tm = catalog("two_measures");
    auto rept = primitivity(tm, 4);
    for (const auto& e : rept.perN) {
        CHECK(e.verdict == PrimitivityVerdict::Primitive);
        CHECK(e.witnessN == e.n + 1);
    }
}

TEST_CASE("strong primitivity per step") {
    auto tm = strong_primitivity(catalog("two_measures"), 5);
    CHECK(std::all_of(tm.begin(), tm.end(), [](bool b) { return b; }));
    auto fib = strong_primitivity(catalog("fibonacci_1d"), 5);
    CHECK(std::none_of(fib.begin(), fib.end(), [](bool b) { return b; }));
    auto np = strong_primitivity(catalog("nonpisot_dpv"), 4);
    CHECK(std::none_of(np.begin(), np.end(), [](bool b) { return b; }));
}

TEST_CASE("van hove diagnostics") {
    FusionRule tm = catalog("two_measures");
    auto v1 = van_hove_diagnostic(tm, 1, BigRat(1));
    CHECK(v1[0] == QuadPhi(BigRat(2, 11)));
    CHECK(van_hove_diagnostic(tm, 1, BigRat(0))[0] == QuadPhi(0));
    FusionRule fd = catalog("fibonacci_dpv");
    // 2r(w+h)+4r^2 over wh falls as supertiles grow
    auto prev = QuadPhi(1000);
    for (int n = 1; n <= 8; ++n) {
        auto v = van_hove_diagnostic(fd, n, BigRat(1))[0];
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("adjacency complexity") {
    FusionRule fd = catalog("fibonacci_dpv");
    long base = adjacency_complexity(fd, 1);
    for (int n = 1; n <= 5; ++n) CHECK(adjacency_complexity(fd, n) == base);
    FusionRule np = catalog("nonpisot_dpv");
    long last = 0;
    for (int n = 1; n <= 4; ++n) {
        long c = adjacency_complexity(np, n);
        CHECK(c > last);
        last = c;
    }
    CHECK_THROWS_AS(adjacency_complexity(catalog("chacon"), 1), FusionError);
}

TEST_CASE("rank bound") {
    CHECK(rank_bound(catalog("two_measures"), 5).min_types == 2);
    CHECK(rank_bound(catalog("fibonacci_dpv"), 5).min_types == 4);
    auto sc = rank_bound(catalog("scrambled_fibonacci", {{"form", "exceptional"}}), 5);
    CHECK(sc.min_types == 2);
}

TEST_CASE("induced rules") {
    FusionRule fib = catalog("fibonacci_1d");
    FusionRule ind = induced_rule(fib, 2);
    auto m = transition_matrix(ind, 0, 1);
    CHECK(m.at(0, 0) == 2);
    CHECK(m.at(0, 1) == 1);
    CHECK(m.at(1, 0) == 1);
    CHECK(m.at(1, 1) == 1);
    CHECK(ind.volume(1, 0) == fib.volume(2, 0));
    CHECK(strong_primitivity(ind, 4) == std::vector<bool>(4, true));

    FusionRule fd = catalog("fibonacci_dpv");
    FusionRule ind2 = induced_rule(fd, 2);
    CHECK(ind2.level(1)[0].placed.size() == 9);
    CHECK(ind2.width(1, 0) == fd.width(2, 0));
    CHECK(validate(ind2, 2).ok());
}
