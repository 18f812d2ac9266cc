#include "doctest.h"
#include "fusion/core.hpp"

using namespace fusion;

namespace {

FusionRule chacon_like() {
    std::vector<Prototile> tiles = {{0, "a", QuadPhi(1), QuadPhi(1)},
                                    {1, "b", QuadPhi(1), QuadPhi(1)}};
    LevelGenerator gen = [](int n) {
        std::vector<SupertileDef> defs(2);
        defs[0] = {n, 0, "a", {0, 0, 1, 0}, {}};
        defs[1] = {n, 1, "b", {1}, {}};
        return defs;
    };
    return FusionRule(1, std::move(tiles), std::move(gen), "chacon_like");
}

FusionRule square_grid() {
    std::vector<Prototile> tiles = {{0, "s", QuadPhi(1), QuadPhi(1)}};
    LevelGenerator gen = [](int n) {
        QuadPhi s(BigInt(1) << (n - 1));  // child side length
        SupertileDef d{n, 0, "s", {}, {}};
        d.placed = {{0, QuadPhi(0), QuadPhi(0)},
                    {0, s, QuadPhi(0)},
                    {0, QuadPhi(0), s},
                    {0, s, s}};
        return std::vector<SupertileDef>{d};
    };
    return FusionRule(2, std::move(tiles), std::move(gen), "square_grid");
}

}  // namespace

TEST_CASE("level materialization and memoization") {
    FusionRule r = chacon_like();
    CHECK(r.type_count(0) == 2);
    CHECK(r.level(3).size() == 2);
    CHECK(r.level(3)[0].word == std::vector<int>{0, 0, 1, 0});
    CHECK(&r.level(3) == &r.level(3));
    CHECK(r.generator_deterministic(2));
}

TEST_CASE("volumes and extents in one dimension") {
    FusionRule r = chacon_like();
    // |P_n(a)| = (3^{n+1} - 1)/2
    CHECK(r.volume(1, 0) == QuadPhi(4));
    CHECK(r.volume(2, 0) == QuadPhi(13));
    CHECK(r.volume(3, 0) == QuadPhi(40));
    CHECK(r.volume(3, 1) == QuadPhi(1));
    CHECK(r.width(2, 0) == QuadPhi(13));
    CHECK(r.height(2, 0) == QuadPhi(1));
}

TEST_CASE("volumes and extents in two dimensions") {
    FusionRule r = square_grid();
    CHECK(r.width(1, 0) == QuadPhi(2));
    CHECK(r.height(1, 0) == QuadPhi(2));
    CHECK(r.volume(2, 0) == QuadPhi(16));
    CHECK(r.width(3, 0) == QuadPhi(8));
}

TEST_CASE("validate accepts well-formed rules") {
    FusionRule r1 = chacon_like();
    CHECK(validate(r1, 4).ok());
    FusionRule r2 = square_grid();
    CHECK(validate(r2, 4).ok());
}

TEST_CASE("validate rejects overlapping children") {
    std::vector<Prototile> tiles = {{0, "s", QuadPhi(1), QuadPhi(1)}};
    LevelGenerator gen = [](int n) {
        SupertileDef d{n, 0, "s", {}, {}};
        d.placed = {{0, QuadPhi(0), QuadPhi(0)}, {0, QuadPhi(BigRat(1, 2)), QuadPhi(0)}};
        return std::vector<SupertileDef>{d};
    };
    FusionRule r(2, std::move(tiles), std::move(gen), "overlap");
    auto rep = validate(r, 1);
    REQUIRE(!rep.ok());
    CHECK(rep.issues[0].message.find("overlap") != std::string::npos);
}

TEST_CASE("validate rejects gappy placements") {
    std::vector<Prototile> tiles = {{0, "s", QuadPhi(1), QuadPhi(1)}};
    LevelGenerator gen = [](int n) {
        SupertileDef d{n, 0, "s", {}, {}};
        d.placed = {{0, QuadPhi(0), QuadPhi(0)}, {0, QuadPhi(3), QuadPhi(0)}};
        return std::vector<SupertileDef>{d};
    };
    FusionRule r(2, std::move(tiles), std::move(gen), "gap");
    auto rep = validate(r, 1);
    REQUIRE(!rep.ok());
    CHECK(rep.issues[0].message.find("tile the bounding rectangle") != std::string::npos);
}

TEST_CASE("validate flags nondeterministic generators") {
    std::vector<Prototile> tiles = {{0, "a", QuadPhi(1), QuadPhi(1)}};
    auto counter = std::make_shared<int>(0);
    LevelGenerator gen = [counter](int n) {
        SupertileDef d{n, 0, "a", {0}, {}};
        if (++*counter > 1) d.word.push_back(0);
        return std::vector<SupertileDef>{d};
    };
    FusionRule r(1, std::move(tiles), std::move(gen), "flaky");
    auto rep = validate(r, 1);
    REQUIRE(!rep.ok());
    CHECK(rep.issues[0].message.find("deterministic") != std::string::npos);
}

TEST_CASE("bad child indices are rejected") {
    std::vector<Prototile> tiles = {{0, "a", QuadPhi(1), QuadPhi(1)}};
    LevelGenerator gen = [](int n) {
        return std::vector<SupertileDef>{{n, 0, "a", {0, 5}, {}}};
    };
    FusionRule r(1, std::move(tiles), std::move(gen), "badidx");
    CHECK_THROWS_AS(r.level(1), InvalidChildIndexError);
}
