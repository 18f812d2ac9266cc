#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fusion/errors.hpp"
#include "fusion/quadfield.hpp"

namespace fusion {

struct Prototile {
    int id = 0;
    std::string label;
    QuadPhi width;   // length in dimension 1
    QuadPhi height;  // 1 in dimension 1

    QuadPhi volume() const { return width * height; }
};

struct Child2D {
    int index = 0;  // level-(n-1) supertile index
    QuadPhi x;
    QuadPhi y;
};

// Composition of one n-supertile out of level-(n-1) supertiles.
// Dimension 1 uses `word` (left to right); dimension 2 uses `placed`.
struct SupertileDef {
    int level = 0;
    int index = 0;
    std::optional<std::string> label;
    std::vector<int> word;
    std::vector<Child2D> placed;

    std::size_t child_count() const {
        return word.empty() ? placed.size() : word.size();
    }
};

using LevelGenerator = std::function<std::vector<SupertileDef>(int)>;

// A fusion rule: prototiles plus a way to produce the supertile sets
// P_n for each level n >= 1. Immutable after construction; level
// materialization is memoized behind a mutex.
class FusionRule {
public:
    FusionRule(int dimension, std::vector<Prototile> prototiles,
               LevelGenerator generator, std::string name = {})
        : dimension_(dimension),
          prototiles_(std::move(prototiles)),
          generator_(std::move(generator)),
          name_(std::move(name)),
          cache_(std::make_shared<Cache>()) {}

    int dimension() const { return dimension_; }
    const std::vector<Prototile>& prototiles() const { return prototiles_; }
    const std::string& name() const { return name_; }

    bool asserted_recognizable() const { return asserted_recognizable_; }
    void set_asserted_recognizable(bool v) { asserted_recognizable_ = v; }

    const std::optional<std::string>& source() const { return source_; }
    void set_source(std::string s) { source_ = std::move(s); }

    // Supertile set for level n (level 0 = prototiles, queried separately).
    const std::vector<SupertileDef>& level(int n) const;

    // Number of supertile types at level n; level 0 counts prototiles.
    std::size_t type_count(int n) const {
        return n == 0 ? prototiles_.size() : level(n).size();
    }

    // Exact volume of P_n(j); memoized.
    QuadPhi volume(int n, int j) const;

    // Exact width/height of the supertile's support (length in dim 1).
    QuadPhi width(int n, int j) const;
    QuadPhi height(int n, int j) const;

    // Materializing twice must give identical definitions.
    bool generator_deterministic(int n) const;

private:
    const std::vector<SupertileDef>& materialize(int n) const;

    int dimension_;
    std::vector<Prototile> prototiles_;
    LevelGenerator generator_;
    std::string name_;
    bool asserted_recognizable_ = false;
    std::optional<std::string> source_;

    // shared so copies of a rule reuse one memo store
    struct Cache {
        std::mutex mu;
        std::map<int, std::vector<SupertileDef>> levels;
        std::map<std::pair<int, int>, QuadPhi> volumes;
        std::map<std::pair<int, int>, std::pair<QuadPhi, QuadPhi>> extents;
    };
    std::shared_ptr<Cache> cache_;
};

struct Placement {
    int index = 0;  // type index at the patch's level
    QuadPhi x;
    QuadPhi y;
};

// A finite patch of level-`level` supertiles. Dimension 1 stores the
// word left to right (offsets are prefix sums of type lengths);
// dimension 2 stores exact placements.
struct ConcretePatch {
    int dimension = 1;
    int level = 0;
    std::vector<int> word;
    std::vector<Placement> tiles;

    std::size_t size() const { return dimension == 1 ? word.size() : tiles.size(); }
};

struct ValidationIssue {
    int level = 0;
    int index = -1;  // supertile index, -1 for rule-wide issues
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Checks all type invariants on levels 1..horizon, including the 2-D
// exact-tiling condition per supertile.
ValidationReport validate(const FusionRule& rule, int horizon);

}  // namespace fusion
