#include "fusion/entropy.hpp"

#include <cmath>
#include <set>

namespace fusion {

namespace {

void require_unit(const FusionRule& rule) {
    for (std::size_t j = 0; j < rule.type_count(0); ++j)
        if (rule.width(0, static_cast<int>(j)) != QuadPhi(1) ||
            rule.height(0, static_cast<int>(j)) != QuadPhi(1))
            throw NotUnitGeometryError("window counting needs unit-size prototiles");
}

}  // namespace

ComplexityProfile complexity(const FusionRule& rule, int maxn, int harvestLevel) {
    require_unit(rule);
    ComplexityProfile prof;
    prof.dim = rule.dimension();
    prof.harvestLevel = harvestLevel;
    if (prof.dim == 1) {
        std::vector<std::vector<int>> words;
        for (std::size_t j = 0; j < rule.type_count(harvestLevel); ++j)
            words.push_back(expand(rule, harvestLevel, static_cast<int>(j), 0).word);
        for (int n = 1; n <= maxn; ++n) {
            std::set<std::vector<int>> seen;
            for (const auto& w : words)
                for (std::size_t i = 0; i + n <= w.size(); ++i)
                    seen.insert(std::vector<int>(w.begin() + i, w.begin() + i + n));
            prof.counts.push_back(static_cast<long long>(seen.size()));
        }
        return prof;
    }
    // unit-square grids from exact placements
    std::vector<std::vector<std::vector<int>>> grids;
    for (std::size_t j = 0; j < rule.type_count(harvestLevel); ++j) {
        ConcretePatch p = expand(rule, harvestLevel, static_cast<int>(j), 0);
        long long w = rule.width(harvestLevel, static_cast<int>(j)).floor().convert_to<long long>();
        long long h = rule.height(harvestLevel, static_cast<int>(j)).floor().convert_to<long long>();
        std::vector<std::vector<int>> g(h, std::vector<int>(w, -1));
        for (const auto& t : p.tiles)
            g[t.y.floor().convert_to<long long>()][t.x.floor().convert_to<long long>()] =
                t.index;
        grids.push_back(std::move(g));
    }
    for (int n = 1; n <= maxn; ++n) {
        std::set<std::vector<int>> seen;
        for (const auto& g : grids) {
            long long h = static_cast<long long>(g.size());
            long long w = h ? static_cast<long long>(g[0].size()) : 0;
            for (long long y = 0; y + n <= h; ++y)
                for (long long x = 0; x + n <= w; ++x) {
                    std::vector<int> win;
                    win.reserve(n * n);
                    for (int dy = 0; dy < n; ++dy)
                        for (int dx = 0; dx < n; ++dx) win.push_back(g[y + dy][x + dx]);
                    seen.insert(std::move(win));
                }
        }
        prof.counts.push_back(static_cast<long long>(seen.size()));
    }
    return prof;
}

EntropyEstimate entropy_estimate(const ComplexityProfile& profile) {
    EntropyEstimate est;
    for (std::size_t i = 0; i < profile.counts.size(); ++i) {
        double n = static_cast<double>(i + 1);
        est.sequence.push_back(std::log(static_cast<double>(profile.counts[i])) /
                               std::pow(n, profile.dim));
    }
    if (est.sequence.empty()) return est;
    est.limit = est.sequence.back();
    for (std::size_t i = est.sequence.size() >= 3 ? est.sequence.size() - 3 : 0;
         i < est.sequence.size(); ++i)
        est.limit = std::min(est.limit, est.sequence[i]);
    return est;
}

EntropyBoundReport zero_entropy_bound(const FusionRule& rule, int horizon) {
    EntropyBoundReport rep;
    int d = rule.dimension();
    for (int n = 1; n <= horizon; ++n) {
        double jn = static_cast<double>(rule.type_count(n));
        double dn = 0;
        for (std::size_t j = 0; j < rule.type_count(n); ++j) {
            QuadPhi diam = d == 1 ? rule.width(n, static_cast<int>(j))
                                  : rule.width(n, static_cast<int>(j)) +
                                        rule.height(n, static_cast<int>(j));
            dn = std::max(dn, diam.to_double());
        }
        rep.sequence.push_back(std::log(jn) / std::pow(dn, d));
    }
    bool decaying = rep.sequence.size() >= 3;
    for (std::size_t i = rep.sequence.size() >= 3 ? rep.sequence.size() - 2 : 1;
         decaying && i < rep.sequence.size(); ++i)
        decaying = rep.sequence[i] < rep.sequence[i - 1];
    double mx = 0;
    for (double v : rep.sequence) mx = std::max(mx, v);
    if (decaying && rep.sequence.back() < 0.5 * mx)
        rep.verdict = EntropyBoundVerdict::ZeroEntropyBoundHolds;
    return rep;
}

}  // namespace fusion
