// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "fusion/cohomology1d.hpp"
#include "fusion/entropy.hpp"
#include "fusion/measures.hpp"
#include "fusion/ruledsl.hpp"
#include "fusion/spectral.hpp"

using namespace fusion;

namespace {

int failures = 0;

void run(int id, const char* title, double limit_s, const std::function<bool()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string err;
    try {
        ok = body();
    } catch (const std::exception& e) {
        err = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= limit_s) ok = false;
    if (!ok) ++failures;
    std::printf("criterion %2d [%s]: %s (%.2fs)%s%s\n", id, title, ok ? "PASS" : "FAIL",
                secs, err.empty() ? "" : " error: ", err.c_str());
}

BigInt fibnum(int n) {
    BigInt a = 1, b = 1;
    for (int i = 2; i < n; ++i) {
        BigInt c = a + b;
        a = b;
        b = c;
    }
    return n <= 1 ? BigInt(1) : b;
}

long long naive_count(const std::vector<int>& hay, const std::vector<int>& needle) {
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

}  // namespace

int main() {
    run(1, "two-measure frequencies and non-ergodicity", 5.0, [] {
        FusionRule tm = catalog("two_measures");
        SupertileSequence kappa(6, 0);
        BigRat alpha(1);
        BigInt p = 10;
        for (int N = 1; N <= 4; ++N) {
            alpha *= BigRat(p - 1, p + 1);
            p *= 10;
            auto rho = kappa_frequencies(tm, kappa, 0, N);
            QuadPhi share = rho.entries[0] / (rho.entries[0] + rho.entries[1]);
            if (share != QuadPhi((1 + alpha) / 2)) return false;
        }
        auto v = unique_ergodicity(tm, 5);
        if (v.status != ErgodicityStatus::NotUniquelyErgodic) return false;
        for (int N = 1; N <= 5; ++N)
            if (delta_diameter(tm, 0, N) < QuadPhi(BigRat(8, 5))) return false;
        return true;
    });

    run(2, "non-ergodic kappa averages the extremes", 5.0, [] {
        FusionRule tk = catalog("three_letter_kappa");
        const int N = 5;
        auto rho_a = kappa_frequencies(tk, SupertileSequence(N, 0), 0, N);
        auto rho_b = kappa_frequencies(tk, SupertileSequence(N, 1), 0, N);
        auto rho_c = kappa_frequencies(tk, SupertileSequence(N, 2), 0, N);
        for (std::size_t i = 0; i < rho_c.entries.size(); ++i) {
            QuadPhi avg = (rho_a.entries[i] + rho_b.entries[i]) / QuadPhi(2);
            if ((rho_c.entries[i] - avg).abs().to_double() > 1e-6) return false;
        }
        return true;
    });

    run(3, "square fibonacci frequencies", 10.0, [] {
        FusionRule fd = catalog("fibonacci_dpv");
        auto m = transition_matrix(fd, 0, 1);
        BigInt want[4][4] = {{1, 1, 1, 1}, {1, 0, 1, 0}, {1, 1, 0, 0}, {1, 0, 0, 0}};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (m.at(i, j) != want[i][j]) return false;
        // target (phi^2, phi, phi, 1) / phi^4
        QuadPhi phi = QuadPhi::phi();
        QuadPhi phi4 = phi * phi * phi * phi;
        QuadPhi target[4] = {phi * phi / phi4, phi / phi4, phi / phi4, QuadPhi(1) / phi4};
        // the exact error at N=20 is 1.7623e-9 and contracts by phi^-2 per
        // level, so the tolerance is pinned at 2e-9 (1e-9 holds from N=21)
        auto rho = kappa_frequencies(fd, SupertileSequence(20, 0), 0, 20);
        for (int i = 0; i < 4; ++i)
            if ((rho.entries[i] - target[i]).abs().to_double() > 2e-9) return false;
        auto rho21 = kappa_frequencies(fd, SupertileSequence(21, 0), 0, 21);
        for (int i = 0; i < 4; ++i)
            if ((rho21.entries[i] - target[i]).abs().to_double() > 1e-9) return false;
        for (int N = 1; N <= 20; ++N) {
            auto r = kappa_frequencies(fd, SupertileSequence(N, 0), 0, N);
            if (r.entries[1] != r.entries[2]) return false;
        }
        return true;
    });

    run(4, "square fibonacci return vectors and eigenvalues", 30.0, [] {
        FusionRule fd = catalog("fibonacci_dpv");
        for (int n = 1; n <= 6; ++n) {
            auto rv = return_vectors(fd, n);
            // induced (2-step) level-n supertiles have side f_{2n+2}
            QuadPhi f = QuadPhi(fibnum(2 * n + 2));
            if (!rv.contains({f, QuadPhi(0)})) return false;
            if (!rv.contains({QuadPhi(0), f})) return false;
        }
        auto pass = eigenvalue_test(fd, {QuadPhi(1), QuadPhi(0)}, 6);
        if (pass.verdict != EigenvalueVerdict::Pass || pass.certificate.empty()) return false;
        auto fail = eigenvalue_test(fd, {QuadPhi(BigRat(1, 3)), QuadPhi(0)}, 6);
        if (fail.verdict != EigenvalueVerdict::Fail || fail.certificate.empty()) return false;
        return true;
    });

    run(5, "coincidence with waiting one", 10.0, [] {
        FusionRule cw = catalog("coincidence_waiting");
        auto c = coincidence_test(cw, 1, 4);
        if (!c.found || c.waiting_k != 1 || !c.uniform_waiting) return false;
        BigRat prod(1);
        BigInt p = 10;
        for (int n = 1; n <= 3; ++n) {
            prod *= BigRat(p, p + 2);
            p *= 10;
            if (slot_agreement(cw, n) != 1 - prod) return false;
        }
        auto v = pure_point_verdict(cw, 4);
        return v.status != PurePointStatus::PurePoint;
    });

    run(6, "chacon non-primitivity certificate", 1.0, [] {
        auto rep = primitivity(catalog("chacon"), 5);
        for (const auto& e : rep.perN) {
            if (e.verdict != PrimitivityVerdict::NotPrimitive) return false;
            if (e.certificate.find("stable zero") == std::string::npos) return false;
        }
        return true;
    });

    run(7, "first cohomology direct limit", 5.0, [] {
        FusionRule ap = catalog("ap_example");
        for (int n = 0; n <= 2; ++n) {
            auto cx = ap_complex(ap, n);
            if (cx.windingMatrix != std::vector<std::vector<BigInt>>{{1, 2}, {2, 3}})
                return false;
        }
        auto rep = h1_direct_limit(ap, 5);
        for (const auto& d : rep.determinants)
            if (d != -1) return false;
        return rep.stabilized && rep.groupDescription == "Z^2 (stable)";
    });

    run(8, "non-pisot eigenvalue and growing adjacency", 60.0, [] {
        FusionRule np = catalog("nonpisot_dpv");
        auto m = transition_matrix(np, 0, 1);
        // power iteration on exact integers, float readout at the end
        std::vector<BigInt> v(4, 1), w(4);
        for (int it = 0; it < 60; ++it) {
            for (int i = 0; i < 4; ++i) {
                w[i] = 0;
                for (int j = 0; j < 4; ++j) w[i] += m.at(i, j) * v[j];
            }
            v = w;
        }
        for (int i = 0; i < 4; ++i) {
            w[i] = 0;
            for (int j = 0; j < 4; ++j) w[i] += m.at(i, j) * v[j];
        }
        double lambda = BigRat(w[0], v[0]).convert_to<double>();
        if (std::abs(lambda - 5.3027756) > 1e-4) return false;
        long prev = 0;
        for (int n = 1; n <= 5; ++n) {
            long c = adjacency_complexity(np, n);
            if (c <= prev) return false;
            prev = c;
        }
        FusionRule fd = catalog("fibonacci_dpv");
        long base = adjacency_complexity(fd, 1);
        for (int n = 2; n <= 5; ++n)
            if (adjacency_complexity(fd, n) != base) return false;
        return true;
    });

    run(9, "exact property suites over the catalog", 60.0, [] {
        for (const auto& name : catalog_names()) {
            FusionRule r = catalog(name);
            for (int N = 2; N <= 5; ++N) {
                auto lhs = transition_matrix(r, 0, N);
                auto rhs = multiply(transition_matrix(r, 0, N - 1),
                                    transition_matrix(r, N - 1, N));
                if (lhs.e != rhs.e) return false;
            }
            for (int N = 1; N <= 5; ++N) {
                auto m = transition_matrix(r, 0, N);
                for (std::size_t j = 0; j < m.cols; ++j) {
                    QuadPhi vol;
                    for (std::size_t i = 0; i < m.rows; ++i)
                        vol += QuadPhi(BigRat(m.at(i, j))) * r.volume(0, static_cast<int>(i));
                    if (vol != r.volume(N, static_cast<int>(j))) return false;
                }
                auto d = direction_matrix(r, 0, N);
                for (std::size_t k = 0; k < d.cols; ++k) {
                    QuadPhi s;
                    for (std::size_t i = 0; i < d.rows; ++i)
                        s += d.at(i, k) * r.volume(0, static_cast<int>(i));
                    if (s != QuadPhi(1)) return false;
                }
            }
            QuadPhi prev = delta_diameter(r, 0, 1);
            for (int N = 2; N <= 5; ++N) {
                QuadPhi cur = delta_diameter(r, 0, N);
                if (cur > prev) return false;
                if (cur > (QuadPhi(1) - balance_delta(r, N)) * prev) return false;
                prev = cur;
            }
        }
        return true;
    });

    run(10, "oracle equivalence", 60.0, [] {
        std::mt19937 rng(2026);
        for (int trial = 0; trial < 1000; ++trial) {
            std::uniform_int_distribution<int> alpha(0, trial % 4 + 1);
            std::uniform_int_distribution<int> hlen(1, 300), nlen(1, 8);
            std::vector<int> hay(hlen(rng)), needle(nlen(rng));
            for (auto& v : hay) v = alpha(rng);
            for (auto& v : needle) v = alpha(rng);
            ConcretePatch h, n;
            h.word = hay;
            n.word = needle;
            if (count_patch(h, n) != naive_count(hay, needle)) return false;
        }
        for (const auto& name : catalog_names()) {
            FusionRule r = catalog(name);
            for (int N = 1; N <= 4; ++N)
                for (int t = 0; t < N; ++t)
                    for (std::size_t j = 0; j < r.type_count(N); ++j) {
                        ConcretePatch p;
                        try {
                            p = expand(r, N, static_cast<int>(j), t);
                        } catch (const ExpansionTooLargeError&) {
                            continue;
                        }
                        auto pv = population(r, N, static_cast<int>(j), t);
                        std::vector<BigInt> counts(r.type_count(t));
                        for (int c : p.word) counts[c] += 1;
                        for (const auto& c : p.tiles) counts[c.index] += 1;
                        if (counts != pv.counts) return false;
                    }
        }
        return true;
    });

    return failures;
}
