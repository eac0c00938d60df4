#pragma once

#include "oista/pipeline.hpp"

#include <random>

namespace oista::testing {

inline AffineSystem make_example1() {
    AffineSystem sys;
    sys.name = "example1";
    sys.n = 4;
    sys.m = 2;
    sys.p = 2;
    sys.registry = std::make_shared<SymbolRegistry>(
        std::vector<std::string>{"x1", "x2", "x3", "x4"}, sys.m, sys.p);
    const auto& r = *sys.registry;
    auto x = [&](int i) { return Polynomial::variable(r.state(i)); };
    sys.f = {Polynomial(), x(3), Polynomial(), -x(4) + x(1) * x(1)};
    sys.g = {{x(1) * Polynomial::constant(0) + Polynomial::constant(1), Polynomial()},
             {x(4), Polynomial()},
             {Polynomial(), Polynomial::constant(1)},
             {Polynomial(), Polynomial()}};
    sys.h = {x(1), x(2)};
    return sys;
}

inline AffineSystem make_example2() {
    AffineSystem sys;
    sys.name = "example2";
    sys.n = 4;
    sys.m = 2;
    sys.p = 2;
    sys.registry = std::make_shared<SymbolRegistry>(
        std::vector<std::string>{"x1", "x2", "x3", "x4"}, sys.m, sys.p);
    const auto& r = *sys.registry;
    auto x = [&](int i) { return Polynomial::variable(r.state(i)); };
    auto one = Polynomial::constant(1);
    sys.f = {Polynomial(), x(3), Polynomial(), -x(4) + x(1) * x(1)};
    sys.g = {{one, Polynomial()},
             {Polynomial(), x(2)},
             {Polynomial(), one},
             {Polynomial(), Polynomial()}};
    sys.h = {x(1), x(2)};
    return sys;
}

inline AffineSystem make_example3() {
    AffineSystem sys;
    sys.name = "example3";
    sys.n = 3;
    sys.m = 2;
    sys.p = 2;
    sys.registry = std::make_shared<SymbolRegistry>(std::vector<std::string>{"x1", "x2", "x3"},
                                                    sys.m, sys.p);
    const auto& r = *sys.registry;
    auto x = [&](int i) { return Polynomial::variable(r.state(i)); };
    auto one = Polynomial::constant(1);
    sys.f = {Polynomial(), x(3), Polynomial()};
    sys.g = {{one, Polynomial()}, {x(2), Polynomial()}, {Polynomial(), one}};
    sys.h = {x(1), x(2)};
    return sys;
}

inline AffineSystem make_example4() {
    AffineSystem sys;
    sys.name = "example4";
    sys.n = 5;
    sys.m = 3;
    sys.p = 3;
    sys.registry = std::make_shared<SymbolRegistry>(
        std::vector<std::string>{"x1", "x2", "x3", "x4", "x5"}, sys.m, sys.p);
    const auto& r = *sys.registry;
    auto x = [&](int i) { return Polynomial::variable(r.state(i)); };
    auto one = Polynomial::constant(1);
    auto zero = Polynomial();
    sys.f = {zero, x(5), x(4), zero, zero};
    sys.g = {{one, zero, zero},
             {zero, x(4), zero},
             {zero, zero, zero},
             {zero, one, zero},
             {zero, zero, one}};
    sys.h = {x(1), x(2), x(3)};
    return sys;
}

inline AffineSystem make_double_integrator() {
    AffineSystem sys;
    sys.name = "double-integrator";
    sys.n = 2;
    sys.m = 1;
    sys.p = 1;
    sys.registry =
        std::make_shared<SymbolRegistry>(std::vector<std::string>{"x1", "x2"}, sys.m, sys.p);
    const auto& r = *sys.registry;
    auto x = [&](int i) { return Polynomial::variable(r.state(i)); };
    sys.f = {x(2), Polynomial()};
    sys.g = {{Polynomial()}, {Polynomial::constant(1)}};
    sys.h = {x(1)};
    return sys;
}

inline AffineSystem make_expdecay() {
    AffineSystem sys;
    sys.name = "expdecay";
    sys.n = 1;
    sys.m = 0;
    sys.p = 1;
    sys.registry =
        std::make_shared<SymbolRegistry>(std::vector<std::string>{"x1"}, sys.m, sys.p);
    const auto& r = *sys.registry;
    sys.f = {-Polynomial::variable(r.state(1))};
    sys.g = {{}};
    sys.h = {Polynomial::variable(r.state(1))};
    return sys;
}

/// Random dense polynomial over the given symbols, small integer coefficients.
inline Polynomial random_polynomial(std::mt19937& rng, const std::vector<Sym>& syms,
                                    int max_terms = 5, int max_deg = 3) {
    Polynomial p;
    int terms = 1 + static_cast<int>(rng() % max_terms);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        for (const auto& s : syms) {
            std::uint32_t e = rng() % (max_deg + 1);
            if (rng() % 2) e = 0; // keep it sparse
            if (e > 0) m.powers.emplace_back(s.id, e);
        }
        long c = static_cast<long>(rng() % 9) - 4;
        if (c != 0) p.add_term(m, Rational(c));
    }
    return p;
}

/// Linear time-invariant system with integer matrices A, B, C.
struct LinearSystem {
    int n = 0, m = 0, p = 0;
    std::vector<std::vector<long>> a, b, c;
};

/// Deterministic generator; rejection keeps controllable + observable +
/// left-invertible candidates only (checked by the caller's oracle).
inline LinearSystem random_linear_candidate(std::mt19937& rng, int n, int m, int p) {
    LinearSystem sys;
    sys.n = n;
    sys.m = m;
    sys.p = p;
    auto mat = [&](int r, int c) {
        std::vector<std::vector<long>> out(r, std::vector<long>(c));
        for (auto& row : out)
            for (auto& v : row) v = static_cast<long>(rng() % 7) - 3;
        return out;
    };
    sys.a = mat(n, n);
    sys.b = mat(n, m);
    sys.c = mat(p, n);
    return sys;
}

inline AffineSystem to_affine(const LinearSystem& lin, const std::string& name) {
    AffineSystem sys;
    sys.name = name;
    sys.n = lin.n;
    sys.m = lin.m;
    sys.p = lin.p;
    std::vector<std::string> names;
    for (int i = 1; i <= lin.n; ++i) names.push_back("x" + std::to_string(i));
    sys.registry = std::make_shared<SymbolRegistry>(names, sys.m, sys.p);
    const auto& r = *sys.registry;
    auto x = [&](int i) { return Polynomial::variable(r.state(i)); };
    sys.f.resize(lin.n);
    sys.g.assign(lin.n, std::vector<Polynomial>(lin.m));
    for (int i = 0; i < lin.n; ++i) {
        Polynomial acc;
        for (int j = 0; j < lin.n; ++j)
            if (lin.a[i][j] != 0) acc += Polynomial::constant(lin.a[i][j]) * x(j + 1);
        sys.f[i] = acc;
        for (int j = 0; j < lin.m; ++j)
            sys.g[i][j] = Polynomial::constant(lin.b[i][j]);
    }
    sys.h.resize(lin.p);
    for (int i = 0; i < lin.p; ++i) {
        Polynomial acc;
        for (int j = 0; j < lin.n; ++j)
            if (lin.c[i][j] != 0) acc += Polynomial::constant(lin.c[i][j]) * x(j + 1);
        sys.h[i] = acc;
    }
    return sys;
}

/// Fraction-free (Bareiss) rank of an exact rational matrix. Test-side
/// oracle, independent of the SymMatrix elimination.
inline int bareiss_rank(std::vector<std::vector<Rational>> mat) {
    if (mat.empty() || mat[0].empty()) return 0;
    int rows = static_cast<int>(mat.size()), cols = static_cast<int>(mat[0].size());
    int rank = 0;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int pivot = -1;
        for (int r = row; r < rows; ++r)
            if (mat[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(mat[row], mat[pivot]);
        for (int r = row + 1; r < rows; ++r) {
            Rational factor = mat[r][col] / mat[row][col];
            for (int c = col; c < cols; ++c) mat[r][c] -= factor * mat[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}

/// Markov-parameter block Toeplitz matrix T_k for y-derivative orders 1..k:
/// block (i, j) = C A^{i-j} B for i >= j (0-based blocks), zero above.
inline std::vector<std::vector<Rational>> markov_toeplitz(const LinearSystem& lin, int k) {
    // powers C A^d B
    std::vector<std::vector<std::vector<Rational>>> cab; // [d][p][m]
    std::vector<std::vector<Rational>> ca(lin.p, std::vector<Rational>(lin.n));
    for (int i = 0; i < lin.p; ++i)
        for (int j = 0; j < lin.n; ++j) ca[i][j] = Rational(lin.c[i][j]);
    for (int d = 0; d < k; ++d) {
        std::vector<std::vector<Rational>> blk(lin.p, std::vector<Rational>(lin.m, Rational(0)));
        for (int i = 0; i < lin.p; ++i)
            for (int j = 0; j < lin.m; ++j)
                for (int l = 0; l < lin.n; ++l) blk[i][j] += ca[i][l] * Rational(lin.b[l][j]);
        cab.push_back(blk);
        std::vector<std::vector<Rational>> next(lin.p, std::vector<Rational>(lin.n, Rational(0)));
        for (int i = 0; i < lin.p; ++i)
            for (int j = 0; j < lin.n; ++j)
                for (int l = 0; l < lin.n; ++l) next[i][j] += ca[i][l] * Rational(lin.a[l][j]);
        ca = next;
    }
    std::vector<std::vector<Rational>> t(static_cast<std::size_t>(k) * lin.p,
                                         std::vector<Rational>(static_cast<std::size_t>(k) * lin.m,
                                                               Rational(0)));
    for (int bi = 0; bi < k; ++bi)
        for (int bj = 0; bj <= bi; ++bj)
            for (int i = 0; i < lin.p; ++i)
                for (int j = 0; j < lin.m; ++j)
                    t[bi * lin.p + i][bj * lin.m + j] = cab[bi - bj][i][j];
    return t;
}

inline bool is_controllable_observable(const LinearSystem& lin) {
    // controllability [B AB ... A^{n-1}B], observability dual, exact ranks
    std::vector<std::vector<Rational>> ctrl(lin.n);
    std::vector<std::vector<Rational>> ab(lin.n, std::vector<Rational>(lin.m));
    for (int i = 0; i < lin.n; ++i)
        for (int j = 0; j < lin.m; ++j) ab[i][j] = Rational(lin.b[i][j]);
    for (int d = 0; d < lin.n; ++d) {
        for (int i = 0; i < lin.n; ++i)
            for (int j = 0; j < lin.m; ++j) ctrl[i].push_back(ab[i][j]);
        std::vector<std::vector<Rational>> next(lin.n, std::vector<Rational>(lin.m, Rational(0)));
        for (int i = 0; i < lin.n; ++i)
            for (int j = 0; j < lin.m; ++j)
                for (int l = 0; l < lin.n; ++l) next[i][j] += Rational(lin.a[i][l]) * ab[l][j];
        ab = next;
    }
    if (bareiss_rank(ctrl) != lin.n) return false;
    std::vector<std::vector<Rational>> obs;
    std::vector<std::vector<Rational>> ca(lin.p, std::vector<Rational>(lin.n));
    for (int i = 0; i < lin.p; ++i)
        for (int j = 0; j < lin.n; ++j) ca[i][j] = Rational(lin.c[i][j]);
    for (int d = 0; d < lin.n; ++d) {
        for (int i = 0; i < lin.p; ++i) obs.push_back(ca[i]);
        std::vector<std::vector<Rational>> next(lin.p, std::vector<Rational>(lin.n, Rational(0)));
        for (int i = 0; i < lin.p; ++i)
            for (int j = 0; j < lin.n; ++j)
                for (int l = 0; l < lin.n; ++l) next[i][j] += ca[i][l] * Rational(lin.a[l][j]);
        ca = next;
    }
    return bareiss_rank(obs) == lin.n;
}

/// Rank increments of the Markov Toeplitz matrices; the oracle rank sequence
/// r_k and termination step for linear systems.
struct MarkovStructure {
    std::vector<int> ranks; // r_1, r_2, ...
    int k_star = -1;        // smallest k with r_k = m, or -1
};

inline MarkovStructure markov_structure(const LinearSystem& lin, int max_k) {
    MarkovStructure out;
    int prev = 0;
    for (int k = 1; k <= max_k; ++k) {
        int rk = bareiss_rank(markov_toeplitz(lin, k));
        out.ranks.push_back(rk - prev);
        if (rk - prev == lin.m) {
            out.k_star = k;
            return out;
        }
        prev = rk;
    }
    return out;
}

/// The three committed linear fixtures: mt19937 seeds with rejection until
/// controllable, observable, and Markov-invertible; two of them must need
/// more than one differentiation round so the rank sequence is nontrivial.
inline std::vector<LinearSystem> seeded_linear_systems() {
    std::vector<LinearSystem> out;
    const struct {
        std::uint32_t seed;
        int n, m, p, min_kstar;
    } specs[] = {{101, 3, 1, 1, 2}, {202, 4, 2, 2, 1}, {303, 4, 2, 2, 2}};
    for (const auto& spec : specs) {
        std::mt19937 rng(spec.seed);
        for (;;) {
            LinearSystem cand = random_linear_candidate(rng, spec.n, spec.m, spec.p);
            if (!is_controllable_observable(cand)) continue;
            auto oracle = markov_structure(cand, spec.n + spec.p);
            if (oracle.k_star < spec.min_kstar) continue;
            out.push_back(cand);
            break;
        }
    }
    return out;
}

} // namespace oista::testing
