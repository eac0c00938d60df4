#include "oista/matrix.hpp"

#include <algorithm>

namespace oista {

namespace {

// exact multivariate division: q = n / d, valid only when d divides n
Polynomial exact_divide(Polynomial n, const Polynomial& d) {
    if (d.is_zero()) throw ContractError("exact_divide by zero");
    Polynomial q;
    const auto& dlead = *d.terms().rbegin();
    while (!n.is_zero()) {
        const auto& nlead = *n.terms().rbegin();
        Monomial t;
        bool divisible = true;
        for (auto& [id, e] : nlead.first.powers) {
            std::uint32_t de = dlead.first.exponent_of(id);
            if (de > e) {
                divisible = false;
                break;
            }
            if (e > de) t.powers.emplace_back(id, e - de);
        }
        if (divisible) {
            // every divisor symbol must appear in the dividend's leading term
            for (auto& [id, e] : dlead.first.powers) {
                if (nlead.first.exponent_of(id) < e) {
                    divisible = false;
                    break;
                }
            }
        }
        if (!divisible) throw ContractError("exact_divide: divisor does not divide");
        Polynomial term;
        term.add_term(t, nlead.second / dlead.second);
        q += term;
        n -= term * d;
    }
    return q;
}

// view of a polynomial as univariate in `s` with rational-function coefficients
using UniPoly = std::vector<RationalFn>; // index = power of s

UniPoly to_uni(const Polynomial& p, std::uint32_t s) {
    std::vector<Polynomial> coeffs;
    for (auto& [m, c] : p.terms()) {
        std::uint32_t e = m.exponent_of(s);
        Monomial rest;
        for (auto& [id, ex] : m.powers)
            if (id != s) rest.powers.emplace_back(id, ex);
        if (coeffs.size() <= e) coeffs.resize(e + 1);
        coeffs[e].add_term(rest, c);
    }
    UniPoly out(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = RationalFn(coeffs[i]);
    return out;
}

void trim(UniPoly& u) {
    while (!u.empty() && u.back().is_zero()) u.pop_back();
}

int deg(const UniPoly& u) { return static_cast<int>(u.size()) - 1; }

UniPoly uni_mod(UniPoly a, const UniPoly& b) {
    while (deg(a) >= deg(b)) {
        RationalFn f = a.back() / b.back();
        int shift = deg(a) - deg(b);
        for (int i = 0; i <= deg(b); ++i) a[i + shift] -= f * b[i];
        a.pop_back(); // leading term cancels exactly
        trim(a);
        if (a.empty()) break;
    }
    return a;
}

UniPoly uni_divide_exact(UniPoly a, const UniPoly& b) {
    UniPoly q(std::max<std::size_t>(1, a.size() >= b.size() ? a.size() - b.size() + 1 : 1));
    while (deg(a) >= deg(b)) {
        RationalFn f = a.back() / b.back();
        int shift = deg(a) - deg(b);
        q[shift] = f;
        for (int i = 0; i <= deg(b); ++i) a[i + shift] -= f * b[i];
        a.pop_back();
        trim(a);
        if (a.empty()) break;
    }
    if (!a.empty()) throw ContractError("uni_divide_exact: nonzero remainder");
    trim(q);
    return q;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        UniPoly r = uni_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    // monic-normalize
    if (!a.empty()) {
        RationalFn lead = a.back();
        for (auto& c : a) c = c / lead;
    }
    return a;
}

Polynomial from_uni(const UniPoly& u, std::uint32_t s) {
    // sum coefficients, then clear the common rest-variable denominator,
    // which must divide out exactly because the true value is a polynomial
    RationalFn total;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i].is_zero()) continue;
        RationalFn spow(Polynomial::variable(s).pow(static_cast<std::uint32_t>(i)));
        total += u[i] * spow;
    }
    if (total.is_zero()) return Polynomial();
    return exact_divide(total.num(), total.den());
}

Polynomial sign_content_normalize(const Polynomial& p) {
    Polynomial out = RationalFn(p).num(); // integer coefficients, content 1
    if (sgn(out.leading_coefficient()) < 0) out = -out;
    return out;
}

// strips repeated factors, one variable at a time, until stable
Polynomial squarefree_part(Polynomial q) {
    bool changed = true;
    while (changed && !q.is_constant()) {
        changed = false;
        for (std::uint32_t s : q.symbols()) {
            Polynomial dq = q.differentiate(s);
            if (dq.is_zero()) continue;
            UniPoly g = uni_gcd(to_uni(q, s), to_uni(dq, s));
            if (deg(g) < 1) continue;
            UniPoly quot = uni_divide_exact(to_uni(q, s), g);
            q = sign_content_normalize(from_uni(quot, s));
            changed = true;
            break;
        }
    }
    return q;
}

} // namespace

std::vector<Polynomial> squarefree_factors(const Polynomial& p) {
    if (p.is_zero()) throw ContractError("squarefree_factors of zero");
    std::vector<Polynomial> out;
    if (p.is_constant()) return out;
    Polynomial q = sign_content_normalize(p);
    for (std::uint32_t s : q.symbols()) {
        std::uint32_t e = q.min_exponent(s);
        if (e > 0) {
            out.push_back(Polynomial::variable(s));
            q = q.divide_by_power(s, e);
        }
    }
    if (!q.is_constant()) out.push_back(squarefree_part(q));
    return out;
}

} // namespace oista
