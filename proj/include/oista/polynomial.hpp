#pragma once

#include "oista/error.hpp"
#include "oista/rational.hpp"
#include "oista/symbol.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oista {

/// Product of symbol powers; (id, exponent) pairs sorted by id, exponents > 0.
struct Monomial {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> powers;

    int degree() const {
        int d = 0;
        for (auto& [id, e] : powers) d += static_cast<int>(e);
        return d;
    }
    std::uint32_t exponent_of(std::uint32_t id) const {
        for (auto& [sid, e] : powers)
            if (sid == id) return e;
        return 0;
    }
    bool operator==(const Monomial&) const = default;
};

/// Graded lexicographic order: total degree first, ties broken so that a
/// higher exponent on a lower symbol id makes the monomial larger.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

Monomial monomial_mul(const Monomial& a, const Monomial& b);

/// Global expansion-size guard; polynomial products and substitutions that
/// would exceed this many terms raise ExpansionLimitError.
std::size_t expansion_term_limit();
void set_expansion_term_limit(std::size_t limit);

/// Sparse multivariate polynomial with exact rational coefficients.
/// The term map never stores a zero coefficient, so structural equality
/// coincides with mathematical equality.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, MonomialLess>;

    Polynomial() = default;
    static Polynomial constant(const Rational& c);
    static Polynomial variable(Sym s);
    static Polynomial variable(std::uint32_t id);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.powers.empty()); }
    Rational constant_value() const; // requires is_constant()
    int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Coefficient of the grlex-largest monomial; 0 for the zero polynomial.
    Rational leading_coefficient() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    Polynomial& operator*=(const Rational& c);
    Polynomial pow(std::uint32_t e) const;

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    /// Formal partial derivative.
    Polynomial differentiate(std::uint32_t id) const;
    Polynomial differentiate(Sym s) const { return differentiate(s.id); }

    /// Exact evaluation; `point` must cover every symbol that occurs.
    Rational evaluate(const std::vector<Rational>& point_by_id) const;
    double evaluate_double(const std::vector<double>& point_by_id) const;

    template <class F>
    F evaluate_fp(const std::vector<F>& point) const {
        F acc = F(0);
        for (auto& [m, c] : terms_) {
            F t = F(c.get_d());
            for (auto& [id, e] : m.powers) {
                F base = point[id];
                for (std::uint32_t k = 0; k < e; ++k) t *= base;
            }
            acc += t;
        }
        return acc;
    }

    std::set<std::uint32_t> symbols() const;
    bool depends_on(std::uint32_t id) const;

    /// Minimum exponent of `id` across all terms (0 if absent anywhere).
    std::uint32_t min_exponent(std::uint32_t id) const;
    /// Divides by id^e; every term must carry at least that power.
    Polynomial divide_by_power(std::uint32_t id, std::uint32_t e) const;

    void add_term(const Monomial& m, const Rational& c);

    std::string to_string(const SymbolRegistry& reg) const;

private:
    TermMap terms_;
    void check_budget() const;
};

} // namespace oista
