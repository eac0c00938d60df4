#pragma once

#include "oista/polynomial.hpp"

#include <map>
#include <string>

namespace oista {

/// Quotient of two polynomials. Not reduced by polynomial GCDs; instead the
/// pair is scaled so all coefficients are integers with joint content 1 and
/// the denominator's leading coefficient is positive. Equality is decided by
/// cross-multiplication.
class RationalFn {
public:
    RationalFn() : num_(), den_(Polynomial::constant(Rational(1))) {}
    RationalFn(Polynomial num, Polynomial den);
    /* implicit */ RationalFn(Polynomial p)
        : num_(std::move(p)), den_(Polynomial::constant(Rational(1))) {}
    static RationalFn constant(const Rational& c) { return RationalFn(Polynomial::constant(c)); }
    static RationalFn variable(Sym s) { return RationalFn(Polynomial::variable(s)); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    /// Numerator as a polynomial when the denominator is constant.
    Polynomial as_polynomial() const;

    RationalFn operator-() const;
    friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b);
    RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
    RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
    RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }
    RationalFn& operator/=(const RationalFn& o) { return *this = *this / o; }

    /// Mathematical equality (cross-multiplied), not structural.
    bool equals(const RationalFn& o) const;

    RationalFn differentiate(std::uint32_t id) const;
    RationalFn differentiate(Sym s) const { return differentiate(s.id); }

    Rational evaluate(const std::vector<Rational>& point) const;
    double evaluate_double(const std::vector<double>& point) const;
    /// Denominator value at a point, for singularity screens.
    double denominator_double(const std::vector<double>& point) const;

    template <class F>
    F evaluate_fp(const std::vector<F>& point) const {
        F d = den_.evaluate_fp(point);
        if (d == F(0)) throw SingularityError("denominator vanishes at the evaluation point");
        return num_.evaluate_fp(point) / d;
    }

    std::set<std::uint32_t> symbols() const;
    bool depends_on(std::uint32_t id) const;

    std::string to_string(const SymbolRegistry& reg) const;

private:
    Polynomial num_, den_;
    void normalize();
};

/// true iff the function canonicalizes to zero; exact, no sampling.
inline bool is_identically_zero(const RationalFn& r) { return r.is_zero(); }

using SubstitutionMap = std::map<std::uint32_t, RationalFn>;

/// Exact composition: symbols absent from the map stay themselves.
/// Throws SingularityError if a substituted denominator collapses to zero.
RationalFn substitute(const Polynomial& p, const SubstitutionMap& map);
RationalFn substitute(const RationalFn& r, const SubstitutionMap& map);

} // namespace oista
