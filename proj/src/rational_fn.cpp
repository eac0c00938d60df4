#include "oista/rational_fn.hpp"

namespace oista {

RationalFn::RationalFn(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ContractError("rational function with zero denominator");
    normalize();
}

void RationalFn::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(Rational(1));
        return;
    }
    // scale both polynomials by one rational so every coefficient is an
    // integer and the joint content is 1
    mpz_class den_lcm(1);
    for (auto& [m, c] : num_.terms()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    for (auto& [m, c] : den_.terms()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_class num_gcd(0);
    auto fold_gcd = [&](const Polynomial& p) {
        for (auto& [m, c] : p.terms()) {
            mpz_class scaled = c.get_num() * (den_lcm / c.get_den());
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
        }
    };
    fold_gcd(num_);
    fold_gcd(den_);
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (sgn(den_.leading_coefficient() * scale) < 0) scale = -scale;
    num_ *= scale;
    den_ *= scale;
}

Polynomial RationalFn::as_polynomial() const {
    if (!is_polynomial()) throw ContractError("rational function is not a polynomial");
    Polynomial p = num_;
    Rational inv = Rational(1) / den_.constant_value();
    p *= inv;
    return p;
}

RationalFn RationalFn::operator-() const {
    RationalFn out = *this;
    out.num_ = -out.num_;
    return out;
}

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) {
    if (a.den_ == b.den_) return RationalFn(a.num_ - b.num_, a.den_);
    return RationalFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    if (a.is_zero() || b.is_zero()) return RationalFn();
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.is_zero()) throw SingularityError("division by an identically zero rational function");
    if (a.is_zero()) return RationalFn();
    return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
}

bool RationalFn::equals(const RationalFn& o) const {
    return (num_ * o.den_ - o.num_ * den_).is_zero();
}

RationalFn RationalFn::differentiate(std::uint32_t id) const {
    if (den_.is_constant()) return RationalFn(num_.differentiate(id), den_);
    // (n/d)' = (n'd - nd')/d^2
    return RationalFn(num_.differentiate(id) * den_ - num_ * den_.differentiate(id), den_ * den_);
}

Rational RationalFn::evaluate(const std::vector<Rational>& point) const {
    Rational d = den_.evaluate(point);
    if (d == 0) throw SingularityError("denominator vanishes at the evaluation point");
    return num_.evaluate(point) / d;
}

double RationalFn::evaluate_double(const std::vector<double>& point) const {
    double d = den_.evaluate_double(point);
    if (d == 0.0) throw SingularityError("denominator vanishes at the evaluation point");
    return num_.evaluate_double(point) / d;
}

double RationalFn::denominator_double(const std::vector<double>& point) const {
    return den_.evaluate_double(point);
}

std::set<std::uint32_t> RationalFn::symbols() const {
    std::set<std::uint32_t> out = num_.symbols();
    auto ds = den_.symbols();
    out.insert(ds.begin(), ds.end());
    return out;
}

bool RationalFn::depends_on(std::uint32_t id) const {
    return num_.depends_on(id) || den_.depends_on(id);
}

std::string RationalFn::to_string(const SymbolRegistry& reg) const {
    if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string(reg);
    std::string n = num_.to_string(reg);
    std::string d = den_.to_string(reg);
    return "(" + n + ")/(" + d + ")";
}

RationalFn substitute(const Polynomial& p, const SubstitutionMap& map) {
    RationalFn acc;
    for (auto& [mono, coeff] : p.terms()) {
        RationalFn term = RationalFn::constant(coeff);
        for (auto& [id, e] : mono.powers) {
            auto it = map.find(id);
            RationalFn base =
                (it == map.end()) ? RationalFn(Polynomial::variable(id)) : it->second;
            if (base.is_zero()) {
                term = RationalFn();
                break;
            }
            RationalFn powed(base.num().pow(e), base.den().pow(e));
            term *= powed;
        }
        acc += term;
    }
    return acc;
}

RationalFn substitute(const RationalFn& r, const SubstitutionMap& map) {
    RationalFn den = substitute(r.den(), map);
    if (den.is_zero())
        throw SingularityError("substitution maps the denominator to identically zero");
    return substitute(r.num(), map) / den;
}

} // namespace oista
