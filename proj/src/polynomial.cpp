#include "oista/polynomial.hpp"

#include <atomic>

namespace oista {

namespace {
std::atomic<std::size_t> g_term_limit{100000};
}

std::size_t expansion_term_limit() { return g_term_limit.load(); }
void set_expansion_term_limit(std::size_t limit) { g_term_limit.store(limit); }

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    std::size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
        const auto& [ida, ea] = a.powers[i];
        const auto& [idb, eb] = b.powers[j];
        if (ida == idb) {
            if (ea != eb) return ea < eb;
            ++i;
            ++j;
        } else if (ida < idb) {
            return false; // a has a positive power on an earlier symbol
        } else {
            return true;
        }
    }
    return j < b.powers.size();
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.powers.reserve(a.powers.size() + b.powers.size());
    std::size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
        if (a.powers[i].first == b.powers[j].first) {
            out.powers.emplace_back(a.powers[i].first, a.powers[i].second + b.powers[j].second);
            ++i;
            ++j;
        } else if (a.powers[i].first < b.powers[j].first) {
            out.powers.push_back(a.powers[i++]);
        } else {
            out.powers.push_back(b.powers[j++]);
        }
    }
    for (; i < a.powers.size(); ++i) out.powers.push_back(a.powers[i]);
    for (; j < b.powers.size(); ++j) out.powers.push_back(b.powers[j]);
    return out;
}

Polynomial Polynomial::constant(const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(Monomial{}, c);
    return p;
}

Polynomial Polynomial::variable(Sym s) { return variable(s.id); }

Polynomial Polynomial::variable(std::uint32_t id) {
    Polynomial p;
    Monomial m;
    m.powers.emplace_back(id, 1u);
    p.terms_.emplace(std::move(m), Rational(1));
    return p;
}

Rational Polynomial::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw ContractError("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

Rational Polynomial::leading_coefficient() const {
    if (terms_.empty()) return Rational(0);
    return terms_.rbegin()->second;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    check_budget();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    check_budget();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (auto& [ma, ca] : a.terms_) {
        for (auto& [mb, cb] : b.terms_) {
            out.add_term(monomial_mul(ma, mb), ca * cb);
        }
        out.check_budget();
    }
    return out;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coef] : terms_) coef *= c;
    return *this;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
    Polynomial out = constant(Rational(1));
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u) out *= base;
        if (e > 1) base *= base;
        e >>= 1u;
    }
    return out;
}

Polynomial Polynomial::differentiate(std::uint32_t id) const {
    Polynomial out;
    for (auto& [m, c] : terms_) {
        std::uint32_t e = m.exponent_of(id);
        if (e == 0) continue;
        Monomial dm;
        dm.powers.reserve(m.powers.size());
        for (auto& [sid, ex] : m.powers) {
            if (sid == id) {
                if (ex > 1) dm.powers.emplace_back(sid, ex - 1);
            } else {
                dm.powers.emplace_back(sid, ex);
            }
        }
        out.add_term(dm, c * e);
    }
    return out;
}

Rational Polynomial::evaluate(const std::vector<Rational>& point) const {
    Rational acc(0);
    for (auto& [m, c] : terms_) {
        Rational t = c;
        for (auto& [id, e] : m.powers) {
            if (id >= point.size()) throw ContractError("evaluation point misses a symbol");
            t *= pow_rational(point[id], e);
        }
        acc += t;
    }
    return acc;
}

double Polynomial::evaluate_double(const std::vector<double>& point) const {
    return evaluate_fp<double>(point);
}

std::set<std::uint32_t> Polynomial::symbols() const {
    std::set<std::uint32_t> out;
    for (auto& [m, c] : terms_)
        for (auto& [id, e] : m.powers) out.insert(id);
    return out;
}

bool Polynomial::depends_on(std::uint32_t id) const {
    for (auto& [m, c] : terms_)
        if (m.exponent_of(id) > 0) return true;
    return false;
}

std::uint32_t Polynomial::min_exponent(std::uint32_t id) const {
    std::uint32_t best = 0;
    bool first = true;
    for (auto& [m, c] : terms_) {
        std::uint32_t e = m.exponent_of(id);
        if (first || e < best) best = e;
        first = false;
        if (best == 0) break;
    }
    return terms_.empty() ? 0 : best;
}

Polynomial Polynomial::divide_by_power(std::uint32_t id, std::uint32_t e) const {
    if (e == 0) return *this;
    Polynomial out;
    for (auto& [m, c] : terms_) {
        Monomial dm;
        bool ok = false;
        for (auto& [sid, ex] : m.powers) {
            if (sid == id) {
                if (ex < e) throw ContractError("divide_by_power: insufficient exponent");
                ok = true;
                if (ex > e) dm.powers.emplace_back(sid, ex - e);
            } else {
                dm.powers.emplace_back(sid, ex);
            }
        }
        if (!ok) throw ContractError("divide_by_power: insufficient exponent");
        out.add_term(dm, c);
    }
    return out;
}

void Polynomial::check_budget() const {
    if (terms_.size() > expansion_term_limit())
        throw ExpansionLimitError("polynomial exceeded the expansion-size guard (" +
                                  std::to_string(expansion_term_limit()) + " terms)");
}

std::string Polynomial::to_string(const SymbolRegistry& reg) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    // leading (grlex-largest) term first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Monomial& m = it->first;
        Rational c = it->second;
        bool neg = sgn(c) < 0;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        Rational a = neg ? Rational(-c) : c;
        bool coeff_is_one = (a == 1);
        if (m.powers.empty()) {
            out += oista::to_string(a);
            continue;
        }
        bool emitted = false;
        if (!coeff_is_one) {
            out += oista::to_string(a);
            emitted = true;
        }
        for (auto& [id, e] : m.powers) {
            if (emitted) out += "*";
            out += reg.name(id);
            if (e > 1) out += "^" + std::to_string(e);
            emitted = true;
        }
    }
    return out;
}

} // namespace oista
