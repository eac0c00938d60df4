#include "oista/system.hpp"

namespace oista {

GeneralSystem lift(const AffineSystem& sys) {
    GeneralSystem out;
    out.registry = sys.registry;
    out.n = sys.n;
    out.m = sys.m;
    out.p = sys.p;
    out.h = sys.h;
    out.f.resize(sys.n);
    for (int i = 0; i < sys.n; ++i) {
        Polynomial acc = sys.f[i];
        for (int j = 0; j < sys.m; ++j)
            acc += sys.g[i][j] * Polynomial::variable(sys.registry->input_deriv(0, j + 1));
        out.f[i] = std::move(acc);
    }
    return out;
}

namespace {

bool only_states(const Polynomial& p, const SymbolRegistry& reg) {
    for (std::uint32_t id : p.symbols())
        if (reg.sym_of(id).kind != SymKind::State) return false;
    return true;
}

bool states_and_inputs0(const Polynomial& p, const SymbolRegistry& reg) {
    for (std::uint32_t id : p.symbols()) {
        Sym s = reg.sym_of(id);
        if (s.kind == SymKind::State) continue;
        if (s.kind == SymKind::InputDeriv && s.order == 0) continue;
        return false;
    }
    return true;
}

std::vector<Rational> origin(const SymbolRegistry& reg) {
    return std::vector<Rational>(reg.id_bound(), Rational(0));
}

} // namespace

ValidationReport validate(const AffineSystem& sys) {
    ValidationReport rep;
    const auto& reg = *sys.registry;
    if (sys.m > sys.p)
        rep.errors.push_back("m <= p required: got m = " + std::to_string(sys.m) +
                             ", p = " + std::to_string(sys.p));
    if (static_cast<int>(sys.f.size()) != sys.n)
        rep.errors.push_back("f must have n entries");
    if (static_cast<int>(sys.h.size()) != sys.p)
        rep.errors.push_back("h must have p entries");
    if (static_cast<int>(sys.g.size()) != sys.n)
        rep.errors.push_back("G must have n rows");
    for (auto& row : sys.g)
        if (static_cast<int>(row.size()) != sys.m) {
            rep.errors.push_back("G must have m columns");
            break;
        }
    if (!rep.errors.empty()) return rep;

    auto zero = origin(reg);
    for (int i = 0; i < sys.n; ++i) {
        if (!only_states(sys.f[i], reg))
            rep.errors.push_back("f[" + std::to_string(i + 1) + "] uses a non-state symbol");
        for (int j = 0; j < sys.m; ++j)
            if (!only_states(sys.g[i][j], reg))
                rep.errors.push_back("g" + std::to_string(j + 1) + "[" + std::to_string(i + 1) +
                                     "] uses a non-state symbol");
    }
    for (int i = 0; i < sys.p; ++i)
        if (!only_states(sys.h[i], reg))
            rep.errors.push_back("h[" + std::to_string(i + 1) + "] uses a non-state symbol");
    if (!rep.errors.empty()) return rep;

    for (int i = 0; i < sys.n; ++i)
        if (sys.f[i].evaluate(zero) != 0)
            rep.errors.push_back("f(0) != 0 in component " + std::to_string(i + 1));
    for (int i = 0; i < sys.p; ++i)
        if (sys.h[i].evaluate(zero) != 0)
            rep.warnings.push_back("h(0) != 0 in component " + std::to_string(i + 1));
    return rep;
}

ValidationReport validate(const GeneralSystem& sys) {
    ValidationReport rep;
    const auto& reg = *sys.registry;
    if (static_cast<int>(sys.f.size()) != sys.n) rep.errors.push_back("f must have n entries");
    if (static_cast<int>(sys.h.size()) != sys.p) rep.errors.push_back("h must have p entries");
    if (!rep.errors.empty()) return rep;
    for (int i = 0; i < sys.n; ++i)
        if (!states_and_inputs0(sys.f[i], reg))
            rep.errors.push_back("f[" + std::to_string(i + 1) +
                                 "] uses a symbol other than states and u");
    for (int i = 0; i < sys.p; ++i)
        if (!only_states(sys.h[i], reg))
            rep.errors.push_back("h[" + std::to_string(i + 1) + "] uses a non-state symbol");
    if (!rep.errors.empty()) return rep;
    auto zero = origin(reg);
    for (int i = 0; i < sys.n; ++i)
        if (sys.f[i].evaluate(zero) != 0)
            rep.errors.push_back("f(0, 0) != 0 in component " + std::to_string(i + 1));
    for (int i = 0; i < sys.p; ++i)
        if (sys.h[i].evaluate(zero) != 0)
            rep.warnings.push_back("h(0) != 0 in component " + std::to_string(i + 1));
    return rep;
}

Polynomial lie_derivative(const Polynomial& r, const std::vector<Polynomial>& v,
                          const SymbolRegistry& reg) {
    if (static_cast<int>(v.size()) != reg.num_states())
        throw ContractError("lie_derivative: field dimension mismatch");
    Polynomial acc;
    for (int i = 1; i <= reg.num_states(); ++i) {
        Polynomial d = r.differentiate(reg.state(i));
        if (d.is_zero() || v[i - 1].is_zero()) continue;
        acc += d * v[i - 1];
    }
    return acc;
}

RationalFn lie_derivative(const RationalFn& r, const std::vector<Polynomial>& v,
                          const SymbolRegistry& reg) {
    if (static_cast<int>(v.size()) != reg.num_states())
        throw ContractError("lie_derivative: field dimension mismatch");
    RationalFn acc;
    for (int i = 1; i <= reg.num_states(); ++i) {
        RationalFn d = r.differentiate(reg.state(i));
        if (d.is_zero() || v[i - 1].is_zero()) continue;
        acc += d * RationalFn(v[i - 1]);
    }
    return acc;
}

SymMatrix lie_derivative(const SymMatrix& r, const std::vector<Polynomial>& v,
                         const SymbolRegistry& reg) {
    SymMatrix out(r.rows(), r.cols());
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) out.at(i, j) = lie_derivative(r.at(i, j), v, reg);
    return out;
}

DerivativeChain::DerivativeChain(GeneralSystem sys) : sys_(std::move(sys)) {
    h_.push_back(sys_.h);
}

void DerivativeChain::extend(int N) {
    const auto& reg = *sys_.registry;
    while (depth() < N) {
        int i = depth();
        const auto& hi = h_.back();
        std::vector<Polynomial> next(sys_.p);
        for (int r = 0; r < sys_.p; ++r) {
            Polynomial acc = lie_derivative(hi[r], sys_.f, reg);
            for (int j = 0; j < i; ++j) {
                for (int c = 1; c <= sys_.m; ++c) {
                    Polynomial d = hi[r].differentiate(reg.input_deriv(j, c));
                    if (d.is_zero()) continue;
                    acc += d * Polynomial::variable(reg.input_deriv(j + 1, c));
                }
            }
            next[r] = std::move(acc);
        }
        h_.push_back(std::move(next));
    }
}

const std::vector<Polynomial>& DerivativeChain::at(int i) const {
    if (i < 0 || i > depth()) throw ContractError("derivative chain depth not computed");
    return h_[i];
}

std::vector<Polynomial> DerivativeChain::stack(int k) const {
    std::vector<Polynomial> out;
    out.reserve(static_cast<std::size_t>(sys_.p) * (k + 1));
    for (int i = 0; i <= k; ++i)
        for (const auto& e : at(i)) out.push_back(e);
    return out;
}

SubstitutionMap DerivativeChain::output_substitution(int k) const {
    SubstitutionMap map;
    const auto& reg = *sys_.registry;
    for (int d = 0; d <= k; ++d)
        for (int i = 1; i <= sys_.p; ++i)
            map.emplace(reg.output_deriv(d, i).id, RationalFn(at(d)[i - 1]));
    return map;
}

} // namespace oista
