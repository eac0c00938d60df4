#pragma once

#include "oista/matrix.hpp"

#include <memory>
#include <string>
#include <vector>

namespace oista {

/// Control-affine system: xdot = f(x) + G(x) u, y = h(x), with polynomial
/// entries over the state symbols of a shared registry.
struct AffineSystem {
    std::shared_ptr<const SymbolRegistry> registry;
    std::string name;
    int n = 0, m = 0, p = 0;
    std::vector<Polynomial> f;              // n entries
    std::vector<std::vector<Polynomial>> g; // n x m, g[row][input]
    std::vector<Polynomial> h;              // p entries
};

/// General form xdot = f(x, u), y = h(x); drift entries may involve the
/// zeroth-order input symbols.
struct GeneralSystem {
    std::shared_ptr<const SymbolRegistry> registry;
    int n = 0, m = 0, p = 0;
    std::vector<Polynomial> f;
    std::vector<Polynomial> h;
};

/// Embeds f(x) + G(x) u0 into the general form.
GeneralSystem lift(const AffineSystem& sys);

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

/// Checks dimensions, f(0) = 0 (error), h(0) = 0 (warning only), m <= p,
/// and that entries use only state symbols.
ValidationReport validate(const AffineSystem& sys);
ValidationReport validate(const GeneralSystem& sys);

/// Derivative of `r` along the vector field `v` over the state symbols;
/// non-state symbols are treated as constants.
Polynomial lie_derivative(const Polynomial& r, const std::vector<Polynomial>& v,
                          const SymbolRegistry& reg);
RationalFn lie_derivative(const RationalFn& r, const std::vector<Polynomial>& v,
                          const SymbolRegistry& reg);
SymMatrix lie_derivative(const SymMatrix& r, const std::vector<Polynomial>& v,
                         const SymbolRegistry& reg);

/// The maps H_0..H_N: H_0 = h and
///   H_{i+1} = (dH_i/dx) f(x, u_0) + sum_j (dH_i/du_j) u_{j+1},
/// so that y^(i)(t) = H_i(x(t), u(t), ..., u^(i-1)(t)) along trajectories.
class DerivativeChain {
public:
    explicit DerivativeChain(GeneralSystem sys);
    explicit DerivativeChain(const AffineSystem& sys) : DerivativeChain(lift(sys)) {}

    /// Ensures H_0..H_N are available (computed once, extended on demand).
    void extend(int N);
    int depth() const { return static_cast<int>(h_.size()) - 1; }

    /// H_i as a p-vector of polynomials in x and u_{0..i-1}.
    const std::vector<Polynomial>& at(int i) const;

    /// Stacked (H_0; ...; H_k) as a flat p*(k+1)-vector.
    std::vector<Polynomial> stack(int k) const;

    /// Substitution map y_i^(d) -> H_d[i] for d = 0..k.
    SubstitutionMap output_substitution(int k) const;

    const GeneralSystem& system() const { return sys_; }

private:
    GeneralSystem sys_;
    std::vector<std::vector<Polynomial>> h_;
};

} // namespace oista
