#pragma once

#include "oista/structure.hpp"

#include <optional>
#include <vector>

namespace oista {

/// Explicit left inverse u = A(x) + B(x) y^{k*} recovered from a terminated
/// run. When input-dependent terms had to be collected along the way the
/// inverse is instead a vector of rational expressions in x and the
/// output-derivative symbols.
struct InverseMap {
    int k_star = 0;
    StepMode mode = StepMode::Affine;
    // affine mode
    std::vector<RationalFn> a; // m entries, functions of x, A(0) = 0
    SymMatrix b;               // m x p(k_star + 1), functions of x
    // collected mode
    std::vector<RationalFn> u; // m entries, rational in x and y-derivatives
    bool polynomial_in_y = false;
};

InverseMap build_inverse(const StructureReport& report, const AffineSystem& sys);

struct InverseCheck {
    bool ok = true;
    std::vector<RationalFn> residuals; // u_expr(H-substituted) - u0, per input
};

/// Substitutes the H-chain for every output-derivative symbol; the inverse
/// must reproduce the identity map on u0.
InverseCheck verify_inverse_symbolic(const InverseMap& inv, const AffineSystem& sys,
                                     DerivativeChain& chain);

/// Nondecreasing table on a radius grid with value 0 at radius 0.
struct MonotoneTable {
    std::vector<double> grid;
    std::vector<double> values;

    double eval_interp(double s) const; // linear interpolation, clamped
    double eval_ceiling(double s) const; // value at the next grid point up
    void check_class_kinf(const char* what) const;
};

struct Box {
    std::vector<double> lo, hi; // per state
    bool contains(const std::vector<double>& x) const;
    double max_radius() const;
};

struct BoundEstimate {
    std::vector<double> radius_grid;
    MonotoneTable gamma1, gamma2, rho1, rho2;
    double b_norm = 0.0; // Frobenius norm of B(0)
    Box box;
    int sample_count = 0;
    int skipped = 0;
    std::uint32_t seed = 0;

    double rho2_exact(double r) const { return b_norm * r + 0.5 * r * r; }
};

/// Samples |A| and |B| - |B(0)| over nested balls inside the box with a
/// deterministic low-discrepancy sequence, then forms
///   rho1(r) = gamma1(r) + (1/2) gamma2(r)^2,  rho2(r) = |B(0)| r + (1/2) r^2.
/// Matrix norms are Frobenius. Requires an affine-mode inverse and 0 in box.
BoundEstimate estimate_bounds(const InverseMap& inv, const Box& box,
                              const std::vector<double>& radius_grid, int samples,
                              std::uint32_t seed = 1);

struct ComposedBounds {
    MonotoneTable gamma;
    // beta(s, t) sampled on (s grid) x (t slice list)
    std::vector<double> t_slices;
    std::vector<MonotoneTable> beta_slices;
};

/// Combines the inverse bounds with a detectability estimate:
///   gamma(s) = rho1(2 gammaBar(s)) + rho2(s) + gammaBar(s)
///   beta(s, t) = rho1(2 betaBar(s, t)) + betaBar(s, t)
/// The detectability pair (betaBar, gammaBar) and its derivative order are
/// asserted by the caller; the composed tables are conditional on them and
/// apply at stack order max(caller's order, k*).
ComposedBounds compose_bounds(const MonotoneTable& rho1, const MonotoneTable& rho2,
                              const std::vector<double>& t_slices,
                              const std::vector<MonotoneTable>& beta_bar,
                              const MonotoneTable& gamma_bar);

} // namespace oista
