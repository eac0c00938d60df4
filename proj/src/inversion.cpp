#include "oista/inversion.hpp"

#include "oista/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace oista {

InverseMap build_inverse(const StructureReport& report, const AffineSystem& sys) {
    if (report.outcome.kind != OutcomeKind::Terminated)
        throw InversionUnavailableError("structure run did not terminate; no left inverse");
    const StructureStep& last = report.steps.back();
    const auto& reg = *sys.registry;

    InverseMap inv;
    inv.k_star = last.k;
    inv.mode = report.singh_activated_at ? StepMode::Singh : StepMode::Affine;

    SymMatrix jinv = last.jbar.adjugate_inverse(); // m x m
    if (inv.mode == StepMode::Affine) {
        inv.a.resize(sys.m);
        for (int i = 0; i < sys.m; ++i) {
            RationalFn acc;
            for (int j = 0; j < sys.m; ++j) {
                if (jinv.at(i, j).is_zero() || last.hbar[j].is_zero()) continue;
                acc += jinv.at(i, j) * last.hbar[j];
            }
            inv.a[i] = -acc;
        }
        inv.b = jinv * last.mbar;
        std::vector<Rational> zero(reg.id_bound(), Rational(0));
        for (const auto& ai : inv.a)
            if (ai.evaluate(zero) != 0)
                throw Error("internal inconsistency: A(0) != 0 in affine inverse");
    } else {
        std::vector<RationalFn> ysyms;
        for (int d = 0; d <= last.k; ++d)
            for (int i = 1; i <= sys.p; ++i)
                ysyms.push_back(RationalFn::variable(reg.output_deriv(d, i)));
        std::vector<RationalFn> rhs(sys.m);
        for (int j = 0; j < sys.m; ++j) {
            RationalFn acc;
            for (int c = 0; c < last.mbar.cols(); ++c) {
                if (last.mbar.at(j, c).is_zero()) continue;
                acc += last.mbar.at(j, c) * ysyms[c];
            }
            rhs[j] = acc - last.hbar[j];
        }
        inv.u = jinv.apply(rhs);
        inv.polynomial_in_y = true;
        for (const auto& ui : inv.u) {
            for (std::uint32_t id : ui.den().symbols()) {
                if (reg.sym_of(id).kind == SymKind::OutputDeriv) {
                    inv.polynomial_in_y = false;
                    break;
                }
            }
            if (!ui.den().is_constant()) {
                // x-dependent denominators also spoil the bounding argument
                inv.polynomial_in_y = false;
            }
            if (!inv.polynomial_in_y) break;
        }
    }
    return inv;
}

InverseCheck verify_inverse_symbolic(const InverseMap& inv, const AffineSystem& sys,
                                     DerivativeChain& chain) {
    const auto& reg = *sys.registry;
    chain.extend(inv.k_star);
    SubstitutionMap sub = chain.output_substitution(inv.k_star);

    std::vector<RationalFn> hstack;
    for (const auto& poly : chain.stack(inv.k_star)) hstack.emplace_back(poly);

    InverseCheck check;
    check.residuals.resize(sys.m);
    for (int i = 0; i < sys.m; ++i) {
        RationalFn expr;
        if (inv.mode == StepMode::Affine) {
            expr = inv.a[i];
            for (int c = 0; c < inv.b.cols(); ++c) {
                if (inv.b.at(i, c).is_zero()) continue;
                expr += inv.b.at(i, c) * hstack[c];
            }
        } else {
            expr = substitute(inv.u[i], sub);
        }
        RationalFn residual = expr - RationalFn::variable(reg.input_deriv(0, i + 1));
        if (!residual.is_zero()) check.ok = false;
        check.residuals[i] = std::move(residual);
    }
    return check;
}

double MonotoneTable::eval_interp(double s) const {
    if (grid.empty()) throw ContractError("empty table");
    if (s <= grid.front()) return values.front();
    if (s >= grid.back()) return values.back();
    auto it = std::upper_bound(grid.begin(), grid.end(), s);
    std::size_t j = static_cast<std::size_t>(it - grid.begin());
    double t = (s - grid[j - 1]) / (grid[j] - grid[j - 1]);
    return values[j - 1] + t * (values[j] - values[j - 1]);
}

double MonotoneTable::eval_ceiling(double s) const {
    if (grid.empty()) throw ContractError("empty table");
    if (s <= grid.front()) return values.front();
    if (s >= grid.back()) return values.back();
    auto it = std::lower_bound(grid.begin(), grid.end(), s);
    return values[static_cast<std::size_t>(it - grid.begin())];
}

void MonotoneTable::check_class_kinf(const char* what) const {
    if (grid.size() != values.size() || grid.empty())
        throw ContractError(std::string(what) + ": malformed table");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] <= grid[i - 1]) throw ContractError(std::string(what) + ": grid not increasing");
        if (values[i] < values[i - 1])
            throw ContractError(std::string(what) + ": table not nondecreasing");
    }
    if (grid.front() == 0.0 && values.front() != 0.0)
        throw ContractError(std::string(what) + ": table nonzero at radius 0");
}

bool Box::contains(const std::vector<double>& x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

double Box::max_radius() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        double m = std::max(std::abs(lo[i]), std::abs(hi[i]));
        acc += m * m;
    }
    return std::sqrt(acc);
}

namespace {

double euclid_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

} // namespace

BoundEstimate estimate_bounds(const InverseMap& inv, const Box& box,
                              const std::vector<double>& radius_grid, int samples,
                              std::uint32_t seed) {
    if (inv.mode != StepMode::Affine)
        throw ContractError("bound tables require an affine-mode inverse");
    const int n = static_cast<int>(box.lo.size());
    for (int i = 0; i < n; ++i)
        if (box.lo[i] > 0.0 || box.hi[i] < 0.0)
            throw ContractError("sampling box must contain the origin");
    if (radius_grid.empty() || radius_grid.front() != 0.0)
        throw ContractError("radius grid must start at 0");

    BoundEstimate est;
    est.radius_grid = radius_grid;
    est.box = box;
    est.seed = seed;
    est.sample_count = samples;

    // |B(0)| is exact up to the final square root
    std::vector<double> zero_pt;
    {
        // point vector indexed by symbol id; states are the first n ids
        std::size_t bound = 0;
        for (int r = 0; r < inv.b.rows(); ++r)
            for (int c = 0; c < inv.b.cols(); ++c)
                for (auto id : inv.b.at(r, c).symbols()) bound = std::max(bound, std::size_t(id) + 1);
        for (const auto& ai : inv.a)
            for (auto id : ai.symbols()) bound = std::max(bound, std::size_t(id) + 1);
        zero_pt.assign(std::max(bound, std::size_t(n)), 0.0);
    }
    double b0_sq = 0.0;
    for (int r = 0; r < inv.b.rows(); ++r)
        for (int c = 0; c < inv.b.cols(); ++c) {
            if (inv.b.at(r, c).is_zero()) continue;
            double v = inv.b.at(r, c).evaluate_double(zero_pt);
            b0_sq += v * v;
        }
    est.b_norm = std::sqrt(b0_sq);

    // per-sample (|x|, |A(x)|, |B(x)|_F), origin included so tables hit 0 at 0
    struct Row {
        double radius, a_norm, b_excess;
    };
    std::vector<Row> rows;
    rows.push_back(Row{0.0, 0.0, 0.0});
    HaltonSequence seq(n, seed);
    int skipped = 0;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> unit = seq.next_double();
        std::vector<double> pt = zero_pt;
        for (int i = 0; i < n; ++i) pt[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit[i];
        try {
            std::vector<double> av(inv.a.size());
            for (std::size_t i = 0; i < inv.a.size(); ++i) av[i] = inv.a[i].evaluate_double(pt);
            double b_sq = 0.0;
            for (int r = 0; r < inv.b.rows(); ++r)
                for (int c = 0; c < inv.b.cols(); ++c) {
                    if (inv.b.at(r, c).is_zero()) continue;
                    double v = inv.b.at(r, c).evaluate_double(pt);
                    b_sq += v * v;
                }
            std::vector<double> x(pt.begin(), pt.begin() + n);
            rows.push_back(Row{euclid_norm(x), euclid_norm(av),
                               std::max(std::sqrt(b_sq) - est.b_norm, 0.0)});
        } catch (const SingularityError&) {
            ++skipped;
        }
    }
    est.skipped = skipped;
    if (samples > 0 && skipped * 10 > samples)
        throw UnreliableEstimateError("more than 10% of bound samples hit singularities (" +
                                      std::to_string(skipped) + "/" + std::to_string(samples) +
                                      ")");

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.radius < b.radius; });
    est.gamma1.grid = est.gamma2.grid = est.rho1.grid = est.rho2.grid = radius_grid;
    est.gamma1.values.assign(radius_grid.size(), 0.0);
    est.gamma2.values.assign(radius_grid.size(), 0.0);
    std::size_t cursor = 0;
    double max_a = 0.0, max_b = 0.0;
    for (std::size_t j = 0; j < radius_grid.size(); ++j) {
        while (cursor < rows.size() && rows[cursor].radius <= radius_grid[j]) {
            max_a = std::max(max_a, rows[cursor].a_norm);
            max_b = std::max(max_b, rows[cursor].b_excess);
            ++cursor;
        }
        est.gamma1.values[j] = max_a;
        est.gamma2.values[j] = max_b;
    }
    est.rho1.values.resize(radius_grid.size());
    est.rho2.values.resize(radius_grid.size());
    for (std::size_t j = 0; j < radius_grid.size(); ++j) {
        est.rho1.values[j] = est.gamma1.values[j] + 0.5 * est.gamma2.values[j] * est.gamma2.values[j];
        est.rho2.values[j] = est.rho2_exact(radius_grid[j]);
    }
    est.gamma1.check_class_kinf("gamma1");
    est.gamma2.check_class_kinf("gamma2");
    est.rho1.check_class_kinf("rho1");
    est.rho2.check_class_kinf("rho2");
    return est;
}

ComposedBounds compose_bounds(const MonotoneTable& rho1, const MonotoneTable& rho2,
                              const std::vector<double>& t_slices,
                              const std::vector<MonotoneTable>& beta_bar,
                              const MonotoneTable& gamma_bar) {
    rho1.check_class_kinf("rho1");
    rho2.check_class_kinf("rho2");
    gamma_bar.check_class_kinf("gammaBar");
    if (t_slices.size() != beta_bar.size())
        throw ContractError("betaBar slice count mismatch");
    for (const auto& slice : beta_bar) slice.check_class_kinf("betaBar");
    // betaBar must decay in t at each fixed s
    for (std::size_t j = 1; j < beta_bar.size(); ++j) {
        if (t_slices[j] <= t_slices[j - 1]) throw ContractError("t slices not increasing");
        if (beta_bar[j].grid != beta_bar[j - 1].grid)
            throw ContractError("betaBar slices must share a grid");
        for (std::size_t i = 0; i < beta_bar[j].values.size(); ++i)
            if (beta_bar[j].values[i] > beta_bar[j - 1].values[i])
                throw ContractError("betaBar not nonincreasing in t");
    }

    ComposedBounds out;
    out.gamma.grid = gamma_bar.grid;
    out.gamma.values.resize(gamma_bar.grid.size());
    for (std::size_t i = 0; i < gamma_bar.grid.size(); ++i) {
        double s = gamma_bar.grid[i];
        double gb = gamma_bar.values[i];
        out.gamma.values[i] = rho1.eval_interp(2.0 * gb) + rho2.eval_interp(s) + gb;
    }
    out.gamma.check_class_kinf("gamma");

    out.t_slices = t_slices;
    for (const auto& slice : beta_bar) {
        MonotoneTable b;
        b.grid = slice.grid;
        b.values.resize(slice.values.size());
        for (std::size_t i = 0; i < slice.values.size(); ++i) {
            double bb = slice.values[i];
            b.values[i] = rho1.eval_interp(2.0 * bb) + bb;
        }
        b.check_class_kinf("beta");
        out.beta_slices.push_back(std::move(b));
    }
    return out;
}

} // namespace oista
