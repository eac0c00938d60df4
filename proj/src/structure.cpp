#include "oista/structure.hpp"

#include <algorithm>

namespace oista {

namespace {

/// u-free part of the time derivative of phi along the lifted system:
/// L_f phi plus the chain terms moving each y^(d) symbol to y^(d+1).
RationalFn drift_derivative(const RationalFn& phi, const AffineSystem& sys) {
    const auto& reg = *sys.registry;
    RationalFn acc = lie_derivative(phi, sys.f, reg);
    for (std::uint32_t id : phi.symbols()) {
        Sym s = reg.sym_of(id);
        if (s.kind != SymKind::OutputDeriv) continue;
        RationalFn d = phi.differentiate(id);
        if (d.is_zero()) continue;
        acc += d * RationalFn::variable(reg.output_deriv(s.order + 1, s.index));
    }
    return acc;
}

/// Derivative of phi along input column g_i (states only).
RationalFn input_derivative(const RationalFn& phi, const AffineSystem& sys, int input) {
    const auto& reg = *sys.registry;
    RationalFn acc;
    for (int s = 1; s <= sys.n; ++s) {
        RationalFn d = phi.differentiate(reg.state(s));
        if (d.is_zero()) continue;
        const Polynomial& gsi = sys.g[s - 1][input - 1];
        if (gsi.is_zero()) continue;
        acc += d * RationalFn(gsi);
    }
    return acc;
}

std::vector<RationalFn> output_stack_symbols(const SymbolRegistry& reg, int k, int p) {
    std::vector<RationalFn> out;
    out.reserve(static_cast<std::size_t>(p) * (k + 1));
    for (int d = 0; d <= k; ++d)
        for (int i = 1; i <= p; ++i) out.push_back(RationalFn::variable(reg.output_deriv(d, i)));
    return out;
}

} // namespace

StructureStep structure_init(const AffineSystem& sys) {
    StructureStep step;
    step.k = 0;
    step.rank = 0;
    step.mode = StepMode::Affine;
    step.mbar = SymMatrix(0, sys.p);
    step.mhat = SymMatrix::identity(sys.p);
    step.hbar = {};
    step.hhat.reserve(sys.p);
    for (const auto& hi : sys.h) step.hhat.emplace_back(hi);
    step.jbar = SymMatrix(0, sys.m);
    return step;
}

std::vector<A1Violation> check_assumption1(const StructureStep& step, const AffineSystem& sys) {
    std::vector<A1Violation> out;
    for (int i = 1; i <= sys.m; ++i) {
        for (int r = 0; r < step.mhat.rows(); ++r) {
            for (int c = 0; c < step.mhat.cols(); ++c) {
                RationalFn lg = input_derivative(step.mhat.at(r, c), sys, i);
                if (!lg.is_zero()) out.push_back(A1Violation{r, i, std::move(lg)});
            }
        }
    }
    return out;
}

namespace {

struct TransitionResult {
    bool halted = false;
    Outcome outcome; // set when halted
    StructureStep next;
    std::vector<A1Violation> a1; // found on the source step
};

std::vector<RankOnLocus> ranks_on_linear_factors(const SymMatrix& stacked,
                                                 const std::vector<Polynomial>& locus) {
    // a factor that is a bare state symbol admits exact substitution by 0
    std::vector<RankOnLocus> out;
    for (const auto& factor : locus) {
        if (factor.term_count() != 1) continue;
        const auto& [mono, coeff] = *factor.terms().begin();
        if (mono.powers.size() != 1 || mono.powers[0].second != 1) continue;
        SubstitutionMap sub;
        sub.emplace(mono.powers[0].first, RationalFn());
        SymMatrix reduced(stacked.rows(), stacked.cols());
        for (int r = 0; r < stacked.rows(); ++r)
            for (int c = 0; c < stacked.cols(); ++c)
                reduced.at(r, c) = substitute(stacked.at(r, c), sub);
        out.push_back(RankOnLocus{factor, generic_rank(reduced).rank});
    }
    return out;
}

TransitionResult transition(const StructureStep& step, const AffineSystem& sys,
                            const StructureOptions& opt) {
    TransitionResult res;
    const auto& reg = *sys.registry;
    const int p = sys.p, m = sys.m;
    const int hat_rows = p - step.rank;

    res.a1 = check_assumption1(step, sys);
    bool singh = step.mode == StepMode::Singh || !res.a1.empty();
    if (!res.a1.empty() && opt.affine_only) {
        res.halted = true;
        res.outcome.kind = OutcomeKind::Assumption1Violation;
        res.outcome.step = step.k;
        res.outcome.violations = res.a1;
        return res;
    }

    // u-free derivative of hhat, and the input coefficient block. Collecting
    // the L_g Mhat terms on the input side covers both modes: those terms are
    // identically zero whenever Assumption 1 holds.
    auto ysyms = output_stack_symbols(reg, step.k, p);
    std::vector<RationalFn> dh(hat_rows);
    SymMatrix jhat(hat_rows, m);
    for (int r = 0; r < hat_rows; ++r) {
        dh[r] = drift_derivative(step.hhat[r], sys);
        for (int i = 1; i <= m; ++i) {
            RationalFn entry = input_derivative(step.hhat[r], sys, i);
            for (int c = 0; c < step.mhat.cols(); ++c) {
                RationalFn lg = input_derivative(step.mhat.at(r, c), sys, i);
                if (lg.is_zero()) continue;
                entry -= lg * ysyms[c];
            }
            jhat.at(r, i - 1) = std::move(entry);
        }
    }

    SymMatrix stacked = SymMatrix::vstack(step.jbar, jhat);
    RankWitness witness = generic_rank(stacked);
    if (!witness.locus.empty() && opt.strict) {
        res.halted = true;
        res.outcome.kind = OutcomeKind::Assumption2Violation;
        res.outcome.step = step.k;
        res.outcome.locus = witness.locus;
        res.outcome.generic_rank = witness.rank;
        res.outcome.rank_on_locus = ranks_on_linear_factors(stacked, witness.locus);
        return res;
    }

    // row order: pivot rows first (Jbar's rows are always pivots and keep
    // their order), then the remaining rows ascending
    std::vector<int> order = witness.pivot_rows;
    {
        std::vector<bool> is_pivot(p, false);
        for (int r : witness.pivot_rows) is_pivot[r] = true;
        for (int r = 0; r < p; ++r)
            if (!is_pivot[r]) order.push_back(r);
    }
    const int r_next = witness.rank;

    SymMatrix jbar_next = stacked.select_rows({order.begin(), order.begin() + r_next});
    SymMatrix jtilde = stacked.select_rows({order.begin() + r_next, order.end()});
    SymMatrix f_mat = solve_annihilator(jbar_next, jtilde);

    // R = [[I, 0], [F, I]] * E
    SymMatrix perm(p, p);
    for (int i = 0; i < p; ++i) perm.at(i, order[i]) = RationalFn::constant(Rational(1));
    SymMatrix lower = SymMatrix::identity(p);
    for (int i = 0; i < f_mat.rows(); ++i)
        for (int j = 0; j < f_mat.cols(); ++j) lower.at(r_next + i, j) = f_mat.at(i, j);
    SymMatrix r_mat = lower * perm;

    // stacked M over y^{k+1}: [Mbar, 0] on top, [D0(Mhat), 0] + [0, Mhat] below
    const int old_w = step.mbar.cols();
    SymMatrix stack_m(p, old_w + p);
    for (int r = 0; r < step.rank; ++r)
        for (int c = 0; c < old_w; ++c) stack_m.at(r, c) = step.mbar.at(r, c);
    for (int r = 0; r < hat_rows; ++r) {
        for (int c = 0; c < old_w; ++c)
            stack_m.at(step.rank + r, c) = drift_derivative(step.mhat.at(r, c), sys);
        for (int c = 0; c < old_w; ++c) {
            if (step.mhat.at(r, c).is_zero()) continue;
            auto& cell = stack_m.at(step.rank + r, c + p);
            cell += step.mhat.at(r, c);
        }
    }
    std::vector<RationalFn> stack_h;
    stack_h.reserve(p);
    for (const auto& e : step.hbar) stack_h.push_back(e);
    for (auto& e : dh) stack_h.push_back(std::move(e));

    SymMatrix m_next = r_mat * stack_m;
    std::vector<RationalFn> h_next = r_mat.apply(stack_h);

    StructureStep next;
    next.k = step.k + 1;
    next.rank = r_next;
    next.mode = singh ? StepMode::Singh : StepMode::Affine;
    next.mbar = m_next.block(0, 0, r_next, m_next.cols());
    next.mhat = m_next.block(r_next, 0, p - r_next, m_next.cols());
    next.hbar.assign(h_next.begin(), h_next.begin() + r_next);
    next.hhat.assign(h_next.begin() + r_next, h_next.end());
    next.jbar = jbar_next;
    next.row_order = order;
    next.f_annihilator = f_mat;
    next.r_transform = r_mat;
    next.witness = witness;
    res.next = std::move(next);
    return res;
}

} // namespace

StructureReport structure_run(const AffineSystem& sys, DerivativeChain& chain,
                              const StructureOptions& options) {
    StructureOptions opt = options;
    if (opt.max_iter <= 0) opt.max_iter = sys.n + sys.p;
    if (opt.max_iter >= SymbolRegistry::kMaxOrder - 1)
        throw ContractError("max_iter exceeds the supported derivative order");

    StructureReport report;
    report.options = opt;
    report.steps.push_back(structure_init(sys));

    for (;;) {
        StructureStep& cur = report.steps.back();
        if (cur.rank == sys.m) {
            report.outcome.kind = OutcomeKind::Terminated;
            report.outcome.k_star = cur.k;
            break;
        }
        if (cur.k >= opt.max_iter) {
            report.outcome.kind = OutcomeKind::IterationCap;
            report.outcome.max_iter = opt.max_iter;
            break;
        }
        TransitionResult res = transition(cur, sys, opt);
        cur.a1_violations = res.a1;
        if (!res.a1.empty() && !report.singh_activated_at) report.singh_activated_at = cur.k;
        if (res.halted) {
            report.outcome = std::move(res.outcome);
            break;
        }
        if (!res.next.witness.locus.empty())
            for (const auto& f : res.next.witness.locus) report.generic_only_loci.push_back(f);
        report.steps.push_back(std::move(res.next));

        std::string detail;
        if (!verify_defining_relation(report.steps.back(), sys, chain, &detail))
            throw Error("internal inconsistency: defining relation failed at step " +
                        std::to_string(report.steps.back().k) + ": " + detail);
    }
    // ranks never decrease; guaranteed by construction, kept as a hard check
    for (std::size_t i = 1; i < report.steps.size(); ++i)
        if (report.steps[i].rank < report.steps[i - 1].rank)
            throw Error("internal inconsistency: rank decreased");
    return report;
}

bool verify_defining_relation(const StructureStep& step, const AffineSystem& sys,
                              DerivativeChain& chain, std::string* detail) {
    const auto& reg = *sys.registry;
    chain.extend(step.k);
    SubstitutionMap sub = chain.output_substitution(step.k);

    std::vector<RationalFn> hstack;
    for (const auto& poly : chain.stack(step.k)) hstack.emplace_back(poly);

    const int p = sys.p;
    for (int r = 0; r < p; ++r) {
        bool top = r < step.rank;
        const SymMatrix& mm = top ? step.mbar : step.mhat;
        int rr = top ? r : r - step.rank;
        RationalFn lhs;
        for (int c = 0; c < mm.cols(); ++c) {
            if (mm.at(rr, c).is_zero()) continue;
            lhs += substitute(mm.at(rr, c), sub) * hstack[c];
        }
        RationalFn rhs = substitute(top ? step.hbar[rr] : step.hhat[rr], sub);
        if (top) {
            for (int i = 1; i <= sys.m; ++i) {
                const RationalFn& coeff = step.jbar.at(rr, i - 1);
                if (coeff.is_zero()) continue;
                rhs += substitute(coeff, sub) * RationalFn::variable(reg.input_deriv(0, i));
            }
        }
        if (!lhs.equals(rhs)) {
            if (detail) *detail = "row " + std::to_string(r);
            return false;
        }
    }
    return true;
}

} // namespace oista
