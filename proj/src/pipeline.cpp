#include "oista/pipeline.hpp"

#include <cmath>
#include <cstdlib>

namespace oista {

void apply_environment_overrides() {
    if (const char* v = std::getenv("OISTA_MAX_TERMS")) {
        char* end = nullptr;
        unsigned long long lim = std::strtoull(v, &end, 10);
        if (end && *end == '\0' && lim > 0) set_expansion_term_limit(static_cast<std::size_t>(lim));
    }
}

Analysis analyze_system(const AffineSystem& sys, const AnalyzeConfig& cfg) {
    Analysis a;
    a.sys = sys;
    a.validation = validate(sys);
    if (!a.validation.ok()) return a;
    a.chain = std::make_shared<DerivativeChain>(sys);

    StructureOptions opt;
    opt.affine_only = cfg.affine_only;
    opt.strict = cfg.strict;
    opt.max_iter = cfg.max_iter;
    a.structure = structure_run(sys, *a.chain, opt);

    if (a.structure->outcome.kind == OutcomeKind::Terminated) {
        a.inverse = build_inverse(*a.structure, sys);
        if (cfg.want_bounds && a.inverse->mode == StepMode::Affine) {
            if (!cfg.box) throw ContractError("bound estimation requires a box");
            std::vector<double> grid = cfg.grid;
            if (grid.empty()) {
                double rmax = cfg.box->max_radius();
                for (int i = 0; i <= 16; ++i) grid.push_back(rmax * i / 16.0);
            }
            a.bounds = estimate_bounds(*a.inverse, *cfg.box, grid, cfg.bound_samples, cfg.seed);
        }
    }
    return a;
}

SimulationResult simulate_system(Analysis& analysis, const SimulateConfig& cfg) {
    if (!analysis.structure || analysis.structure->outcome.kind != OutcomeKind::Terminated ||
        !analysis.inverse)
        throw InversionUnavailableError("simulation needs a terminated analysis with an inverse");
    const AffineSystem& sys = analysis.sys;
    if (static_cast<int>(cfg.u_exprs.size()) != sys.m)
        throw ContractError("expected " + std::to_string(sys.m) + " input signals");
    std::vector<Polynomial> channels;
    for (const auto& e : cfg.u_exprs) channels.push_back(parse_time_polynomial(e, sys.registry));
    InputSignal u(sys.registry, std::move(channels));

    SimulationResult res;
    res.trajectory = integrate(sys, cfg.x0, u, cfg.t_final, cfg.dt, *analysis.chain,
                               analysis.inverse->k_star);
    res.recovery = recover_input(res.trajectory, *analysis.inverse, sys);
    res.pass = res.recovery.max_relative_error <= cfg.tol;
    if (cfg.box) {
        if (!analysis.bounds) {
            AnalyzeConfig bcfg;
            bcfg.want_bounds = true;
            bcfg.box = cfg.box;
            analysis.bounds = estimate_bounds(*analysis.inverse, *cfg.box,
                                              [&] {
                                                  std::vector<double> g;
                                                  double rmax = cfg.box->max_radius();
                                                  for (int i = 0; i <= 16; ++i)
                                                      g.push_back(rmax * i / 16.0);
                                                  return g;
                                              }(),
                                              4096, 1);
        }
        res.bounding = check_input_bounding(res.trajectory, *analysis.bounds);
    }
    return res;
}

CertifyResult certify_system(Analysis& analysis, const CertifyConfig& cfg) {
    const AffineSystem& sys = analysis.sys;
    CertifyResult res;
    res.certificate.v = parse_state_polynomial(cfg.v_expr, sys.registry);
    res.certificate.alpha_coeff = cfg.alpha_coeff;
    res.certificate.alpha_pow = cfg.alpha_pow;
    res.certificate.chi_coeff = cfg.chi_coeff;
    res.certificate.chi_pow = cfg.chi_pow;
    res.certificate.order = cfg.order;
    validate_certificate(res.certificate, sys, cfg.box);
    if (!analysis.chain) analysis.chain = std::make_shared<DerivativeChain>(sys);
    res.report =
        check_certificate(sys, res.certificate, cfg.box, cfg.samples, *analysis.chain, cfg.seed);
    return res;
}

namespace {

std::string fn_str(const RationalFn& f, const SymbolRegistry& reg) { return f.to_string(reg); }

std::vector<std::string> vec_str(const std::vector<RationalFn>& v, const SymbolRegistry& reg) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(e.to_string(reg));
    return out;
}

std::vector<std::vector<std::string>> mat_str(const SymMatrix& m, const SymbolRegistry& reg) {
    std::vector<std::vector<std::string>> out(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        out[i].reserve(m.cols());
        for (int j = 0; j < m.cols(); ++j) out[i].push_back(m.at(i, j).to_string(reg));
    }
    return out;
}

std::vector<std::string> poly_vec_str(const std::vector<Polynomial>& v,
                                      const SymbolRegistry& reg) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(e.to_string(reg));
    return out;
}

const char* mode_str(StepMode m) { return m == StepMode::Affine ? "affine" : "singh"; }

} // namespace

Report make_report(const Analysis& analysis, const AnalyzeConfig& cfg) {
    const AffineSystem& sys = analysis.sys;
    const SymbolRegistry& reg = *sys.registry;
    Report rep;
    rep.system.name = sys.name;
    rep.system.n = sys.n;
    rep.system.m = sys.m;
    rep.system.p = sys.p;
    for (int i = 1; i <= sys.n; ++i) rep.system.states.push_back(reg.name(reg.state(i).id));
    rep.system.f = poly_vec_str(sys.f, reg);
    for (int j = 0; j < sys.m; ++j) {
        std::vector<std::string> col;
        for (int i = 0; i < sys.n; ++i) col.push_back(sys.g[i][j].to_string(reg));
        rep.system.g.push_back(std::move(col));
    }
    rep.system.h = poly_vec_str(sys.h, reg);
    rep.system.warnings = analysis.validation.warnings;

    rep.meta.version = tool_version();
    rep.meta.mode = cfg.affine_only ? "affine-only" : "auto";
    rep.meta.strict = cfg.strict;
    rep.meta.max_iter = cfg.max_iter > 0 ? cfg.max_iter : sys.n + sys.p;
    rep.meta.max_terms = expansion_term_limit();

    if (!analysis.structure) {
        rep.outcome.type = "validation-error";
        return rep;
    }
    const StructureReport& sr = *analysis.structure;
    for (const auto& st : sr.steps) {
        report::Step s;
        s.k = st.k;
        s.rank = st.rank;
        s.mode = mode_str(st.mode);
        s.hbar = vec_str(st.hbar, reg);
        s.hhat = vec_str(st.hhat, reg);
        s.mbar = mat_str(st.mbar, reg);
        s.mhat = mat_str(st.mhat, reg);
        s.jbar = mat_str(st.jbar, reg);
        s.row_order = st.row_order;
        if (st.k > 0) {
            s.f_mat = mat_str(st.f_annihilator, reg);
            s.r_mat = mat_str(st.r_transform, reg);
            report::Witness w;
            w.rank = st.witness.rank;
            w.pivot_rows = st.witness.pivot_rows;
            w.pivot_cols = st.witness.pivot_cols;
            w.pivot_minor = st.witness.pivot_minor.to_string(reg);
            for (const auto& l : st.witness.locus) w.locus.push_back(l.to_string(reg));
            s.witness = std::move(w);
        }
        for (const auto& a : st.a1_violations)
            s.a1_violations.push_back(report::A1Entry{a.row, a.input, a.value.to_string(reg)});
        rep.steps.push_back(std::move(s));
    }
    switch (sr.outcome.kind) {
        case OutcomeKind::Terminated:
            rep.outcome.type = "terminated";
            rep.outcome.k_star = sr.outcome.k_star;
            break;
        case OutcomeKind::IterationCap:
            rep.outcome.type = "iteration-cap";
            rep.outcome.max_iter = sr.outcome.max_iter;
            break;
        case OutcomeKind::Assumption2Violation:
            rep.outcome.type = "assumption2-violation";
            rep.outcome.step = sr.outcome.step;
            for (const auto& l : sr.outcome.locus) rep.outcome.locus.push_back(l.to_string(reg));
            rep.outcome.generic_rank = sr.outcome.generic_rank;
            for (const auto& e : sr.outcome.rank_on_locus)
                rep.outcome.rank_on_locus.push_back(
                    report::RankOnLocusEntry{e.factor.to_string(reg), e.rank});
            break;
        case OutcomeKind::Assumption1Violation:
            rep.outcome.type = "assumption1-violation";
            rep.outcome.step = sr.outcome.step;
            for (const auto& a : sr.outcome.violations)
                rep.outcome.violations.push_back(
                    report::A1Entry{a.row, a.input, a.value.to_string(reg)});
            break;
    }
    rep.singh_activated_at = sr.singh_activated_at;
    for (const auto& l : sr.generic_only_loci) rep.generic_only_loci.push_back(l.to_string(reg));

    if (analysis.inverse) {
        const InverseMap& inv = *analysis.inverse;
        report::Inverse iv;
        iv.k_star = inv.k_star;
        iv.mode = mode_str(inv.mode);
        if (inv.mode == StepMode::Affine) {
            iv.a = vec_str(inv.a, reg);
            iv.b = mat_str(inv.b, reg);
        } else {
            iv.u = vec_str(inv.u, reg);
            iv.polynomial_in_y = inv.polynomial_in_y;
        }
        rep.inverse = std::move(iv);
    }
    if (analysis.bounds) {
        const BoundEstimate& b = *analysis.bounds;
        report::Bounds bd;
        bd.box_lo = b.box.lo;
        bd.box_hi = b.box.hi;
        bd.grid = b.radius_grid;
        bd.gamma1 = b.gamma1.values;
        bd.gamma2 = b.gamma2.values;
        bd.rho1 = b.rho1.values;
        bd.rho2 = b.rho2.values;
        bd.b_norm = b.b_norm;
        bd.sample_count = b.sample_count;
        bd.skipped = b.skipped;
        bd.seed = b.seed;
        rep.bounds = std::move(bd);
    }
    return rep;
}

void attach_simulation(Report& rep, const SimulationResult& sim, const SimulateConfig& cfg) {
    report::TrajectoryInfo ti;
    ti.dt = sim.trajectory.dt;
    ti.t_final = cfg.t_final;
    ti.samples = static_cast<int>(sim.trajectory.times.size());
    ti.truncated = sim.trajectory.truncated;
    rep.verification.trajectory = ti;

    report::Recovery rc;
    rc.max_relative_error = sim.recovery.max_relative_error;
    rc.tol = cfg.tol;
    rc.pass = sim.pass;
    rc.singular_samples = sim.recovery.singular_samples;
    rep.verification.recovery = rc;

    if (sim.bounding) {
        report::Bounding b;
        b.checked = true;
        b.inconclusive_outside_box = sim.bounding->inconclusive_outside_box;
        b.violations = static_cast<int>(sim.bounding->violations.size());
        rep.verification.input_bounding = b;
    }
}

void attach_certificate(Report& rep, const CertifyResult& cert, const CertifyConfig& cfg) {
    report::CertificateRec c;
    c.pass = cert.report.pass;
    c.worst_margin = cert.report.worst_margin;
    c.samples = cert.report.samples;
    c.order = cfg.order;
    if (cert.report.violation)
        for (const auto& q : cert.report.violation->point) c.violating_sample.push_back(to_string(q));
    rep.verification.certificate = std::move(c);
}

} // namespace oista
