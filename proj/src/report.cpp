#include "oista/report.hpp"

#include <sstream>

namespace oista {

const char* tool_version() { return "0.1.0"; }

namespace {

Json matrix_json(const std::vector<std::vector<std::string>>& m) {
    Json out = Json::array();
    for (const auto& row : m) out.push_back(row);
    return out;
}

std::vector<std::vector<std::string>> matrix_from_json(const Json& j) {
    std::vector<std::vector<std::string>> out;
    for (const auto& row : j) out.push_back(row.get<std::vector<std::string>>());
    return out;
}

std::string matrix_text(const std::vector<std::vector<std::string>>& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ", ";
        out += "[";
        for (std::size_t j = 0; j < m[i].size(); ++j) {
            if (j) out += ", ";
            out += m[i][j];
        }
        out += "]";
    }
    return out + "]";
}

std::string vector_text(const std::vector<std::string>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += v[i];
    }
    return out + "]";
}

} // namespace

Json Report::to_json() const {
    Json j;
    {
        Json s;
        if (!system.name.empty()) s["name"] = system.name;
        s["n"] = system.n;
        s["m"] = system.m;
        s["p"] = system.p;
        s["states"] = system.states;
        s["f"] = system.f;
        Json g = Json::array();
        for (const auto& col : system.g) g.push_back(col);
        s["g"] = g;
        s["h"] = system.h;
        if (!system.warnings.empty()) s["warnings"] = system.warnings;
        j["system"] = s;
    }
    {
        Json arr = Json::array();
        for (const auto& st : steps) {
            Json s;
            s["k"] = st.k;
            s["r"] = st.rank;
            s["mode"] = st.mode;
            s["hbar"] = st.hbar;
            s["hhat"] = st.hhat;
            s["mbar"] = matrix_json(st.mbar);
            s["mhat"] = matrix_json(st.mhat);
            s["jbar"] = matrix_json(st.jbar);
            if (!st.row_order.empty()) s["e"] = st.row_order;
            if (st.k > 0) {
                s["f"] = matrix_json(st.f_mat);
                s["r_mat"] = matrix_json(st.r_mat);
            }
            if (st.witness) {
                Json w;
                w["rank"] = st.witness->rank;
                w["pivot_rows"] = st.witness->pivot_rows;
                w["pivot_cols"] = st.witness->pivot_cols;
                w["pivot_minor"] = st.witness->pivot_minor;
                w["locus"] = st.witness->locus;
                s["rank_witness"] = w;
            }
            if (!st.a1_violations.empty()) {
                Json v = Json::array();
                for (const auto& a : st.a1_violations)
                    v.push_back(Json{{"row", a.row}, {"input", a.input}, {"value", a.value}});
                s["a1_violations"] = v;
            }
            arr.push_back(s);
        }
        j["steps"] = arr;
    }
    {
        Json o;
        o["type"] = outcome.type;
        if (outcome.k_star) o["k_star"] = *outcome.k_star;
        if (outcome.max_iter) o["max_iter"] = *outcome.max_iter;
        if (outcome.step) o["step"] = *outcome.step;
        if (!outcome.locus.empty()) o["locus"] = outcome.locus;
        if (outcome.generic_rank) o["generic_rank"] = *outcome.generic_rank;
        if (!outcome.rank_on_locus.empty()) {
            Json r = Json::array();
            for (const auto& e : outcome.rank_on_locus)
                r.push_back(Json{{"factor", e.factor}, {"rank", e.rank}});
            o["rank_on_locus"] = r;
        }
        if (!outcome.violations.empty()) {
            Json v = Json::array();
            for (const auto& a : outcome.violations)
                v.push_back(Json{{"row", a.row}, {"input", a.input}, {"value", a.value}});
            o["violations"] = v;
        }
        j["outcome"] = o;
    }
    if (singh_activated_at) j["singh_activated_at"] = *singh_activated_at;
    if (!generic_only_loci.empty()) j["generic_only_loci"] = generic_only_loci;
    if (inverse) {
        Json v;
        v["k_star"] = inverse->k_star;
        v["mode"] = inverse->mode;
        if (inverse->mode == "affine") {
            v["a"] = inverse->a;
            v["b"] = matrix_json(inverse->b);
        } else {
            v["u"] = inverse->u;
            if (inverse->polynomial_in_y) v["polynomial_in_y"] = *inverse->polynomial_in_y;
        }
        j["inverse"] = v;
    }
    if (bounds) {
        Json b;
        b["box_lo"] = bounds->box_lo;
        b["box_hi"] = bounds->box_hi;
        b["grid"] = bounds->grid;
        b["gamma1"] = bounds->gamma1;
        b["gamma2"] = bounds->gamma2;
        b["rho1"] = bounds->rho1;
        b["rho2"] = bounds->rho2;
        b["b_norm"] = bounds->b_norm;
        b["sample_count"] = bounds->sample_count;
        b["skipped"] = bounds->skipped;
        b["seed"] = bounds->seed;
        b["norm"] = bounds->norm;
        j["bounds"] = b;
    }
    if (!verification.empty()) {
        Json v;
        if (verification.trajectory) {
            const auto& t = *verification.trajectory;
            v["trajectory"] = Json{{"dt", t.dt},
                                   {"t_final", t.t_final},
                                   {"samples", t.samples},
                                   {"truncated", t.truncated}};
        }
        if (verification.recovery) {
            const auto& r = *verification.recovery;
            v["recovery"] = Json{{"max_relative_error", r.max_relative_error},
                                 {"tol", r.tol},
                                 {"pass", r.pass},
                                 {"singular_samples", r.singular_samples}};
        }
        if (verification.input_bounding) {
            const auto& b = *verification.input_bounding;
            v["input_bounding"] = Json{{"checked", b.checked},
                                       {"inconclusive_outside_box", b.inconclusive_outside_box},
                                       {"violations", b.violations}};
        }
        if (verification.certificate) {
            const auto& c = *verification.certificate;
            Json cj{{"pass", c.pass},
                    {"worst_margin", c.worst_margin},
                    {"samples", c.samples},
                    {"order", c.order}};
            if (!c.violating_sample.empty()) cj["violating_sample"] = c.violating_sample;
            v["certificate"] = cj;
        }
        j["verification"] = v;
    }
    {
        Json m;
        m["tool"] = meta.tool;
        m["version"] = meta.version;
        Json cfg;
        cfg["mode"] = meta.mode;
        cfg["strict"] = meta.strict;
        cfg["max_iter"] = meta.max_iter;
        cfg["max_terms"] = meta.max_terms;
        m["config"] = cfg;
        j["meta"] = m;
    }
    return j;
}

Report Report::from_json(const Json& j) {
    Report r;
    const Json& s = j.at("system");
    if (s.contains("name")) r.system.name = s.at("name").get<std::string>();
    r.system.n = s.at("n").get<int>();
    r.system.m = s.at("m").get<int>();
    r.system.p = s.at("p").get<int>();
    r.system.states = s.at("states").get<std::vector<std::string>>();
    r.system.f = s.at("f").get<std::vector<std::string>>();
    for (const auto& col : s.at("g")) r.system.g.push_back(col.get<std::vector<std::string>>());
    r.system.h = s.at("h").get<std::vector<std::string>>();
    if (s.contains("warnings"))
        r.system.warnings = s.at("warnings").get<std::vector<std::string>>();

    for (const auto& sj : j.at("steps")) {
        report::Step st;
        st.k = sj.at("k").get<int>();
        st.rank = sj.at("r").get<int>();
        st.mode = sj.at("mode").get<std::string>();
        st.hbar = sj.at("hbar").get<std::vector<std::string>>();
        st.hhat = sj.at("hhat").get<std::vector<std::string>>();
        st.mbar = matrix_from_json(sj.at("mbar"));
        st.mhat = matrix_from_json(sj.at("mhat"));
        st.jbar = matrix_from_json(sj.at("jbar"));
        if (sj.contains("e")) st.row_order = sj.at("e").get<std::vector<int>>();
        if (sj.contains("f")) st.f_mat = matrix_from_json(sj.at("f"));
        if (sj.contains("r_mat")) st.r_mat = matrix_from_json(sj.at("r_mat"));
        if (sj.contains("rank_witness")) {
            const Json& w = sj.at("rank_witness");
            report::Witness wit;
            wit.rank = w.at("rank").get<int>();
            wit.pivot_rows = w.at("pivot_rows").get<std::vector<int>>();
            wit.pivot_cols = w.at("pivot_cols").get<std::vector<int>>();
            wit.pivot_minor = w.at("pivot_minor").get<std::string>();
            wit.locus = w.at("locus").get<std::vector<std::string>>();
            st.witness = wit;
        }
        if (sj.contains("a1_violations")) {
            for (const auto& a : sj.at("a1_violations"))
                st.a1_violations.push_back(report::A1Entry{a.at("row").get<int>(),
                                                           a.at("input").get<int>(),
                                                           a.at("value").get<std::string>()});
        }
        r.steps.push_back(std::move(st));
    }

    const Json& o = j.at("outcome");
    r.outcome.type = o.at("type").get<std::string>();
    if (o.contains("k_star")) r.outcome.k_star = o.at("k_star").get<int>();
    if (o.contains("max_iter")) r.outcome.max_iter = o.at("max_iter").get<int>();
    if (o.contains("step")) r.outcome.step = o.at("step").get<int>();
    if (o.contains("locus")) r.outcome.locus = o.at("locus").get<std::vector<std::string>>();
    if (o.contains("generic_rank")) r.outcome.generic_rank = o.at("generic_rank").get<int>();
    if (o.contains("rank_on_locus"))
        for (const auto& e : o.at("rank_on_locus"))
            r.outcome.rank_on_locus.push_back(report::RankOnLocusEntry{
                e.at("factor").get<std::string>(), e.at("rank").get<int>()});
    if (o.contains("violations"))
        for (const auto& a : o.at("violations"))
            r.outcome.violations.push_back(report::A1Entry{a.at("row").get<int>(),
                                                           a.at("input").get<int>(),
                                                           a.at("value").get<std::string>()});

    if (j.contains("singh_activated_at")) r.singh_activated_at = j.at("singh_activated_at").get<int>();
    if (j.contains("generic_only_loci"))
        r.generic_only_loci = j.at("generic_only_loci").get<std::vector<std::string>>();

    if (j.contains("inverse")) {
        const Json& v = j.at("inverse");
        report::Inverse inv;
        inv.k_star = v.at("k_star").get<int>();
        inv.mode = v.at("mode").get<std::string>();
        if (v.contains("a")) inv.a = v.at("a").get<std::vector<std::string>>();
        if (v.contains("b")) inv.b = matrix_from_json(v.at("b"));
        if (v.contains("u")) inv.u = v.at("u").get<std::vector<std::string>>();
        if (v.contains("polynomial_in_y")) inv.polynomial_in_y = v.at("polynomial_in_y").get<bool>();
        r.inverse = std::move(inv);
    }
    if (j.contains("bounds")) {
        const Json& b = j.at("bounds");
        report::Bounds bd;
        bd.box_lo = b.at("box_lo").get<std::vector<double>>();
        bd.box_hi = b.at("box_hi").get<std::vector<double>>();
        bd.grid = b.at("grid").get<std::vector<double>>();
        bd.gamma1 = b.at("gamma1").get<std::vector<double>>();
        bd.gamma2 = b.at("gamma2").get<std::vector<double>>();
        bd.rho1 = b.at("rho1").get<std::vector<double>>();
        bd.rho2 = b.at("rho2").get<std::vector<double>>();
        bd.b_norm = b.at("b_norm").get<double>();
        bd.sample_count = b.at("sample_count").get<int>();
        bd.skipped = b.at("skipped").get<int>();
        bd.seed = b.at("seed").get<std::uint32_t>();
        bd.norm = b.at("norm").get<std::string>();
        r.bounds = std::move(bd);
    }
    if (j.contains("verification")) {
        const Json& v = j.at("verification");
        if (v.contains("trajectory")) {
            const Json& t = v.at("trajectory");
            report::TrajectoryInfo ti;
            ti.dt = t.at("dt").get<double>();
            ti.t_final = t.at("t_final").get<double>();
            ti.samples = t.at("samples").get<int>();
            ti.truncated = t.at("truncated").get<bool>();
            r.verification.trajectory = ti;
        }
        if (v.contains("recovery")) {
            const Json& t = v.at("recovery");
            report::Recovery rec;
            rec.max_relative_error = t.at("max_relative_error").get<double>();
            rec.tol = t.at("tol").get<double>();
            rec.pass = t.at("pass").get<bool>();
            rec.singular_samples = t.at("singular_samples").get<int>();
            r.verification.recovery = rec;
        }
        if (v.contains("input_bounding")) {
            const Json& t = v.at("input_bounding");
            report::Bounding b;
            b.checked = t.at("checked").get<bool>();
            b.inconclusive_outside_box = t.at("inconclusive_outside_box").get<bool>();
            b.violations = t.at("violations").get<int>();
            r.verification.input_bounding = b;
        }
        if (v.contains("certificate")) {
            const Json& t = v.at("certificate");
            report::CertificateRec c;
            c.pass = t.at("pass").get<bool>();
            c.worst_margin = t.at("worst_margin").get<double>();
            c.samples = t.at("samples").get<int>();
            c.order = t.at("order").get<int>();
            if (t.contains("violating_sample"))
                c.violating_sample = t.at("violating_sample").get<std::vector<std::string>>();
            r.verification.certificate = c;
        }
    }
    const Json& m = j.at("meta");
    r.meta.tool = m.at("tool").get<std::string>();
    r.meta.version = m.at("version").get<std::string>();
    const Json& cfg = m.at("config");
    r.meta.mode = cfg.at("mode").get<std::string>();
    r.meta.strict = cfg.at("strict").get<bool>();
    r.meta.max_iter = cfg.at("max_iter").get<int>();
    r.meta.max_terms = cfg.at("max_terms").get<std::size_t>();
    return r;
}

std::string Report::to_text() const {
    std::ostringstream os;
    os << "system";
    if (!system.name.empty()) os << " " << system.name;
    os << ": n=" << system.n << " m=" << system.m << " p=" << system.p << "\n";
    os << "  f = " << vector_text(system.f) << "\n";
    for (std::size_t i = 0; i < system.g.size(); ++i)
        os << "  g" << (i + 1) << " = " << vector_text(system.g[i]) << "\n";
    os << "  h = " << vector_text(system.h) << "\n";
    for (const auto& w : system.warnings) os << "  warning: " << w << "\n";
    os << "\n";
    for (const auto& st : steps) {
        os << "step k=" << st.k << ": r=" << st.rank << " mode=" << st.mode << "\n";
        if (!st.row_order.empty()) {
            os << "  E = [";
            for (std::size_t i = 0; i < st.row_order.size(); ++i)
                os << (i ? ", " : "") << st.row_order[i];
            os << "]\n";
            os << "  F = " << matrix_text(st.f_mat) << "\n";
            os << "  R = " << matrix_text(st.r_mat) << "\n";
        }
        os << "  hbar = " << vector_text(st.hbar) << "\n";
        os << "  hhat = " << vector_text(st.hhat) << "\n";
        os << "  Jbar = " << matrix_text(st.jbar) << "\n";
        os << "  Mbar = " << matrix_text(st.mbar) << "\n";
        os << "  Mhat = " << matrix_text(st.mhat) << "\n";
        if (st.witness) {
            os << "  rank witness: rank=" << st.witness->rank << " minor=" << st.witness->pivot_minor;
            if (!st.witness->locus.empty()) {
                os << " locus=" << vector_text(st.witness->locus);
            }
            os << "\n";
        }
        for (const auto& a : st.a1_violations)
            os << "  assumption-1 violation: row " << a.row << ", input " << a.input << ", L_g = "
               << a.value << "\n";
    }
    os << "\noutcome: " << outcome.type;
    if (outcome.k_star) os << " (k* = " << *outcome.k_star << ")";
    if (outcome.step) os << " at step " << *outcome.step;
    if (!outcome.locus.empty()) os << ", vanishing locus " << vector_text(outcome.locus);
    if (outcome.generic_rank) os << ", generic rank " << *outcome.generic_rank;
    for (const auto& e : outcome.rank_on_locus)
        os << ", rank " << e.rank << " on " << e.factor << " = 0";
    os << "\n";
    if (singh_activated_at)
        os << "input-dependent terms collected from step " << *singh_activated_at << " on\n";
    if (!generic_only_loci.empty())
        os << "conclusions hold off the zero set of " << vector_text(generic_only_loci) << "\n";
    if (inverse) {
        os << "\ninverse (k* = " << inverse->k_star << ", " << inverse->mode << " mode):\n";
        if (inverse->mode == "affine") {
            os << "  A = " << vector_text(inverse->a) << "\n";
            os << "  B = " << matrix_text(inverse->b) << "\n";
        } else {
            for (std::size_t i = 0; i < inverse->u.size(); ++i)
                os << "  u" << (i + 1) << " = " << inverse->u[i] << "\n";
            if (inverse->polynomial_in_y)
                os << "  polynomial in y-derivatives: " << (*inverse->polynomial_in_y ? "yes" : "no")
                   << "\n";
        }
    }
    if (bounds) {
        os << "\nbound tables (Frobenius norms, seed " << bounds->seed << ", "
           << bounds->sample_count << " samples, " << bounds->skipped << " skipped):\n";
        os << "  |B(0)| = " << bounds->b_norm << "\n";
        os << "  r:      ";
        for (double g : bounds->grid) os << g << " ";
        os << "\n  gamma1: ";
        for (double g : bounds->gamma1) os << g << " ";
        os << "\n  gamma2: ";
        for (double g : bounds->gamma2) os << g << " ";
        os << "\n  rho1:   ";
        for (double g : bounds->rho1) os << g << " ";
        os << "\n  rho2:   ";
        for (double g : bounds->rho2) os << g << " ";
        os << "\n";
    }
    if (!verification.empty()) {
        os << "\nverification:\n";
        if (verification.trajectory) {
            const auto& t = *verification.trajectory;
            os << "  trajectory: dt=" << t.dt << " t_final=" << t.t_final << " samples="
               << t.samples << (t.truncated ? " (truncated)" : "") << "\n";
        }
        if (verification.recovery) {
            const auto& rr = *verification.recovery;
            os << "  recovery: max relative error " << rr.max_relative_error << " (tol " << rr.tol
               << ") -> " << (rr.pass ? "pass" : "FAIL") << "\n";
            if (rr.singular_samples > 0)
                os << "  recovery: " << rr.singular_samples << " singular samples skipped\n";
        }
        if (verification.input_bounding) {
            const auto& b = *verification.input_bounding;
            os << "  input bounding: " << b.violations << " violations"
               << (b.inconclusive_outside_box ? " (left the sampling box: inconclusive)" : "")
               << "\n";
        }
        if (verification.certificate) {
            const auto& c = *verification.certificate;
            os << "  certificate: " << (c.pass ? "pass" : "VIOLATED") << ", worst margin "
               << c.worst_margin << " over " << c.samples << " samples\n";
            if (!c.violating_sample.empty()) {
                os << "  violating sample: (";
                for (std::size_t i = 0; i < c.violating_sample.size(); ++i)
                    os << (i ? ", " : "") << c.violating_sample[i];
                os << ")\n";
            }
        }
    }
    os << "\n" << meta.tool << " " << meta.version << " [mode=" << meta.mode
       << " strict=" << (meta.strict ? "on" : "off") << " max_iter=" << meta.max_iter
       << " max_terms=" << meta.max_terms << "]\n";
    return os.str();
}

int exit_code_for(const report::OutcomeRec& outcome) {
    if (outcome.type == "terminated") return 0;
    if (outcome.type == "assumption2-violation") return 2;
    if (outcome.type == "iteration-cap") return 3;
    if (outcome.type == "assumption1-violation") return 4;
    return 1;
}

} // namespace oista
