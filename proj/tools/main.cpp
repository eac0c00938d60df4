#include "oista/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace oista;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Box parse_box(const std::string& spec, int n) {
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (...) {
            throw ContractError("bad box value '" + item + "'");
        }
    }
    Box box;
    if (vals.size() == 2) {
        box.lo.assign(n, vals[0]);
        box.hi.assign(n, vals[1]);
    } else if (vals.size() == static_cast<std::size_t>(2 * n)) {
        for (int i = 0; i < n; ++i) {
            box.lo.push_back(vals[2 * i]);
            box.hi.push_back(vals[2 * i + 1]);
        }
    } else {
        throw ContractError("box must be 'lo,hi' or per-state 'lo1,hi1,...'");
    }
    for (int i = 0; i < n; ++i)
        if (box.lo[i] > box.hi[i]) throw ContractError("box has lo > hi");
    return box;
}

std::vector<double> parse_csv_doubles(const std::string& spec) {
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    return vals;
}

void parse_monomial_gain(const std::string& spec, Rational& coeff, std::uint32_t& pow) {
    auto comma = spec.find(',');
    if (comma == std::string::npos) throw ContractError("expected 'c,q' monomial spec");
    coeff = parse_rational(spec.substr(0, comma));
    int q = std::stoi(spec.substr(comma + 1));
    if (q < 1) throw ContractError("monomial power must be >= 1");
    pow = static_cast<std::uint32_t>(q);
}

struct FileRun {
    std::string output;
    std::string error;
    int exit_code = 0;
};

FileRun run_analyze_one(const fs::path& path, const AnalyzeConfig& base_cfg, bool json) {
    FileRun out;
    try {
        AffineSystem sys = parse_system(read_file(path));
        AnalyzeConfig cfg = base_cfg;
        if (cfg.want_bounds && cfg.box &&
            static_cast<int>(cfg.box->lo.size()) != sys.n)
            throw ContractError("box dimension does not match the system");
        Analysis a = analyze_system(sys, cfg);
        if (!a.validation.ok()) {
            for (const auto& e : a.validation.errors) out.error += "error: " + e + "\n";
            out.exit_code = 1;
            return out;
        }
        Report rep = make_report(a, cfg);
        out.output = json ? rep.to_json().dump(2) + "\n" : rep.to_text();
        out.exit_code = exit_code_for(rep.outcome);
    } catch (const Error& e) {
        out.error = std::string("error: ") + e.what() + "\n";
        out.exit_code = 1;
    }
    return out;
}

int cmd_analyze(const std::string& target, const AnalyzeConfig& cfg, bool json) {
    fs::path path(target);
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file() && e.path().extension() == ".sys") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        std::vector<std::future<FileRun>> futures;
        for (const auto& f : files)
            futures.push_back(std::async(std::launch::async, run_analyze_one, f, cfg, json));
        int worst = 0;
        for (std::size_t i = 0; i < files.size(); ++i) {
            FileRun r = futures[i].get();
            std::cout << "== " << files[i].filename().string() << " ==\n" << r.output;
            if (!r.error.empty()) std::cerr << files[i].filename().string() << ": " << r.error;
            worst = std::max(worst, r.exit_code);
        }
        return worst;
    }
    FileRun r = run_analyze_one(path, cfg, json);
    std::cout << r.output;
    std::cerr << r.error;
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    apply_environment_overrides();

    CLI::App app{"output-input stability analyzer for control-affine polynomial systems"};
    app.require_subcommand(1);

    std::string mode = "auto";
    bool permissive = false;
    int max_iter = 0;
    bool json = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "analysis mode: auto | affine-only")
            ->check(CLI::IsMember({"auto", "affine-only"}));
        cmd->add_flag("--permissive", permissive,
                      "continue past a nonconstant pivot minor (conclusions hold generically)");
        cmd->add_option("--max-iter", max_iter, "iteration cap (default n + p)");
        cmd->add_flag("--json", json, "emit the report as JSON");
    };

    // analyze
    auto* analyze = app.add_subcommand("analyze", "run the structure algorithm on a file or directory");
    std::string target;
    analyze->add_option("path", target, "system file or directory of .sys files")->required();
    bool want_bounds = false;
    std::string box_spec, grid_spec;
    int samples = 4096;
    std::uint32_t seed = 1;
    analyze->add_flag("--bounds", want_bounds, "estimate input-bounding tables (needs --box)");
    analyze->add_option("--box", box_spec, "sampling box 'lo,hi' or 'lo1,hi1,...'");
    analyze->add_option("--grid", grid_spec, "radius grid as csv (default 17 points)");
    analyze->add_option("--samples", samples, "bound sampling count");
    analyze->add_option("--seed", seed, "low-discrepancy sequence offset");
    add_common(analyze);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "integrate a trajectory and recover the input");
    std::string sim_target, x0_spec, sim_box_spec;
    double dt = 1e-3, t_final = 1.0, tol = 1e-6;
    std::vector<std::string> u_spec(9);
    simulate->add_option("path", sim_target, "system file")->required();
    simulate->add_option("--x0", x0_spec, "initial state as csv")->required();
    for (int i = 1; i <= 9; ++i)
        simulate->add_option("--u" + std::to_string(i), u_spec[i - 1],
                             "input " + std::to_string(i) + " as a polynomial in t");
    simulate->add_option("--dt", dt, "integration step");
    simulate->add_option("--t-final", t_final, "final time");
    simulate->add_option("--tol", tol, "max relative recovery error for exit 0");
    simulate->add_option("--box", sim_box_spec, "enables the input-bounding check on this box");
    add_common(simulate);

    // certify
    auto* certify = app.add_subcommand("certify", "sample a detectability dissipation inequality");
    std::string cert_target, v_expr, alpha_spec = "1,2", chi_spec = "1,2", cert_box_spec;
    int order = 0, cert_samples = 1024;
    std::uint32_t cert_seed = 1;
    certify->add_option("path", cert_target, "system file")->required();
    certify->add_option("--V", v_expr, "candidate certificate polynomial in the states")->required();
    certify->add_option("--alpha", alpha_spec, "decay gain 'c,q' meaning c*s^q");
    certify->add_option("--chi", chi_spec, "output gain 'c,q' meaning c*s^q (c may be 0)");
    certify->add_option("--order", order, "derivative order N of the output stack");
    certify->add_option("--box", cert_box_spec, "sampling box")->required();
    certify->add_option("--samples", cert_samples, "sample count");
    certify->add_option("--seed", cert_seed, "low-discrepancy sequence offset");
    add_common(certify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze)) {
            AnalyzeConfig cfg;
            cfg.affine_only = mode == "affine-only";
            cfg.strict = !permissive;
            cfg.max_iter = max_iter;
            cfg.want_bounds = want_bounds;
            cfg.bound_samples = samples;
            cfg.seed = seed;
            if (want_bounds && box_spec.empty())
                throw ContractError("--bounds requires --box");
            if (!box_spec.empty()) {
                // box dimension check happens per file once n is known
                if (!fs::is_directory(target)) {
                    AffineSystem sys = parse_system(read_file(target));
                    cfg.box = parse_box(box_spec, sys.n);
                } else {
                    throw ContractError("--box applies to single-file analyze only");
                }
            }
            if (!grid_spec.empty()) cfg.grid = parse_csv_doubles(grid_spec);
            return cmd_analyze(target, cfg, json);
        }
        if (app.got_subcommand(simulate)) {
            AnalyzeConfig cfg;
            cfg.affine_only = mode == "affine-only";
            cfg.strict = !permissive;
            cfg.max_iter = max_iter;
            AffineSystem sys = parse_system(read_file(sim_target));
            Analysis a = analyze_system(sys, cfg);
            if (!a.validation.ok()) {
                for (const auto& e : a.validation.errors) std::cerr << "error: " << e << "\n";
                return 1;
            }
            Report rep = make_report(a, cfg);
            int code = exit_code_for(rep.outcome);
            if (code != 0) {
                std::cerr << "error: inversion unavailable (analysis outcome: " << rep.outcome.type
                          << ")\n";
                std::cout << (json ? rep.to_json().dump(2) + "\n" : rep.to_text());
                return code;
            }
            SimulateConfig scfg;
            scfg.x0 = parse_csv_doubles(x0_spec);
            if (static_cast<int>(scfg.x0.size()) != sys.n)
                throw ContractError("--x0 must have n entries");
            if (sys.m > 9) throw ContractError("simulate supports up to 9 input channels");
            for (int i = 0; i < sys.m; ++i) {
                if (u_spec[i].empty()) u_spec[i] = "0";
                scfg.u_exprs.push_back(u_spec[i]);
            }
            scfg.dt = dt;
            scfg.t_final = t_final;
            scfg.tol = tol;
            if (!sim_box_spec.empty()) scfg.box = parse_box(sim_box_spec, sys.n);
            SimulationResult sim = simulate_system(a, scfg);
            rep = make_report(a, cfg);
            attach_simulation(rep, sim, scfg);
            std::cout << (json ? rep.to_json().dump(2) + "\n" : rep.to_text());
            return sim.pass ? 0 : 5;
        }
        if (app.got_subcommand(certify)) {
            AnalyzeConfig cfg;
            AffineSystem sys = parse_system(read_file(cert_target));
            Analysis a;
            a.sys = sys;
            a.validation = validate(sys);
            if (!a.validation.ok()) {
                for (const auto& e : a.validation.errors) std::cerr << "error: " << e << "\n";
                return 1;
            }
            CertifyConfig ccfg;
            ccfg.v_expr = v_expr;
            parse_monomial_gain(alpha_spec, ccfg.alpha_coeff, ccfg.alpha_pow);
            parse_monomial_gain(chi_spec, ccfg.chi_coeff, ccfg.chi_pow);
            ccfg.order = order;
            ccfg.box = parse_box(cert_box_spec, sys.n);
            ccfg.samples = cert_samples;
            ccfg.seed = cert_seed;
            CertifyResult cres = certify_system(a, ccfg);
            Report rep = make_report(a, cfg);
            rep.steps.clear(); // certify does not run the structure algorithm
            rep.outcome.type = cres.report.pass ? "certificate-pass" : "certificate-violation";
            attach_certificate(rep, cres, ccfg);
            std::cout << (json ? rep.to_json().dump(2) + "\n" : rep.to_text());
            return cres.report.pass ? 0 : 6;
        }
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
