#pragma once

#include "oista/parser.hpp"
#include "oista/report.hpp"

#include <memory>
#include <optional>
#include <string>

namespace oista {

struct AnalyzeConfig {
    bool affine_only = false;
    bool strict = true;
    int max_iter = 0; // 0 = n + p
    // optional bound estimation (affine-mode inverse only)
    bool want_bounds = false;
    std::optional<Box> box;
    std::vector<double> grid; // empty = default grid over the box
    int bound_samples = 4096;
    std::uint32_t seed = 1;
};

struct SimulateConfig {
    std::vector<double> x0;
    std::vector<std::string> u_exprs; // one polynomial in t per input
    double dt = 1e-3;
    double t_final = 1.0;
    double tol = 1e-6;
    std::optional<Box> box; // enables the input-bounding check
};

struct CertifyConfig {
    std::string v_expr;
    Rational alpha_coeff = Rational(1);
    std::uint32_t alpha_pow = 2;
    Rational chi_coeff = Rational(1);
    std::uint32_t chi_pow = 2;
    int order = 0;
    Box box;
    int samples = 1024;
    std::uint32_t seed = 1;
};

/// In-memory results of one analysis pass over a system.
struct Analysis {
    AffineSystem sys;
    ValidationReport validation;
    std::shared_ptr<DerivativeChain> chain;
    std::optional<StructureReport> structure;
    std::optional<InverseMap> inverse;
    std::optional<BoundEstimate> bounds;
};

/// Runs validate -> structure -> inverse (if terminated) -> optional bounds.
/// Throws Error subtypes on parse/validation failure.
Analysis analyze_system(const AffineSystem& sys, const AnalyzeConfig& cfg);

/// Adds integrate + recover (+ bounding when cfg.box is set) on top of an
/// analysis that terminated.
struct SimulationResult {
    Trajectory trajectory;
    RecoveryResult recovery;
    std::optional<BoundingReport> bounding;
    bool pass = false; // max relative error <= tol
};
SimulationResult simulate_system(Analysis& analysis, const SimulateConfig& cfg);

struct CertifyResult {
    Certificate certificate;
    CertificateReport report;
};
CertifyResult certify_system(Analysis& analysis, const CertifyConfig& cfg);

/// Report assembly; expressions rendered in canonical monomial order.
Report make_report(const Analysis& analysis, const AnalyzeConfig& cfg);
void attach_simulation(Report& rep, const SimulationResult& sim, const SimulateConfig& cfg);
void attach_certificate(Report& rep, const CertifyResult& cert, const CertifyConfig& cfg);

/// Reads the expansion-guard override from OISTA_MAX_TERMS, if set.
void apply_environment_overrides();

} // namespace oista
