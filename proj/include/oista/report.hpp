#pragma once

#include "oista/inversion.hpp"
#include "oista/verify.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace oista {

using Json = nlohmann::ordered_json;

/// Everything below mirrors the emitted JSON one-to-one; expressions are
/// stored as canonical strings so reports round-trip losslessly.
namespace report {

struct System {
    std::string name;
    int n = 0, m = 0, p = 0;
    std::vector<std::string> states;
    std::vector<std::string> f;
    std::vector<std::vector<std::string>> g; // one vector per input column
    std::vector<std::string> h;
    std::vector<std::string> warnings;
};

struct Witness {
    int rank = 0;
    std::vector<int> pivot_rows, pivot_cols;
    std::string pivot_minor;
    std::vector<std::string> locus;
};

struct A1Entry {
    int row = 0, input = 0;
    std::string value;
};

struct Step {
    int k = 0, rank = 0;
    std::string mode;
    std::vector<std::string> hbar, hhat;
    std::vector<std::vector<std::string>> mbar, mhat, jbar;
    std::vector<int> row_order;                     // absent at k = 0
    std::vector<std::vector<std::string>> f_mat, r_mat; // absent at k = 0
    std::optional<Witness> witness;                 // absent at k = 0
    std::vector<A1Entry> a1_violations;
};

struct RankOnLocusEntry {
    std::string factor;
    int rank = 0;
};

struct OutcomeRec {
    std::string type; // terminated | iteration-cap | assumption2-violation | assumption1-violation
    std::optional<int> k_star;
    std::optional<int> max_iter;
    std::optional<int> step;
    std::vector<std::string> locus;
    std::optional<int> generic_rank;
    std::vector<RankOnLocusEntry> rank_on_locus;
    std::vector<A1Entry> violations;
};

struct Inverse {
    int k_star = 0;
    std::string mode;
    std::vector<std::string> a;                // affine
    std::vector<std::vector<std::string>> b;   // affine
    std::vector<std::string> u;                // collected
    std::optional<bool> polynomial_in_y;       // collected
};

struct Bounds {
    std::vector<double> box_lo, box_hi;
    std::vector<double> grid;
    std::vector<double> gamma1, gamma2, rho1, rho2;
    double b_norm = 0.0;
    int sample_count = 0;
    int skipped = 0;
    std::uint32_t seed = 0;
    std::string norm = "frobenius";
};

struct Recovery {
    double max_relative_error = 0.0;
    double tol = 0.0;
    bool pass = false;
    int singular_samples = 0;
};

struct TrajectoryInfo {
    double dt = 0.0, t_final = 0.0;
    int samples = 0;
    bool truncated = false;
};

struct Bounding {
    bool checked = false;
    bool inconclusive_outside_box = false;
    int violations = 0;
};

struct CertificateRec {
    bool pass = false;
    double worst_margin = 0.0;
    int samples = 0;
    int order = 0;
    std::vector<std::string> violating_sample; // exact rationals
};

struct Verification {
    std::optional<TrajectoryInfo> trajectory;
    std::optional<Recovery> recovery;
    std::optional<Bounding> input_bounding;
    std::optional<CertificateRec> certificate;
    bool empty() const {
        return !trajectory && !recovery && !input_bounding && !certificate;
    }
};

struct Meta {
    std::string tool = "oista";
    std::string version;
    std::string mode = "auto";
    bool strict = true;
    int max_iter = 0;
    std::size_t max_terms = 0;
};

} // namespace report

struct Report {
    report::System system;
    std::vector<report::Step> steps;
    report::OutcomeRec outcome;
    std::optional<report::Inverse> inverse;
    std::optional<report::Bounds> bounds;
    report::Verification verification;
    std::optional<int> singh_activated_at;
    std::vector<std::string> generic_only_loci;
    report::Meta meta;

    Json to_json() const;
    static Report from_json(const Json& j);
    std::string to_text() const;
};

/// Exit code is a total function of the run outcome.
int exit_code_for(const report::OutcomeRec& outcome);

const char* tool_version();

} // namespace oista
