#pragma once

#include "oista/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace oista {

enum class StepMode { Affine, Singh };

/// One nonzero L_{g_input} entry of Mhat found while differentiating a step.
struct A1Violation {
    int row = 0;   // row of Mhat
    int input = 0; // 1-based input index
    RationalFn value;
};

/// Snapshot after k differentiation rounds. The transform fields (row_order,
/// f_annihilator, r_transform, witness) describe the transition that produced
/// this step and are empty at k = 0; a1_violations holds the nonzero
/// L_g Mhat entries found when this step itself was differentiated.
struct StructureStep {
    int k = 0;
    int rank = 0; // r_k
    StepMode mode = StepMode::Affine;
    SymMatrix mbar; // r_k x p(k+1)
    SymMatrix mhat; // (p - r_k) x p(k+1)
    std::vector<RationalFn> hbar;
    std::vector<RationalFn> hhat;
    SymMatrix jbar; // r_k x m, full row rank
    std::vector<int> row_order;
    SymMatrix f_annihilator;
    SymMatrix r_transform;
    RankWitness witness;
    std::vector<A1Violation> a1_violations;
};

enum class OutcomeKind {
    Terminated,
    IterationCap,
    Assumption2Violation,
    Assumption1Violation,
};

struct RankOnLocus {
    Polynomial factor;
    int rank = 0;
};

struct Outcome {
    OutcomeKind kind = OutcomeKind::IterationCap;
    int k_star = -1;   // Terminated
    int max_iter = 0;  // IterationCap
    int step = -1;     // step being differentiated when a violation fired
    std::vector<Polynomial> locus;          // Assumption2Violation
    int generic_rank = 0;                   // Assumption2Violation
    std::vector<RankOnLocus> rank_on_locus; // where a factor admits exact substitution
    std::vector<A1Violation> violations;    // Assumption1Violation (affine-only mode)
};

struct StructureOptions {
    bool affine_only = false; // halt instead of collecting input-dependent terms
    bool strict = true;       // halt on a nonconstant pivot minor
    int max_iter = 0;         // 0 = default n + p
};

struct StructureReport {
    std::vector<StructureStep> steps;
    Outcome outcome;
    std::optional<int> singh_activated_at;
    /// Nonempty loci stepped over in permissive mode; conclusions then hold
    /// only off their zero sets.
    std::vector<Polynomial> generic_only_loci;
    StructureOptions options;
};

/// Initial step: Mhat = I_p, hhat = h, r_0 = 0.
StructureStep structure_init(const AffineSystem& sys);

/// L_{g_i} Mhat entrywise for every input; empty iff all identically zero.
std::vector<A1Violation> check_assumption1(const StructureStep& step, const AffineSystem& sys);

/// Runs the full differentiate/row-reduce iteration until the input
/// coefficient block reaches rank m, an assumption fails, or the cap hits.
StructureReport structure_run(const AffineSystem& sys, DerivativeChain& chain,
                              const StructureOptions& options = {});

/// Checks the step's defining relation exactly: substituting H_0..H_k for the
/// output-derivative symbols in (Mbar; Mhat) y^k must reproduce
/// (hbar; hhat) + (Jbar; 0) u0. Returns false and the first offending row on
/// failure.
bool verify_defining_relation(const StructureStep& step, const AffineSystem& sys,
                              DerivativeChain& chain, std::string* detail = nullptr);

} // namespace oista
