#pragma once

#include "oista/inversion.hpp"
#include "oista/signal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace oista {

/// Trajectory numerics run in extended precision so that the roundoff floor
/// of long fixed-step runs stays below the integrator's truncation error.
using Real = long double;

/// Fixed-step simulation record. Output-derivative samples come from the
/// symbolic H-chain evaluated along the trajectory, never from numerical
/// differentiation of y.
struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<std::vector<Real>> x;        // per sample, n entries
    std::vector<std::vector<Real>> u;        // per sample, m entries
    std::vector<std::vector<std::vector<Real>>> u_derivs; // [sample][order][channel-1]
    std::vector<std::vector<std::vector<Real>>> y_derivs; // [sample][d][component-1]
    int y_order = 0;
    bool truncated = false;
    double blowup_time = 0.0;

    std::vector<double> state(std::size_t sample) const {
        return std::vector<double>(x[sample].begin(), x[sample].end());
    }
};

/// Classical RK4 on xdot = f(x) + G(x) u(t). Halts early (truncated flag)
/// when |x|_inf exceeds the guard.
///
/// The stored x samples advance at the requested dt. The output-derivative
/// samples stand for the measured output signal, so they are evaluated along
/// an internal reference pass at dt/ref_refine; recovery error through the
/// inverse is then integration-limited rather than cancelling identically.
/// ref_refine <= 1 evaluates them at the stored states instead.
Trajectory integrate(const AffineSystem& sys, const std::vector<double>& x0,
                     const InputSignal& u, double t_final, double dt, DerivativeChain& chain,
                     int y_order, double guard = 1e9, int ref_refine = 16);

struct RecoveryResult {
    std::vector<std::vector<Real>> u_recovered;
    double max_relative_error = 0.0;
    int singular_samples = 0; // collected-mode denominators below 1e-12
};

/// Evaluates the inverse on (x(t), y-stack(t)) and compares with the true
/// input: max over samples of |u_rec - u| / (1 + |u|).
RecoveryResult recover_input(const Trajectory& traj, const InverseMap& inv,
                             const AffineSystem& sys);

struct BoundingViolation {
    int sample = 0;
    double lhs = 0.0, rhs = 0.0;
};

struct BoundingReport {
    bool inconclusive_outside_box = false;
    int first_outside_sample = -1;
    std::vector<BoundingViolation> violations;
};

/// Per-sample check of |u(t)| <= rho1(|x(t)|) + rho2(|y-stack(t)|) with
/// interpolated tables. Samples outside the estimation box make the check
/// inconclusive rather than a violation.
BoundingReport check_input_bounding(const Trajectory& traj, const BoundEstimate& bounds);

/// Candidate detectability certificate: V polynomial in x, positive definite
/// on the sampled box, with monomial comparison functions alpha, chi.
struct Certificate {
    Polynomial v;
    Rational alpha_coeff;  // > 0
    std::uint32_t alpha_pow = 2;
    Rational chi_coeff;    // >= 0 (0 disables the gain term)
    std::uint32_t chi_pow = 2;
    int order = 0; // N
};

struct CertificateSample {
    std::vector<Rational> point; // states then u_{0..N-1} components
    double margin = 0.0;
};

struct CertificateReport {
    bool pass = true;
    double worst_margin = 0.0;
    std::optional<CertificateSample> violation;
    int samples = 0;
};

/// Samples the dissipation inequality
///   dV/dx f(x, u0) <= -alpha(|x|) + chi(|(H_0; ...; H_N)|)
/// at exact rational points; comparisons are decided exactly, so a reported
/// violation is reproducible by direct evaluation. Passing is evidence on the
/// box, not proof.
CertificateReport check_certificate(const AffineSystem& sys, const Certificate& cert,
                                    const Box& box, int samples, DerivativeChain& chain,
                                    std::uint32_t seed = 1);

/// Exact sign of r + a*sqrt(S) + b*sqrt(T) for rational inputs, S, T >= 0.
int surd_sign(const Rational& r, const Rational& a, const Rational& S, const Rational& b,
              const Rational& T);

/// Spot checks V(0) = 0, V > 0 at nonzero sampled points, and positivity on
/// the box boundary. Throws ContractError on failure.
void validate_certificate(const Certificate& cert, const AffineSystem& sys, const Box& box,
                          int samples = 256);

} // namespace oista
