#include "oista/verify.hpp"

#include "oista/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oista {

namespace {

template <class F>
F euclid_norm(const std::vector<F>& v) {
    F acc = F(0);
    for (F x : v) acc += x * x;
    return std::sqrt(acc);
}

} // namespace

Trajectory integrate(const AffineSystem& sys, const std::vector<double>& x0,
                     const InputSignal& u, double t_final, double dt, DerivativeChain& chain,
                     int y_order, double guard, int ref_refine) {
    if (dt <= 0.0 || t_final < dt) throw ContractError("integrate requires dt > 0, t_final >= dt");
    if (static_cast<int>(x0.size()) != sys.n) throw ContractError("x0 dimension mismatch");
    if (u.channels() != sys.m) throw ContractError("input channel count mismatch");
    const auto& reg = *sys.registry;
    chain.extend(y_order);
    const int refine = std::max(ref_refine, 1);

    std::vector<Real> eval_pt(sys.n);
    auto xdot = [&](const std::vector<Real>& x, Real t, std::vector<Real>& out) {
        for (int i = 0; i < sys.n; ++i) eval_pt[i] = x[i];
        std::vector<Real> uval(sys.m);
        for (int i = 1; i <= sys.m; ++i) uval[i - 1] = u.value_fp<Real>(i, 0, t);
        for (int i = 0; i < sys.n; ++i) {
            Real acc = sys.f[i].evaluate_fp(eval_pt);
            for (int j = 0; j < sys.m; ++j) {
                if (sys.g[i][j].is_zero()) continue;
                acc += sys.g[i][j].evaluate_fp(eval_pt) * uval[j];
            }
            out[i] = acc;
        }
    };
    std::vector<Real> k1(sys.n), k2(sys.n), k3(sys.n), k4(sys.n), tmp(sys.n);
    auto rk4_step = [&](std::vector<Real>& x, Real t, Real h) {
        xdot(x, t, k1);
        for (int i = 0; i < sys.n; ++i) tmp[i] = x[i] + 0.5L * h * k1[i];
        xdot(tmp, t + 0.5L * h, k2);
        for (int i = 0; i < sys.n; ++i) tmp[i] = x[i] + 0.5L * h * k2[i];
        xdot(tmp, t + 0.5L * h, k3);
        for (int i = 0; i < sys.n; ++i) tmp[i] = x[i] + h * k3[i];
        xdot(tmp, t + h, k4);
        for (int i = 0; i < sys.n; ++i) x[i] += h / 6.0L * (k1[i] + 2.0L * (k2[i] + k3[i]) + k4[i]);
    };
    auto too_large = [&](const std::vector<Real>& v) {
        for (Real e : v)
            if (std::abs(e) > static_cast<Real>(guard)) return true;
        return false;
    };

    Trajectory traj;
    traj.dt = dt;
    traj.y_order = y_order;
    long steps = std::lround(t_final / dt);
    std::vector<Real> x(x0.begin(), x0.end()), xref(x0.begin(), x0.end());
    std::vector<std::vector<Real>> ref_states;
    traj.times.push_back(0.0);
    traj.x.push_back(x);
    ref_states.push_back(xref);
    const Real hdt = static_cast<Real>(dt);
    for (long s = 0; s < steps; ++s) {
        Real t = static_cast<Real>(s) * hdt;
        rk4_step(x, t, hdt);
        for (int sub = 0; sub < refine; ++sub)
            rk4_step(xref, t + static_cast<Real>(sub) * hdt / refine, hdt / refine);
        double t_next = static_cast<double>(s + 1) * dt;
        if (too_large(x) || too_large(xref)) {
            traj.truncated = true;
            traj.blowup_time = t_next;
            break;
        }
        traj.times.push_back(t_next);
        traj.x.push_back(x);
        ref_states.push_back(xref);
    }

    // exact formal input derivatives sampled along the run, then the
    // output-derivative stack through the H-chain at the reference states
    const int u_orders = std::max(y_order, 1);
    std::vector<Real> pt(reg.id_bound(), Real(0));
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        Real ts = static_cast<Real>(traj.times[s]);
        std::vector<std::vector<Real>> ud(u_orders, std::vector<Real>(sys.m, Real(0)));
        for (int order = 0; order < u_orders; ++order)
            for (int i = 1; i <= sys.m; ++i) ud[order][i - 1] = u.value_fp<Real>(i, order, ts);
        traj.u.push_back(ud[0]);

        for (int i = 0; i < sys.n; ++i) pt[i] = ref_states[s][i];
        for (int order = 0; order < u_orders; ++order)
            for (int i = 1; i <= sys.m; ++i)
                pt[reg.input_deriv(order, i).id] = ud[order][i - 1];
        std::vector<std::vector<Real>> yd(y_order + 1, std::vector<Real>(sys.p, Real(0)));
        for (int d = 0; d <= y_order; ++d)
            for (int c = 0; c < sys.p; ++c) yd[d][c] = chain.at(d)[c].evaluate_fp(pt);
        traj.y_derivs.push_back(std::move(yd));
        traj.u_derivs.push_back(std::move(ud));
    }
    return traj;
}

RecoveryResult recover_input(const Trajectory& traj, const InverseMap& inv,
                             const AffineSystem& sys) {
    if (traj.y_order < inv.k_star)
        throw ContractError("trajectory lacks output derivatives up to k*");
    const auto& reg = *sys.registry;
    RecoveryResult res;
    std::vector<Real> pt(reg.id_bound(), Real(0));
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        for (int i = 0; i < sys.n; ++i) pt[i] = traj.x[s][i];
        std::vector<Real> ystack;
        ystack.reserve(static_cast<std::size_t>(sys.p) * (inv.k_star + 1));
        for (int d = 0; d <= inv.k_star; ++d)
            for (int c = 0; c < sys.p; ++c) {
                pt[reg.output_deriv(d, c + 1).id] = traj.y_derivs[s][d][c];
                ystack.push_back(traj.y_derivs[s][d][c]);
            }
        std::vector<Real> urec(sys.m, Real(0));
        bool singular = false;
        if (inv.mode == StepMode::Affine) {
            for (int i = 0; i < sys.m; ++i) {
                Real acc = inv.a[i].evaluate_fp(pt);
                for (int c = 0; c < inv.b.cols(); ++c) {
                    if (inv.b.at(i, c).is_zero()) continue;
                    acc += inv.b.at(i, c).evaluate_fp(pt) * ystack[c];
                }
                urec[i] = acc;
            }
        } else {
            for (int i = 0; i < sys.m; ++i) {
                if (std::abs(inv.u[i].den().evaluate_fp(pt)) < 1e-12L) {
                    singular = true;
                    break;
                }
                urec[i] = inv.u[i].evaluate_fp(pt);
            }
        }
        if (singular) {
            ++res.singular_samples;
            res.u_recovered.push_back(
                std::vector<Real>(sys.m, std::numeric_limits<Real>::quiet_NaN()));
            continue;
        }
        res.u_recovered.push_back(urec);
        std::vector<Real> diff(sys.m);
        for (int i = 0; i < sys.m; ++i) diff[i] = urec[i] - traj.u[s][i];
        double rel = static_cast<double>(euclid_norm(diff) / (1.0L + euclid_norm(traj.u[s])));
        res.max_relative_error = std::max(res.max_relative_error, rel);
    }
    return res;
}

BoundingReport check_input_bounding(const Trajectory& traj, const BoundEstimate& bounds) {
    BoundingReport rep;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        std::vector<double> xs = traj.state(s);
        if (!bounds.box.contains(xs)) {
            rep.inconclusive_outside_box = true;
            if (rep.first_outside_sample < 0) rep.first_outside_sample = static_cast<int>(s);
            continue;
        }
        std::vector<double> ystack, us;
        for (const auto& level : traj.y_derivs[s])
            for (Real v : level) ystack.push_back(static_cast<double>(v));
        for (Real v : traj.u[s]) us.push_back(static_cast<double>(v));
        double lhs = euclid_norm(us);
        // rho2 has the exact closed form, so it is not clamped at the grid end
        double rhs = bounds.rho1.eval_interp(euclid_norm(xs)) +
                     bounds.rho2_exact(euclid_norm(ystack));
        if (lhs > rhs + 1e-9 * (1.0 + rhs))
            rep.violations.push_back(BoundingViolation{static_cast<int>(s), lhs, rhs});
    }
    return rep;
}

int surd_sign(const Rational& r, const Rational& a_in, const Rational& S_in, const Rational& b_in,
              const Rational& T_in) {
    Rational a = a_in, S = S_in, b = b_in, T = T_in;
    if (sgn(S) < 0 || sgn(T) < 0) throw ContractError("surd_sign: negative radicand");
    if (a == 0 || S == 0) {
        a = b;
        S = T;
        b = 0;
        T = 0;
    }
    if (b == 0 || T == 0) {
        // sign of r + a*sqrt(S)
        if (a == 0 || S == 0) return sgn(r);
        if (r == 0) return sgn(a);
        if (sgn(r) == sgn(a)) return sgn(r);
        Rational lhs = r * r, rhs = a * a * S;
        if (lhs == rhs) return 0;
        return lhs > rhs ? sgn(r) : sgn(a);
    }
    // sign of X = a*sqrt(S) + b*sqrt(T)
    int sx;
    if (sgn(a) == sgn(b)) {
        sx = sgn(a);
    } else {
        Rational as = a * a * S, bt = b * b * T;
        sx = (as == bt) ? 0 : (as > bt ? sgn(a) : sgn(b));
    }
    if (r == 0) return sx;
    if (sx == 0) return sgn(r);
    if (sgn(r) == sx) return sgn(r);
    // compare r^2 against X^2 = a^2 S + b^2 T + 2ab sqrt(ST)
    int d = surd_sign(r * r - a * a * S - b * b * T, Rational(-2) * a * b, S * T, Rational(0),
                      Rational(0));
    if (d == 0) return 0;
    return d > 0 ? sgn(r) : sx;
}

namespace {

std::vector<Rational> scale_to_box(const std::vector<Rational>& unit, const Box& box,
                                   int extra_dims) {
    // state coordinates use the box bounds; input-derivative coordinates use
    // the widest state interval
    std::vector<Rational> out(unit.size());
    Rational wlo(0), whi(0);
    for (std::size_t i = 0; i < box.lo.size(); ++i) {
        Rational lo(box.lo[i]), hi(box.hi[i]);
        if (i == 0 || lo < wlo) wlo = lo;
        if (i == 0 || hi > whi) whi = hi;
        if (i < unit.size()) out[i] = lo + (hi - lo) * unit[i];
    }
    for (std::size_t i = box.lo.size(); i < unit.size(); ++i)
        out[i] = wlo + (whi - wlo) * unit[i];
    (void)extra_dims;
    return out;
}

} // namespace

void validate_certificate(const Certificate& cert, const AffineSystem& sys, const Box& box,
                          int samples) {
    const auto& reg = *sys.registry;
    if (sgn(cert.alpha_coeff) <= 0) throw ContractError("alpha coefficient must be positive");
    if (sgn(cert.chi_coeff) < 0) throw ContractError("chi coefficient must be nonnegative");
    if (cert.alpha_pow < 1 || cert.chi_pow < 1) throw ContractError("comparison powers must be >= 1");
    if (cert.order < 0) throw ContractError("certificate order must be >= 0");
    for (std::uint32_t id : cert.v.symbols())
        if (reg.sym_of(id).kind != SymKind::State)
            throw ContractError("V must depend on states only");
    std::vector<Rational> zero(reg.id_bound(), Rational(0));
    if (cert.v.evaluate(zero) != 0) throw ContractError("V(0) != 0");
    if (static_cast<int>(box.lo.size()) != sys.n) throw ContractError("box dimension mismatch");

    HaltonSequence seq(sys.n, 7);
    for (int s = 0; s < samples; ++s) {
        auto unit = seq.next();
        auto pt = scale_to_box(unit, box, 0);
        std::vector<Rational> full = zero;
        bool at_origin = true;
        for (int i = 0; i < sys.n; ++i) {
            full[i] = pt[i];
            if (pt[i] != 0) at_origin = false;
        }
        if (!at_origin && sgn(cert.v.evaluate(full)) <= 0)
            throw ContractError("V not positive at a sampled interior point");
        // push one coordinate to a face for the boundary growth spot check
        int face = s % sys.n;
        full[face] = (s / sys.n) % 2 == 0 ? Rational(box.hi[face]) : Rational(box.lo[face]);
        at_origin = true;
        for (int i = 0; i < sys.n; ++i)
            if (full[i] != 0) at_origin = false;
        if (!at_origin && sgn(cert.v.evaluate(full)) <= 0)
            throw ContractError("V not positive at a sampled boundary point");
    }
}

CertificateReport check_certificate(const AffineSystem& sys, const Certificate& cert,
                                    const Box& box, int samples, DerivativeChain& chain,
                                    std::uint32_t seed) {
    const auto& reg = *sys.registry;
    chain.extend(cert.order);
    const GeneralSystem& gen = chain.system();

    std::vector<Polynomial> dv(sys.n);
    for (int i = 1; i <= sys.n; ++i) dv[i - 1] = cert.v.differentiate(reg.state(i));

    const int dims = sys.n + cert.order * sys.m;
    HaltonSequence seq(dims, seed);
    CertificateReport rep;
    rep.samples = samples;
    bool first = true;

    std::vector<Rational> full(reg.id_bound(), Rational(0));
    for (int s = -1; s < samples; ++s) {
        // sample -1 is the origin, where both sides vanish
        std::vector<Rational> pt(dims, Rational(0));
        if (s >= 0) pt = scale_to_box(seq.next(), box, dims - sys.n);
        std::fill(full.begin(), full.end(), Rational(0));
        for (int i = 0; i < sys.n; ++i) full[i] = pt[i];
        int cursor = sys.n;
        for (int order = 0; order < cert.order; ++order)
            for (int i = 1; i <= sys.m; ++i) full[reg.input_deriv(order, i).id] = pt[cursor++];

        Rational lhs(0);
        for (int i = 0; i < sys.n; ++i) {
            if (dv[i].is_zero()) continue;
            lhs += dv[i].evaluate(full) * gen.f[i].evaluate(full);
        }
        Rational state_sq(0);
        for (int i = 0; i < sys.n; ++i) state_sq += full[i] * full[i];
        Rational stack_sq(0);
        for (int d = 0; d <= cert.order; ++d)
            for (int c = 0; c < sys.p; ++c) {
                Rational v = chain.at(d)[c].evaluate(full);
                stack_sq += v * v;
            }

        // margin = chi(|stack|) - alpha(|x|) - lhs, decomposed into a rational
        // part and up to two square-root terms
        Rational rat = -lhs;
        Rational surd_a(0), rad_a(0), surd_b(0), rad_b(0);
        if (cert.alpha_pow % 2 == 0) {
            rat -= cert.alpha_coeff * pow_rational(state_sq, cert.alpha_pow / 2);
        } else {
            surd_a = -cert.alpha_coeff * pow_rational(state_sq, (cert.alpha_pow - 1) / 2);
            rad_a = state_sq;
        }
        if (cert.chi_coeff != 0) {
            if (cert.chi_pow % 2 == 0) {
                rat += cert.chi_coeff * pow_rational(stack_sq, cert.chi_pow / 2);
            } else {
                surd_b = cert.chi_coeff * pow_rational(stack_sq, (cert.chi_pow - 1) / 2);
                rad_b = stack_sq;
            }
        }
        int sign = surd_sign(rat, surd_a, rad_a, surd_b, rad_b);

        double margin = rat.get_d() + surd_a.get_d() * std::sqrt(rad_a.get_d()) +
                        surd_b.get_d() * std::sqrt(rad_b.get_d());
        if (first || margin < rep.worst_margin) rep.worst_margin = margin;
        first = false;
        if (sign < 0 && !rep.violation) {
            rep.pass = false;
            CertificateSample bad;
            bad.point = pt;
            bad.margin = margin;
            rep.violation = std::move(bad);
        }
    }
    return rep;
}

} // namespace oista
