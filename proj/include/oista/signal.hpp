#pragma once

#include "oista/polynomial.hpp"

#include <memory>
#include <vector>

namespace oista {

/// Input signal with one polynomial in t per channel. Smooth to every order;
/// derivatives are formal and therefore exact.
class InputSignal {
public:
    InputSignal(std::shared_ptr<const SymbolRegistry> registry,
                std::vector<Polynomial> channels);

    int channels() const { return static_cast<int>(chan_.size()); }

    /// Value of u_i^(order) at time t (channel 1-based).
    double value(int channel, int order, double t) const;
    Rational value_exact(int channel, int order, const Rational& t) const;

    template <class F>
    F value_fp(int channel, int order, F t) const {
        const Polynomial& p = deriv(channel, order);
        std::vector<F> pt(reg_->time().id + 1, F(0));
        pt[reg_->time().id] = t;
        return p.evaluate_fp(pt);
    }

    const Polynomial& channel(int i) const { return chan_[i - 1]; }

private:
    std::shared_ptr<const SymbolRegistry> reg_;
    std::vector<Polynomial> chan_;
    // derivatives_[order][channel], grown on demand
    mutable std::vector<std::vector<Polynomial>> derivs_;
    const Polynomial& deriv(int channel, int order) const;
};

} // namespace oista
