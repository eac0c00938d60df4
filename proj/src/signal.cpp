#include "oista/signal.hpp"

#include "oista/error.hpp"

namespace oista {

InputSignal::InputSignal(std::shared_ptr<const SymbolRegistry> registry,
                         std::vector<Polynomial> channels)
    : reg_(std::move(registry)), chan_(std::move(channels)) {
    std::uint32_t t = reg_->time().id;
    for (const auto& c : chan_)
        for (std::uint32_t id : c.symbols())
            if (id != t) throw ContractError("input signal may depend on t only");
    derivs_.push_back(chan_);
}

const Polynomial& InputSignal::deriv(int channel, int order) const {
    if (channel < 1 || channel > channels()) throw ContractError("signal channel out of range");
    while (static_cast<int>(derivs_.size()) <= order) {
        std::vector<Polynomial> next;
        next.reserve(chan_.size());
        for (const auto& p : derivs_.back()) next.push_back(p.differentiate(reg_->time()));
        derivs_.push_back(std::move(next));
    }
    return derivs_[order][channel - 1];
}

double InputSignal::value(int channel, int order, double t) const {
    const Polynomial& p = deriv(channel, order);
    std::vector<double> pt(reg_->time().id + 1, 0.0);
    pt[reg_->time().id] = t;
    return p.evaluate_double(pt);
}

Rational InputSignal::value_exact(int channel, int order, const Rational& t) const {
    const Polynomial& p = deriv(channel, order);
    std::vector<Rational> pt(reg_->time().id + 1, Rational(0));
    pt[reg_->time().id] = t;
    return p.evaluate(pt);
}

} // namespace oista
