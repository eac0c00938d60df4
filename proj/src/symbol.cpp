#include "oista/symbol.hpp"

namespace oista {

SymbolRegistry::SymbolRegistry(std::vector<std::string> state_names, int num_inputs,
                               int num_outputs)
    : n_(static_cast<int>(state_names.size())),
      m_(num_inputs),
      p_(num_outputs),
      state_names_(std::move(state_names)) {
    if (m_ < 0 || p_ < 0) throw ContractError("negative dimension");
}

Sym SymbolRegistry::state(int i) const {
    if (i < 1 || i > n_) throw ContractError("state index out of range");
    return Sym{static_cast<std::uint32_t>(i - 1), SymKind::State, i, 0};
}

Sym SymbolRegistry::time() const {
    return Sym{static_cast<std::uint32_t>(n_), SymKind::Time, 1, 0};
}

Sym SymbolRegistry::input_deriv(int order, int i) const {
    if (i < 1 || i > m_) throw ContractError("input index out of range");
    if (order < 0 || order >= kMaxOrder) throw ContractError("input derivative order out of range");
    std::uint32_t id = static_cast<std::uint32_t>(n_ + 1 + order * m_ + (i - 1));
    return Sym{id, SymKind::InputDeriv, i, order};
}

Sym SymbolRegistry::output_deriv(int order, int i) const {
    if (i < 1 || i > p_) throw ContractError("output index out of range");
    if (order < 0 || order >= kMaxOrder)
        throw ContractError("output derivative order out of range");
    std::uint32_t id =
        static_cast<std::uint32_t>(n_ + 1 + kMaxOrder * m_ + order * p_ + (i - 1));
    return Sym{id, SymKind::OutputDeriv, i, order};
}

std::uint32_t SymbolRegistry::id_bound() const {
    return static_cast<std::uint32_t>(n_ + 1 + kMaxOrder * (m_ + p_));
}

Sym SymbolRegistry::sym_of(std::uint32_t id) const {
    int v = static_cast<int>(id);
    if (v < n_) return Sym{id, SymKind::State, v + 1, 0};
    if (v == n_) return Sym{id, SymKind::Time, 1, 0};
    v -= n_ + 1;
    if (v < kMaxOrder * m_) return Sym{id, SymKind::InputDeriv, v % m_ + 1, v / m_};
    v -= kMaxOrder * m_;
    if (v < kMaxOrder * p_) return Sym{id, SymKind::OutputDeriv, v % p_ + 1, v / p_};
    throw ContractError("symbol id out of range");
}

std::string SymbolRegistry::name(std::uint32_t id) const {
    Sym s = sym_of(id);
    switch (s.kind) {
        case SymKind::State:
            return state_names_[s.index - 1];
        case SymKind::Time:
            return "t";
        case SymKind::InputDeriv: {
            std::string base = "u" + std::to_string(s.index);
            if (s.order == 0) return base;
            if (s.order <= 3) return base + std::string(s.order, '\'');
            return base + "^(" + std::to_string(s.order) + ")";
        }
        case SymKind::OutputDeriv: {
            std::string base = "y" + std::to_string(s.index);
            if (s.order == 0) return base;
            if (s.order <= 3) return base + std::string(s.order, '\'');
            return base + "^(" + std::to_string(s.order) + ")";
        }
    }
    return "?";
}

int SymbolRegistry::state_index(const std::string& name) const {
    for (int i = 0; i < n_; ++i)
        if (state_names_[i] == name) return i + 1;
    return -1;
}

} // namespace oista
