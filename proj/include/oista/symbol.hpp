#pragma once

#include "oista/error.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oista {

enum class SymKind {
    State,       // x_i
    InputDeriv,  // u_{j,i}: j-th time derivative of input i at the evaluation instant
    OutputDeriv, // y_i^(d)
    Time,        // t
};

/// One registered symbol. Identity is the id; kind and indices never change.
struct Sym {
    std::uint32_t id = 0;
    SymKind kind = SymKind::State;
    int index = 0; // component index i (1-based); 1 for Time
    int order = 0; // derivative order (j for inputs, d for outputs); 0 otherwise

    bool operator==(const Sym&) const = default;
};

/// Symbol table for one analysis session.
///
/// Ids follow a fixed layout so the monomial order is a pure function of the
/// system dimensions and state declaration order: states first, then t, then
/// input-derivative symbols, then output-derivative symbols. Derivative
/// orders are capped at kMaxOrder.
class SymbolRegistry {
public:
    static constexpr int kMaxOrder = 64;

    SymbolRegistry(std::vector<std::string> state_names, int num_inputs, int num_outputs);

    int num_states() const { return n_; }
    int num_inputs() const { return m_; }
    int num_outputs() const { return p_; }

    Sym state(int i) const;                 // i in 1..n
    Sym time() const;
    Sym input_deriv(int order, int i) const;  // order >= 0, i in 1..m
    Sym output_deriv(int order, int i) const; // order >= 0, i in 1..p

    std::uint32_t id_bound() const;
    Sym sym_of(std::uint32_t id) const;
    std::string name(std::uint32_t id) const;

    /// Index of a declared state name, or -1.
    int state_index(const std::string& name) const;

private:
    int n_, m_, p_;
    std::vector<std::string> state_names_;
};

} // namespace oista
