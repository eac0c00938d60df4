#pragma once

#include "oista/rational.hpp"

#include <cstdint>
#include <vector>

namespace oista {

/// Deterministic low-discrepancy point set (Halton, one prime base per
/// dimension). The seed offsets the index so distinct sampling jobs draw
/// distinct but reproducible points. Coordinates are exact rationals in
/// (0, 1), so points can be used for exact evaluation as well.
class HaltonSequence {
public:
    HaltonSequence(int dims, std::uint32_t seed = 1);

    std::vector<Rational> next();
    std::vector<double> next_double();

    int dims() const { return dims_; }

private:
    int dims_;
    std::uint64_t index_;
    std::vector<std::uint32_t> bases_;
};

} // namespace oista
