#include "oista/sampling.hpp"

#include "oista/error.hpp"

namespace oista {

namespace {
std::uint32_t nth_prime(int n) {
    static const std::uint32_t primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                           37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                                           83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
    if (n < 0 || n >= static_cast<int>(std::size(primes)))
        throw ContractError("sampling dimension too large");
    return primes[n];
}

Rational radical_inverse(std::uint64_t i, std::uint32_t base) {
    mpz_class num(0), den(1);
    while (i > 0) {
        num = num * base + static_cast<unsigned long>(i % base);
        den *= base;
        i /= base;
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}
} // namespace

HaltonSequence::HaltonSequence(int dims, std::uint32_t seed) : dims_(dims), index_(seed) {
    if (dims < 0) throw ContractError("negative sampling dimension");
    if (index_ == 0) index_ = 1; // index 0 maps every coordinate to 0
    bases_.reserve(dims);
    for (int d = 0; d < dims; ++d) bases_.push_back(nth_prime(d));
}

std::vector<Rational> HaltonSequence::next() {
    std::vector<Rational> out(dims_);
    for (int d = 0; d < dims_; ++d) out[d] = radical_inverse(index_, bases_[d]);
    ++index_;
    return out;
}

std::vector<double> HaltonSequence::next_double() {
    std::vector<double> out(dims_);
    for (int d = 0; d < dims_; ++d) out[d] = radical_inverse(index_, bases_[d]).get_d();
    ++index_;
    return out;
}

} // namespace oista
