#pragma once

#include "oista/rational_fn.hpp"

#include <string>
#include <vector>

namespace oista {

/// Dense matrix of rational functions.
class SymMatrix {
public:
    SymMatrix() = default;
    SymMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw ContractError("negative matrix dimension");
    }
    static SymMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    RationalFn& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const RationalFn& at(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    SymMatrix operator*(const SymMatrix& o) const;
    SymMatrix operator+(const SymMatrix& o) const;
    SymMatrix operator-(const SymMatrix& o) const;

    std::vector<RationalFn> apply(const std::vector<RationalFn>& v) const;

    static SymMatrix vstack(const SymMatrix& top, const SymMatrix& bottom);
    SymMatrix select_rows(const std::vector<int>& rows) const;
    SymMatrix select_cols(const std::vector<int>& cols) const;
    SymMatrix block(int r0, int c0, int nr, int nc) const;

    /// Exact determinant by cofactor expansion (square, small).
    RationalFn determinant() const;
    /// Exact inverse via adjugate over the rational-function field.
    SymMatrix adjugate_inverse() const;

    bool equals(const SymMatrix& o) const;

    /// Row-major "[[a, b], [c, d]]".
    std::string to_string(const SymbolRegistry& reg) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<RationalFn> data_;
};

/// Certificate for the generic (function-field) rank of a matrix.
struct RankWitness {
    int rank = 0;
    std::vector<int> pivot_rows; // in selection order (ascending)
    std::vector<int> pivot_cols; // in selection order
    Polynomial pivot_minor;      // numerator of the rank x rank pivot determinant
    /// Polynomials whose common zero set contains every point where the pivot
    /// minor vanishes; empty when the minor is a nonzero constant.
    std::vector<Polynomial> locus;
};

/// Rank over the rational-function field by exact Gaussian elimination.
/// Pivots are chosen deterministically: lowest row index first, then lowest
/// column index, among entries not identically zero.
RankWitness generic_rank(const SymMatrix& m);

/// Finds F with F*jbar + jtilde == 0 entrywise, given jbar of full row rank.
/// Throws AnnihilatorInfeasibleError when jtilde's rows leave jbar's row space.
SymMatrix solve_annihilator(const SymMatrix& jbar, const SymMatrix& jtilde);

/// Squarefree factor list of a polynomial: monomial variables split off
/// individually, the rest reduced by repeated-factor elimination per variable.
/// Empty for (nonzero) constants.
std::vector<Polynomial> squarefree_factors(const Polynomial& p);

} // namespace oista
