#include "oista/matrix.hpp"

namespace oista {

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = RationalFn::constant(Rational(1));
    return m;
}

SymMatrix SymMatrix::operator*(const SymMatrix& o) const {
    if (cols_ != o.rows_) throw ContractError("matrix product shape mismatch");
    SymMatrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            RationalFn acc;
            for (int k = 0; k < cols_; ++k) {
                if (at(i, k).is_zero() || o.at(k, j).is_zero()) continue;
                acc += at(i, k) * o.at(k, j);
            }
            out.at(i, j) = std::move(acc);
        }
    return out;
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ContractError("matrix sum shape mismatch");
    SymMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j) + o.at(i, j);
    return out;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ContractError("matrix diff shape mismatch");
    SymMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j) - o.at(i, j);
    return out;
}

std::vector<RationalFn> SymMatrix::apply(const std::vector<RationalFn>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw ContractError("matrix apply shape mismatch");
    std::vector<RationalFn> out(rows_);
    for (int i = 0; i < rows_; ++i) {
        RationalFn acc;
        for (int k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero() || v[k].is_zero()) continue;
            acc += at(i, k) * v[k];
        }
        out[i] = std::move(acc);
    }
    return out;
}

SymMatrix SymMatrix::vstack(const SymMatrix& top, const SymMatrix& bottom) {
    if (top.rows_ == 0) return bottom;
    if (bottom.rows_ == 0) return top;
    if (top.cols_ != bottom.cols_) throw ContractError("vstack width mismatch");
    SymMatrix out(top.rows_ + bottom.rows_, top.cols_);
    for (int i = 0; i < top.rows_; ++i)
        for (int j = 0; j < top.cols_; ++j) out.at(i, j) = top.at(i, j);
    for (int i = 0; i < bottom.rows_; ++i)
        for (int j = 0; j < top.cols_; ++j) out.at(top.rows_ + i, j) = bottom.at(i, j);
    return out;
}

SymMatrix SymMatrix::select_rows(const std::vector<int>& rows) const {
    SymMatrix out(static_cast<int>(rows.size()), cols_);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < cols_; ++j) out.at(static_cast<int>(i), j) = at(rows[i], j);
    return out;
}

SymMatrix SymMatrix::select_cols(const std::vector<int>& cols) const {
    SymMatrix out(rows_, static_cast<int>(cols.size()));
    for (int i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out.at(i, static_cast<int>(j)) = at(i, cols[j]);
    return out;
}

SymMatrix SymMatrix::block(int r0, int c0, int nr, int nc) const {
    SymMatrix out(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) out.at(i, j) = at(r0 + i, c0 + j);
    return out;
}

RationalFn SymMatrix::determinant() const {
    if (rows_ != cols_) throw ContractError("determinant of non-square matrix");
    int n = rows_;
    if (n == 0) return RationalFn::constant(Rational(1));
    if (n == 1) return at(0, 0);
    if (n == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    RationalFn acc;
    for (int j = 0; j < n; ++j) {
        if (at(0, j).is_zero()) continue;
        SymMatrix minor(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = at(r, c);
            }
        }
        RationalFn term = at(0, j) * minor.determinant();
        if (j % 2 == 1) term = -term;
        acc += term;
    }
    return acc;
}

SymMatrix SymMatrix::adjugate_inverse() const {
    if (rows_ != cols_) throw ContractError("inverse of non-square matrix");
    int n = rows_;
    RationalFn det = determinant();
    if (det.is_zero()) throw SingularityError("matrix is singular over the function field");
    SymMatrix inv(n, n);
    if (n == 0) return inv;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            SymMatrix minor(n - 1, n - 1);
            int rr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                int cc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc++) = at(r, c);
                }
                ++rr;
            }
            RationalFn cof = minor.determinant();
            if ((i + j) % 2 == 1) cof = -cof;
            inv.at(j, i) = cof / det; // adjugate transposes the cofactor grid
        }
    }
    return inv;
}

bool SymMatrix::equals(const SymMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (!at(i, j).equals(o.at(i, j))) return false;
    return true;
}

std::string SymMatrix::to_string(const SymbolRegistry& reg) const {
    std::string out = "[";
    for (int i = 0; i < rows_; ++i) {
        if (i) out += ", ";
        out += "[";
        for (int j = 0; j < cols_; ++j) {
            if (j) out += ", ";
            out += at(i, j).to_string(reg);
        }
        out += "]";
    }
    out += "]";
    return out;
}

RankWitness generic_rank(const SymMatrix& m) {
    SymMatrix work = m;
    int R = m.rows(), C = m.cols();
    std::vector<bool> used_row(R, false), used_col(C, false);
    RankWitness w;
    for (;;) {
        int pr = -1, pc = -1;
        for (int r = 0; r < R && pr < 0; ++r) {
            if (used_row[r]) continue;
            for (int c = 0; c < C; ++c) {
                if (used_col[c]) continue;
                if (!work.at(r, c).is_zero()) {
                    pr = r;
                    pc = c;
                    break;
                }
            }
        }
        if (pr < 0) break;
        w.pivot_rows.push_back(pr);
        w.pivot_cols.push_back(pc);
        used_row[pr] = true;
        used_col[pc] = true;
        for (int r = 0; r < R; ++r) {
            if (used_row[r] || work.at(r, pc).is_zero()) continue;
            RationalFn factor = work.at(r, pc) / work.at(pr, pc);
            for (int c = 0; c < C; ++c) {
                if (used_col[c] && c != pc) continue;
                if (work.at(pr, c).is_zero()) continue;
                work.at(r, c) -= factor * work.at(pr, c);
            }
        }
    }
    w.rank = static_cast<int>(w.pivot_rows.size());
    RationalFn det = m.select_rows(w.pivot_rows).select_cols(w.pivot_cols).determinant();
    w.pivot_minor = RationalFn(det).num();
    if (!w.pivot_minor.is_constant()) w.locus = squarefree_factors(w.pivot_minor);
    return w;
}

SymMatrix solve_annihilator(const SymMatrix& jbar, const SymMatrix& jtilde) {
    if (jbar.cols() != jtilde.cols()) throw ContractError("annihilator width mismatch");
    RankWitness w = generic_rank(jbar);
    if (w.rank != jbar.rows())
        throw ContractError("solve_annihilator requires full row rank");
    SymMatrix f(jtilde.rows(), jbar.rows());
    if (jbar.rows() > 0 && jtilde.rows() > 0) {
        SymMatrix pivot_inv = jbar.select_cols(w.pivot_cols).adjugate_inverse();
        SymMatrix rhs = jtilde.select_cols(w.pivot_cols);
        f = rhs * pivot_inv;
        for (int i = 0; i < f.rows(); ++i)
            for (int j = 0; j < f.cols(); ++j) f.at(i, j) = -f.at(i, j);
    }
    // postcondition F*jbar + jtilde == 0 re-checked on every call; a nonzero
    // residual on a non-pivot column means jtilde leaves jbar's row space
    SymMatrix residual = jtilde.rows() > 0 && jbar.rows() > 0 ? f * jbar + jtilde : jtilde;
    for (int i = 0; i < residual.rows(); ++i)
        for (int j = 0; j < residual.cols(); ++j)
            if (!residual.at(i, j).is_zero())
                throw AnnihilatorInfeasibleError("no annihilator: row " + std::to_string(i) +
                                                 " is not in the span of jbar's rows");
    return f;
}

} // namespace oista
