#include "zpg/smith.hpp"

#include <algorithm>
#include <stdexcept>

namespace zpg {

std::vector<int> SmithForm::column_exponents() const {
    std::vector<int> e(cols, ring.K());
    for (std::size_t t = 0; t < pivots.size(); ++t) e[t] = pivots[t];
    return e;
}

namespace {

void swap_rows(ModMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(ModMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows; ++i) std::swap(m(i, a), m(i, b));
}

// row_dst += f * row_src
void row_axpy(ModMatrix& m, std::size_t dst, std::size_t src, i64 f, const Zpk& R) {
    if (f == 0) return;
    for (std::size_t j = 0; j < m.cols; ++j)
        if (m(src, j) != 0) m(dst, j) = R.add(m(dst, j), R.mul(f, m(src, j)));
}

// col_dst += f * col_src
void col_axpy(ModMatrix& m, std::size_t dst, std::size_t src, i64 f, const Zpk& R) {
    if (f == 0) return;
    for (std::size_t i = 0; i < m.rows; ++i)
        if (m(i, src) != 0) m(i, dst) = R.add(m(i, dst), R.mul(f, m(i, src)));
}

}  // namespace

SmithForm smith(const ModMatrix& input, const Zpk& R, SmithOptions opts) {
    SmithForm out;
    out.ring = R;
    out.rows = input.rows;
    out.cols = input.cols;
    ModMatrix M = reduce_matrix(input, R);
    const bool rt = opts.row_transforms;
    const bool ct = opts.column_transforms;
    if (rt) {
        out.U = ModMatrix::identity(M.rows);
        out.Uinv = ModMatrix::identity(M.rows);
    }
    if (ct) {
        out.V = ModMatrix::identity(M.cols);
        out.Vinv = ModMatrix::identity(M.cols);
    }
    const std::size_t lim = std::min(M.rows, M.cols);
    for (std::size_t t = 0; t < lim; ++t) {
        int best = R.K();
        std::size_t br = 0, bc = 0;
        for (std::size_t i = t; i < M.rows && best > 0; ++i)
            for (std::size_t j = t; j < M.cols; ++j) {
                i64 x = M(i, j);
                if (x == 0) continue;
                int v = R.val(x);
                if (v < best) {
                    best = v;
                    br = i;
                    bc = j;
                    if (v == 0) break;
                }
            }
        if (best == R.K()) break;

        swap_rows(M, t, br);
        swap_cols(M, t, bc);
        if (rt) {
            swap_rows(out.U, t, br);
            swap_cols(out.Uinv, t, br);
        }
        if (ct) {
            swap_cols(out.V, t, bc);
            swap_rows(out.Vinv, t, bc);
        }

        const i64 pv = R.pow_p(best);
        const i64 unit = M(t, t) / pv;
        const i64 uinv = R.inv(unit);
        for (std::size_t j = 0; j < M.cols; ++j) M(t, j) = R.mul(M(t, j), uinv);
        if (rt) {
            for (std::size_t j = 0; j < out.U.cols; ++j) out.U(t, j) = R.mul(out.U(t, j), uinv);
            for (std::size_t i = 0; i < out.Uinv.rows; ++i) out.Uinv(i, t) = R.mul(out.Uinv(i, t), unit);
        }

        for (std::size_t i = t + 1; i < M.rows; ++i) {
            if (M(i, t) == 0) continue;
            i64 f = M(i, t) / pv;
            row_axpy(M, i, t, R.neg(f), R);
            if (rt) {
                row_axpy(out.U, i, t, R.neg(f), R);
                col_axpy(out.Uinv, t, i, f, R);
            }
        }
        for (std::size_t j = t + 1; j < M.cols; ++j) {
            if (M(t, j) == 0) continue;
            i64 f = M(t, j) / pv;
            col_axpy(M, j, t, R.neg(f), R);
            if (ct) {
                col_axpy(out.V, j, t, R.neg(f), R);
                row_axpy(out.Vinv, t, j, f, R);
            }
        }
        out.pivots.push_back(best);
    }
    return out;
}

std::optional<std::vector<i64>> solve_left(const ModMatrix& M, const std::vector<i64>& v, const Zpk& R) {
    if (v.size() != M.cols) throw std::invalid_argument("solve_left: vector length mismatch");
    SmithForm sf = smith(M, R, {true, true});
    std::vector<i64> y(M.cols, 0);
    for (std::size_t j = 0; j < M.cols; ++j) y[j] = R.reduce(v[j]);
    if (M.cols > 0) y = vec_mat(y, sf.V, R);
    std::vector<i64> z(M.rows, 0);
    for (std::size_t t = 0; t < sf.rank(); ++t) {
        if (R.val(y[t]) < sf.pivots[t]) return std::nullopt;
        z[t] = y[t] / R.pow_p(sf.pivots[t]);
    }
    for (std::size_t j = sf.rank(); j < M.cols; ++j)
        if (y[j] != 0) return std::nullopt;
    if (M.rows == 0) return z;
    return vec_mat(z, sf.U, R);
}

int cokernel_log_order(const ModMatrix& M, const Zpk& R) {
    SmithForm sf = smith(M, R);
    int s = 0;
    for (int e : sf.column_exponents()) s += e;
    return s;
}

std::vector<int> finite_kernel(i64 p, const std::vector<int>& dom, const std::vector<int>& tgt,
                               const std::vector<std::vector<i64>>& phi) {
    const std::size_t I = dom.size();
    const std::size_t J = tgt.size();
    if (phi.size() != I) throw std::invalid_argument("finite_kernel: row count mismatch");
    int E = 1;
    for (int e : dom) E = std::max(E, e);
    for (int f : tgt) E = std::max(E, f);
    Zpk R(p, E);

    // x in ker  <=>  x * phi' = 0 mod p^E with column j scaled by p^{E - f_j}
    ModMatrix scaled(I, J);
    for (std::size_t i = 0; i < I; ++i) {
        if (phi[i].size() != J) throw std::invalid_argument("finite_kernel: row length mismatch");
        for (std::size_t j = 0; j < J; ++j) {
            i64 x = R.mul(R.reduce(phi[i][j]), R.pow_p(E - tgt[j]));
            if (R.mul(x, R.pow_p(dom[i])) != 0)
                throw std::logic_error("finite_kernel: map is not well defined on the domain");
            scaled(i, j) = x;
        }
    }
    if (I == 0) return {};
    SmithForm sf = smith(scaled, R, {true, false});

    // kernel lattice L = { z U : z_t in p^{c_t} } with c_t = E - v_t on pivot rows
    std::vector<int> c(I, 0);
    for (std::size_t t = 0; t < sf.rank(); ++t) c[t] = E - sf.pivots[t];

    ModMatrix rel(0, I);
    for (std::size_t i = 0; i < I; ++i) {
        std::vector<i64> z(I, 0);
        for (std::size_t t = 0; t < I; ++t) {
            i64 zt = R.mul(sf.Uinv(i, t), R.pow_p(dom[i]));
            if (R.val(zt) < c[t]) throw std::logic_error("finite_kernel: domain relation outside kernel");
            z[t] = c[t] >= E ? 0 : zt / R.pow_p(c[t]);
        }
        rel.append_row(z);
    }
    for (std::size_t t = 0; t < I; ++t) {
        if (c[t] == 0) continue;
        std::vector<i64> z(I, 0);
        z[t] = R.pow_p(E - c[t]);
        rel.append_row(z);
    }
    std::vector<int> out;
    for (int e : smith(rel, R).column_exponents())
        if (e > 0) out.push_back(e);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace zpg
