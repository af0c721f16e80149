#include "eqsm/matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace eqsm {

namespace {

long long checked_mul(long long a, long long b) {
    __int128 p = static_cast<__int128>(a) * b;
    if (p > INT64_MAX / 2 || p < INT64_MIN / 2) throw Error("integer overflow in matrix arithmetic");
    return static_cast<long long>(p);
}

}  // namespace

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw Error("IntMatrix: dimension mismatch in product");
    IntMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            long long v = at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) += checked_mul(v, o.at(k, j));
        }
    return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("IntMatrix: dimension mismatch in sum");
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("IntMatrix: dimension mismatch in difference");
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

IntMatrix IntMatrix::scaled(long long c) const {
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = checked_mul(a_[i], c);
    return r;
}

void IntMatrix::set_block(int r0, int c0, const IntMatrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw Error("IntMatrix: block out of range");
    for (int i = 0; i < b.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) at(r0 + i, c0 + j) = b.at(i, j);
}

IntMatrix IntMatrix::block(int r0, int c0, int nr, int nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw Error("IntMatrix: block out of range");
    IntMatrix b(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) b.at(i, j) = at(r0 + i, c0 + j);
    return b;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        if (i) os << "; ";
        for (int j = 0; j < cols_; ++j) {
            if (j) os << " ";
            os << at(i, j);
        }
    }
    os << "]";
    return os.str();
}

namespace {

// Row/column operations applied in lockstep to the transform pair so that
// u * u_inv stays the identity throughout.
struct SnfState {
    IntMatrix d, u, u_inv, v, v_inv;

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < d.cols(); ++c) std::swap(d.at(i, c), d.at(j, c));
        for (int c = 0; c < u.cols(); ++c) std::swap(u.at(i, c), u.at(j, c));
        for (int r = 0; r < u_inv.rows(); ++r) std::swap(u_inv.at(r, i), u_inv.at(r, j));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < d.rows(); ++r) std::swap(d.at(r, i), d.at(r, j));
        for (int r = 0; r < v.rows(); ++r) std::swap(v.at(r, i), v.at(r, j));
        for (int c = 0; c < v_inv.cols(); ++c) std::swap(v_inv.at(i, c), v_inv.at(j, c));
    }
    // row i -= q * row j
    void add_row(int i, int j, long long q) {
        if (q == 0) return;
        for (int c = 0; c < d.cols(); ++c) d.at(i, c) -= checked_mul(q, d.at(j, c));
        for (int c = 0; c < u.cols(); ++c) u.at(i, c) -= checked_mul(q, u.at(j, c));
        for (int r = 0; r < u_inv.rows(); ++r) u_inv.at(r, j) += checked_mul(q, u_inv.at(r, i));
    }
    // col i -= q * col j
    void add_col(int i, int j, long long q) {
        if (q == 0) return;
        for (int r = 0; r < d.rows(); ++r) d.at(r, i) -= checked_mul(q, d.at(r, j));
        for (int r = 0; r < v.rows(); ++r) v.at(r, i) -= checked_mul(q, v.at(r, j));
        for (int c = 0; c < v_inv.cols(); ++c) v_inv.at(j, c) += checked_mul(q, v_inv.at(i, c));
    }
    void negate_row(int i) {
        for (int c = 0; c < d.cols(); ++c) d.at(i, c) = -d.at(i, c);
        for (int c = 0; c < u.cols(); ++c) u.at(i, c) = -u.at(i, c);
        for (int r = 0; r < u_inv.rows(); ++r) u_inv.at(r, i) = -u_inv.at(r, i);
    }
};

}  // namespace

SmithForm smith_normal_form(IntMatrix a) {
    const int n = a.rows(), m = a.cols();
    SnfState s{std::move(a), IntMatrix::identity(n), IntMatrix::identity(n),
               IntMatrix::identity(m), IntMatrix::identity(m)};

    int t = 0;
    const int bound = std::min(n, m);
    while (t < bound) {
        // find the nonzero pivot of smallest magnitude in the remaining block
        int pi = -1, pj = -1;
        long long best = 0;
        for (int i = t; i < n; ++i)
            for (int j = t; j < m; ++j) {
                long long v = std::llabs(s.d.at(i, j));
                if (v != 0 && (pi < 0 || v < best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;  // remaining block is zero
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);

        bool clean = true;
        for (int i = t + 1; i < n; ++i) {
            long long q = s.d.at(i, t) / s.d.at(t, t);
            s.add_row(i, t, q);
            if (s.d.at(i, t) != 0) clean = false;
        }
        for (int j = t + 1; j < m; ++j) {
            long long q = s.d.at(t, j) / s.d.at(t, t);
            s.add_col(j, t, q);
            if (s.d.at(t, j) != 0) clean = false;
        }
        if (!clean) continue;  // smaller remainders appeared; repick pivot

        // enforce divisibility of the rest of the block by the pivot
        bool divisible = true;
        for (int i = t + 1; i < n && divisible; ++i)
            for (int j = t + 1; j < m && divisible; ++j)
                if (s.d.at(i, j) % s.d.at(t, t) != 0) {
                    // fold row i into row t and retry this pivot position
                    s.add_row(t, i, -1);
                    divisible = false;
                }
        if (!divisible) continue;

        if (s.d.at(t, t) < 0) s.negate_row(t);
        ++t;
    }

    SmithForm out;
    out.d = s.d;
    out.u = s.u;
    out.u_inv = s.u_inv;
    out.v = s.v;
    out.v_inv = s.v_inv;
    for (int i = 0; i < bound; ++i)
        if (out.d.at(i, i) != 0) out.divisors.push_back(out.d.at(i, i));
    return out;
}

FreeQuotient free_quotient(const IntMatrix& relations) {
    const int n = relations.rows();
    SmithForm s = smith_normal_form(relations);

    FreeQuotient q;
    q.ambient_rank = n;
    const int nz = static_cast<int>(s.divisors.size());
    for (long long d : s.divisors)
        if (d != 1) q.torsion.push_back(d);
    q.free = q.torsion.empty();
    q.rank = n - nz;

    // In u-coordinates the image lattice is spanned by d_i * e_i, so the free
    // part of the quotient is read off the coordinates past the pivots.
    q.proj = IntMatrix(q.rank, n);
    q.sect = IntMatrix(n, q.rank);
    for (int i = 0; i < q.rank; ++i)
        for (int c = 0; c < n; ++c) q.proj.at(i, c) = s.u.at(nz + i, c);
    for (int r = 0; r < n; ++r)
        for (int i = 0; i < q.rank; ++i) q.sect.at(r, i) = s.u_inv.at(r, nz + i);
    return q;
}

}  // namespace eqsm
