#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqsm {

/// Error type used across the library; the CLI maps it to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Dense integer matrix, row-major. Entries are exact (no floating point
/// anywhere in this project); sizes stay small so long long is plenty.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {
        if (rows < 0 || cols < 0) throw Error("IntMatrix: negative dimension");
    }
    IntMatrix(int rows, int cols, std::vector<long long> data)
        : rows_(rows), cols_(cols), a_(std::move(data)) {
        if (a_.size() != static_cast<size_t>(rows) * cols)
            throw Error("IntMatrix: data size does not match dimensions");
    }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    static IntMatrix zero(int rows, int cols) { return IntMatrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    long long& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    long long at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<long long>& data() const { return a_; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (long long v : a_)
            if (v != 0) return false;
        return true;
    }
    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (at(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix scaled(long long c) const;

    /// Writes `b` into this matrix with top-left corner at (r0, c0).
    void set_block(int r0, int c0, const IntMatrix& b);
    /// Extracts the (nr x nc) block with top-left corner at (r0, c0).
    IntMatrix block(int r0, int c0, int nr, int nc) const;

    std::string to_string() const;

private:
    int rows_, cols_;
    std::vector<long long> a_;
};

/// Smith normal form: D = U * A * V with U, V unimodular and D diagonal
/// with divisibility d1 | d2 | ... Inverses of the transforms are tracked
/// so quotient bookkeeping never needs a general matrix inversion.
struct SmithForm {
    IntMatrix d;
    IntMatrix u, u_inv;  // u * a * v == d,  u * u_inv == I
    IntMatrix v, v_inv;
    std::vector<long long> divisors;  // nonzero diagonal entries, in order
};

SmithForm smith_normal_form(IntMatrix a);

/// The quotient Z^n / columnspan(R), presented by an n x m relation matrix.
/// When the quotient is free of rank r, `proj` (r x n) and `sect` (n x r)
/// give the quotient map and a splitting: proj * sect == I_r, and
/// proj kills columnspan(R).
struct FreeQuotient {
    int ambient_rank = 0;
    int rank = 0;
    bool free = true;
    std::vector<long long> torsion;  // invariant factors > 1, if any
    IntMatrix proj;
    IntMatrix sect;
};

FreeQuotient free_quotient(const IntMatrix& relations);

}  // namespace eqsm
