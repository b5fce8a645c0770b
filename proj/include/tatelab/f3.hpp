#pragma once

// Dense linear algebra over F_3 with bit-packed rows: each entry lives in two
// bitplanes (lo, hi) with 0 -> (0,0), 1 -> (1,0), 2 -> (0,1). Addition is a
// handful of word operations:
//   e  = (a_lo & b_hi) | (a_hi & b_lo)          (pairs summing to zero)
//   lo = ((a_lo ^ b_lo) & ~e) | (a_hi & b_hi)
//   hi = ((a_hi ^ b_hi) & ~e) | (a_lo & b_lo)
// and negation swaps the planes.

#include <cstdint>
#include <optional>
#include <vector>

#include "tatelab/intmat.hpp"

namespace tatelab {

inline int f3_reduce(long long x) {
    int r = int(x % 3);
    return r < 0 ? r + 3 : r;
}

class F3Mat {
public:
    F3Mat() = default;
    F3Mat(int rows, int cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64),
          lo_(size_t(rows) * wpr_), hi_(size_t(rows) * wpr_) {}

    static F3Mat identity(int n);
    static F3Mat from_int(const IntMat& m);
    IntMat to_int() const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    int get(int i, int j) const {
        size_t w = size_t(i) * wpr_ + (j >> 6);
        uint64_t bit = uint64_t(1) << (j & 63);
        return (lo_[w] & bit) ? 1 : (hi_[w] & bit) ? 2 : 0;
    }
    void set(int i, int j, int v) {
        size_t w = size_t(i) * wpr_ + (j >> 6);
        uint64_t bit = uint64_t(1) << (j & 63);
        lo_[w] = v == 1 ? lo_[w] | bit : lo_[w] & ~bit;
        hi_[w] = v == 2 ? hi_[w] | bit : hi_[w] & ~bit;
    }
    void add_at(int i, int j, int v) { set(i, j, (get(i, j) + v) % 3); }

    bool operator==(const F3Mat& rhs) const = default;
    bool is_zero() const;

    F3Mat operator+(const F3Mat& rhs) const;
    F3Mat operator-(const F3Mat& rhs) const;
    F3Mat operator-() const;
    F3Mat operator*(const F3Mat& rhs) const;
    std::vector<uint8_t> operator*(const std::vector<uint8_t>& v) const;
    F3Mat transpose() const;
    F3Mat pow(int e) const;

    // row_i += c * row_k with c in {1, 2}
    void axpy_row(int i, int k, int c);
    void swap_rows(int i, int k);
    void scale_row(int i, int c);

    int rank() const;
    // Reduced row echelon form; pivot columns reported if requested.
    F3Mat rref(std::vector<int>* pivot_cols = nullptr) const;
    // Columns form a basis of { x : A x = 0 }.
    F3Mat kernel() const;
    std::optional<std::vector<uint8_t>> solve(const std::vector<uint8_t>& b) const;

private:
    int rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> lo_, hi_;

    friend F3Mat kronecker(const F3Mat& a, const F3Mat& b);
};

F3Mat kronecker(const F3Mat& a, const F3Mat& b);

class IntMat;
// Entrywise reduction of an integer matrix mod 3.
F3Mat to_f3(const IntMat& m);

}  // namespace tatelab
