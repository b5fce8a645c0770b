#pragma once

// Exact integer linear algebra: dense matrices over Z with arbitrary-precision
// entries, Smith/Hermite normal forms, integer kernels and solves, and
// subquotient structure (invariant factors of L/N for nested lattices).

#include <boost/multiprecision/cpp_int.hpp>

#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tatelab {

using Int = boost::multiprecision::cpp_int;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class IntMat {
public:
    IntMat() = default;
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * size_t(cols)) {}
    IntMat(std::initializer_list<std::initializer_list<Int>> rows);

    static IntMat identity(int n);
    static IntMat zero(int rows, int cols) { return IntMat(rows, cols); }
    static IntMat diagonal(const std::vector<Int>& d);
    static IntMat from_columns(int rows, const std::vector<std::vector<Int>>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Int& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    std::vector<Int> column(int j) const;
    std::vector<Int> row(int i) const;
    IntMat columns(const std::vector<int>& idx) const;
    IntMat transpose() const;
    IntMat operator*(const IntMat& rhs) const;
    std::vector<Int> operator*(const std::vector<Int>& v) const;
    IntMat operator+(const IntMat& rhs) const;
    IntMat operator-(const IntMat& rhs) const;
    IntMat operator-() const;
    bool operator==(const IntMat& rhs) const = default;
    bool is_zero() const;
    IntMat hstack(const IntMat& rhs) const;

    void swap_rows(int i, int k);
    void swap_cols(int j, int k);

    std::string str() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

// u * a * v = d with u, v unimodular, d diagonal with nonnegative invariant
// factors in a divisibility chain. u_inv and v_inv are the exact inverses.
struct SnfResult {
    IntMat u, u_inv, v, v_inv, d;
    int rank = 0;

    std::vector<Int> invariant_factors() const;
};

SnfResult smith_normal_form(const IntMat& a);

Int det(const IntMat& a);  // Bareiss fraction-free elimination

// Basis of the column-span lattice (columns are the basis, count = rank).
IntMat column_lattice_basis(const IntMat& a);

// Saturated basis of { x : a x = 0 } (columns).
IntMat kernel_basis(const IntMat& a);

// One integer solution of a x = b, if any.
std::optional<std::vector<Int>> solve_integer(const IntMat& a, const std::vector<Int>& b);

// Reusable solver for many right-hand sides against a fixed matrix.
class LatticeSolver {
public:
    explicit LatticeSolver(const IntMat& a) : snf_(smith_normal_form(a)), cols_(a.cols()) {}
    std::optional<std::vector<Int>> solve(const std::vector<Int>& b) const;
    const SnfResult& snf() const { return snf_; }

private:
    SnfResult snf_;
    int cols_;
};

// Column HNF: canonical lower-staircase basis of the column span. Two matrices
// have equal column-span lattices iff their hermite_basis results are equal.
IntMat hermite_basis(const IntMat& a);

bool lattice_contains(const IntMat& big, const IntMat& small);  // colspan(small) <= colspan(big)
bool lattice_equal(const IntMat& a, const IntMat& b);

// Structure of colspan(ker_gens)/colspan(im_gens): invariant factors > 1 with
// generating representatives in ambient coordinates, plus the restriction to
// the 3-primary part. Throws Error with the witness column if some column of
// im_gens falls outside colspan(ker_gens).
struct Subquotient {
    std::vector<Int> factors;                 // divisibility chain, all > 1
    std::vector<std::vector<Int>> reps;       // one ambient vector per factor
    int free_rank = 0;

    std::vector<Int> p3_factors;              // powers of 3, chain, all > 1
    std::vector<std::vector<Int>> p3_reps;

    Int order3() const;                       // product of p3_factors
};

Subquotient subquotient_structure(const IntMat& ker_gens, const IntMat& im_gens);

}  // namespace tatelab
