#include "tatelab/intmat.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>

namespace tatelab {

IntMat::IntMat(std::initializer_list<std::initializer_list<Int>> rows) {
    rows_ = int(rows.size());
    cols_ = rows_ ? int(rows.begin()->size()) : 0;
    a_.reserve(size_t(rows_) * size_t(cols_));
    for (const auto& r : rows) {
        if (int(r.size()) != cols_)
            throw Error("IntMat: ragged initializer");
        for (const auto& x : r)
            a_.push_back(x);
    }
}

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

IntMat IntMat::diagonal(const std::vector<Int>& d) {
    IntMat m(int(d.size()), int(d.size()));
    for (int i = 0; i < int(d.size()); ++i)
        m.at(i, i) = d[i];
    return m;
}

IntMat IntMat::from_columns(int rows, const std::vector<std::vector<Int>>& cols) {
    IntMat m(rows, int(cols.size()));
    for (int j = 0; j < int(cols.size()); ++j) {
        if (int(cols[j].size()) != rows)
            throw Error("from_columns: column length mismatch");
        for (int i = 0; i < rows; ++i)
            m.at(i, j) = cols[j][i];
    }
    return m;
}

std::vector<Int> IntMat::column(int j) const {
    std::vector<Int> c(rows_);
    for (int i = 0; i < rows_; ++i)
        c[i] = at(i, j);
    return c;
}

std::vector<Int> IntMat::row(int i) const {
    std::vector<Int> r(cols_);
    for (int j = 0; j < cols_; ++j)
        r[j] = at(i, j);
    return r;
}

IntMat IntMat::columns(const std::vector<int>& idx) const {
    IntMat m(rows_, int(idx.size()));
    for (int j = 0; j < int(idx.size()); ++j)
        for (int i = 0; i < rows_; ++i)
            m.at(i, j) = at(i, idx[j]);
    return m;
}

IntMat IntMat::transpose() const {
    IntMat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            m.at(j, i) = at(i, j);
    return m;
}

IntMat IntMat::operator*(const IntMat& rhs) const {
    if (cols_ != rhs.rows_)
        throw Error(fmt::format("IntMat multiply: {}x{} by {}x{}", rows_, cols_, rhs.rows_, rhs.cols_));
    IntMat m(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& x = at(i, k);
            if (x == 0)
                continue;
            for (int j = 0; j < rhs.cols_; ++j)
                if (rhs.at(k, j) != 0)
                    m.at(i, j) += x * rhs.at(k, j);
        }
    return m;
}

std::vector<Int> IntMat::operator*(const std::vector<Int>& v) const {
    if (int(v.size()) != cols_)
        throw Error("IntMat apply: size mismatch");
    std::vector<Int> r(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != 0 && v[j] != 0)
                r[i] += at(i, j) * v[j];
    return r;
}

IntMat IntMat::operator+(const IntMat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error("IntMat add: shape mismatch");
    IntMat m = *this;
    for (size_t k = 0; k < a_.size(); ++k)
        m.a_[k] += rhs.a_[k];
    return m;
}

IntMat IntMat::operator-(const IntMat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error("IntMat subtract: shape mismatch");
    IntMat m = *this;
    for (size_t k = 0; k < a_.size(); ++k)
        m.a_[k] -= rhs.a_[k];
    return m;
}

IntMat IntMat::operator-() const {
    IntMat m = *this;
    for (auto& x : m.a_)
        x = -x;
    return m;
}

bool IntMat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return x == 0; });
}

IntMat IntMat::hstack(const IntMat& rhs) const {
    if (rows_ != rhs.rows_)
        throw Error("hstack: row count mismatch");
    IntMat m(rows_, cols_ + rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j)
            m.at(i, j) = at(i, j);
        for (int j = 0; j < rhs.cols_; ++j)
            m.at(i, cols_ + j) = rhs.at(i, j);
    }
    return m;
}

void IntMat::swap_rows(int i, int k) {
    if (i == k)
        return;
    for (int j = 0; j < cols_; ++j)
        std::swap(at(i, j), at(k, j));
}

void IntMat::swap_cols(int j, int k) {
    if (j == k)
        return;
    for (int i = 0; i < rows_; ++i)
        std::swap(at(i, j), at(i, k));
}

std::string IntMat::str() const {
    std::string s;
    for (int i = 0; i < rows_; ++i) {
        s += i == 0 ? "[" : " ";
        for (int j = 0; j < cols_; ++j)
            s += fmt::format("{}{}", at(i, j).str(), j + 1 < cols_ ? " " : "");
        s += i + 1 < rows_ ? "\n" : "]";
    }
    return s;
}

std::vector<Int> SnfResult::invariant_factors() const {
    std::vector<Int> f;
    for (int i = 0; i < rank; ++i)
        f.push_back(d.at(i, i));
    return f;
}

namespace {

// Quotient with remainder in (-|b|/2, |b|/2]; keeps entries small during SNF.
Int balanced_quot(const Int& a, const Int& b) {
    Int q = a / b, r = a - q * b;
    Int hb = abs(b);
    if (2 * r > hb)
        q += b > 0 ? 1 : -1;
    else if (2 * r <= -hb)
        q -= b > 0 ? 1 : -1;
    return q;
}

// Elementary operations on the working matrix with the transforms kept in
// sync: row ops update (u, u_inv), column ops update (v, v_inv) so that
// u * a_original * v = a_work and u * u_inv = v * v_inv = id at all times.
struct SnfWork {
    IntMat a, u, u_inv, v, v_inv;

    explicit SnfWork(const IntMat& m)
        : a(m),
          u(IntMat::identity(m.rows())),
          u_inv(IntMat::identity(m.rows())),
          v(IntMat::identity(m.cols())),
          v_inv(IntMat::identity(m.cols())) {}

    void swap_rows(int i, int k) {
        a.swap_rows(i, k);
        u.swap_rows(i, k);
        u_inv.swap_cols(i, k);
    }
    void swap_cols(int j, int k) {
        a.swap_cols(j, k);
        v.swap_cols(j, k);
        v_inv.swap_rows(j, k);
    }
    void row_sub(int i, const Int& q, int k) {  // row_i -= q * row_k
        if (q == 0)
            return;
        for (int j = 0; j < a.cols(); ++j)
            a.at(i, j) -= q * a.at(k, j);
        for (int j = 0; j < u.cols(); ++j)
            u.at(i, j) -= q * u.at(k, j);
        for (int r = 0; r < u_inv.rows(); ++r)
            u_inv.at(r, k) += q * u_inv.at(r, i);
    }
    void col_sub(int j, const Int& q, int k) {  // col_j -= q * col_k
        if (q == 0)
            return;
        for (int i = 0; i < a.rows(); ++i)
            a.at(i, j) -= q * a.at(i, k);
        for (int i = 0; i < v.rows(); ++i)
            v.at(i, j) -= q * v.at(i, k);
        for (int c = 0; c < v_inv.cols(); ++c)
            v_inv.at(k, c) += q * v_inv.at(j, c);
    }
    void negate_row(int i) {
        for (int j = 0; j < a.cols(); ++j)
            a.at(i, j) = -a.at(i, j);
        for (int j = 0; j < u.cols(); ++j)
            u.at(i, j) = -u.at(i, j);
        for (int r = 0; r < u_inv.rows(); ++r)
            u_inv.at(r, i) = -u_inv.at(r, i);
    }
    void negate_col(int j) {
        for (int i = 0; i < a.rows(); ++i)
            a.at(i, j) = -a.at(i, j);
        for (int i = 0; i < v.rows(); ++i)
            v.at(i, j) = -v.at(i, j);
        for (int c = 0; c < v_inv.cols(); ++c)
            v_inv.at(j, c) = -v_inv.at(j, c);
    }
};

}  // namespace

namespace {

// One Hermite pass over the rows: staircase of pivots from the top-left,
// zeros below each pivot, entries above reduced modulo the pivot. The gcd in
// each column is reached by repeated balanced reduction against the smallest
// entry, which keeps coefficient growth tame.
void row_hnf_pass(SnfWork& w) {
    const int rows = w.a.rows(), cols = w.a.cols();
    int prow = 0;
    for (int col = 0; col < cols && prow < rows; ++col) {
        for (;;) {
            int imin = -1;
            for (int i = prow; i < rows; ++i)
                if (w.a.at(i, col) != 0 &&
                    (imin < 0 || abs(w.a.at(i, col)) < abs(w.a.at(imin, col))))
                    imin = i;
            if (imin < 0)
                break;
            bool cleared = true;
            for (int i = prow; i < rows; ++i) {
                if (i == imin || w.a.at(i, col) == 0)
                    continue;
                w.row_sub(i, balanced_quot(w.a.at(i, col), w.a.at(imin, col)), imin);
                if (w.a.at(i, col) != 0)
                    cleared = false;
            }
            if (!cleared)
                continue;
            w.swap_rows(prow, imin);
            if (w.a.at(prow, col) < 0)
                w.negate_row(prow);
            for (int i = 0; i < prow; ++i)
                w.row_sub(i, balanced_quot(w.a.at(i, col), w.a.at(prow, col)), prow);
            ++prow;
            break;
        }
    }
}

void col_hnf_pass(SnfWork& w) {
    const int rows = w.a.rows(), cols = w.a.cols();
    int pcol = 0;
    for (int row = 0; row < rows && pcol < cols; ++row) {
        for (;;) {
            int jmin = -1;
            for (int j = pcol; j < cols; ++j)
                if (w.a.at(row, j) != 0 &&
                    (jmin < 0 || abs(w.a.at(row, j)) < abs(w.a.at(row, jmin))))
                    jmin = j;
            if (jmin < 0)
                break;
            bool cleared = true;
            for (int j = pcol; j < cols; ++j) {
                if (j == jmin || w.a.at(row, j) == 0)
                    continue;
                w.col_sub(j, balanced_quot(w.a.at(row, j), w.a.at(row, jmin)), jmin);
                if (w.a.at(row, j) != 0)
                    cleared = false;
            }
            if (!cleared)
                continue;
            w.swap_cols(pcol, jmin);
            if (w.a.at(row, pcol) < 0)
                w.negate_col(pcol);
            for (int j = 0; j < pcol; ++j)
                w.col_sub(j, balanced_quot(w.a.at(row, j), w.a.at(row, pcol)), pcol);
            ++pcol;
            break;
        }
    }
}

bool is_diagonal(const IntMat& a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j && a.at(i, j) != 0)
                return false;
    return true;
}

}  // namespace

SnfResult smith_normal_form(const IntMat& m) {
    SnfWork w(m);
    const int steps = std::min(m.rows(), m.cols());

    // Alternate row and column Hermite passes until diagonal, then repair the
    // divisibility chain by folding offending columns together and repeating.
    auto diagonalize = [&w, steps]() {
        for (int guard = 0; !is_diagonal(w.a); ++guard) {
            if (guard > 500)
                throw Error("smith_normal_form: diagonalization did not converge");
            row_hnf_pass(w);
            if (is_diagonal(w.a))
                break;
            col_hnf_pass(w);
        }
        // Positive entries, zeros trailing.
        for (int i = 0; i < steps; ++i)
            if (w.a.at(i, i) < 0)
                w.negate_row(i);
        for (int i = 0, front = 0; i < steps; ++i)
            if (w.a.at(i, i) != 0) {
                if (i != front) {
                    w.swap_rows(i, front);
                    w.swap_cols(i, front);
                }
                ++front;
            }
    };
    diagonalize();
    for (int guard = 0;; ++guard) {
        if (guard > 500)
            throw Error("smith_normal_form: divisibility chain did not converge");
        int bad = -1;
        for (int i = 0; i + 1 < steps && bad < 0; ++i)
            if (w.a.at(i + 1, i + 1) != 0 &&
                (w.a.at(i, i) == 0 || w.a.at(i + 1, i + 1) % w.a.at(i, i) != 0))
                bad = i;
        if (bad < 0)
            break;
        w.col_sub(bad, Int(-1), bad + 1);  // col_bad += col_{bad+1}
        diagonalize();
    }

    SnfResult r;
    r.rank = 0;
    while (r.rank < steps && w.a.at(r.rank, r.rank) != 0)
        ++r.rank;
    r.u = std::move(w.u);
    r.u_inv = std::move(w.u_inv);
    r.v = std::move(w.v);
    r.v_inv = std::move(w.v_inv);
    r.d = std::move(w.a);
    return r;
}

Int det(const IntMat& a) {
    if (a.rows() != a.cols())
        throw Error("det: matrix not square");
    const int n = a.rows();
    IntMat m = a;
    Int sign = 1, prev = 1;
    for (int t = 0; t < n - 1; ++t) {
        if (m.at(t, t) == 0) {
            int k = t + 1;
            while (k < n && m.at(k, t) == 0)
                ++k;
            if (k == n)
                return 0;
            m.swap_rows(t, k);
            sign = -sign;
        }
        for (int i = t + 1; i < n; ++i) {
            for (int j = t + 1; j < n; ++j)
                m.at(i, j) = (m.at(t, t) * m.at(i, j) - m.at(i, t) * m.at(t, j)) / prev;
            m.at(i, t) = 0;
        }
        prev = m.at(t, t);
    }
    return n == 0 ? Int(1) : sign * m.at(n - 1, n - 1);
}

IntMat column_lattice_basis(const IntMat& a) {
    SnfResult s = smith_normal_form(a);
    IntMat b(a.rows(), s.rank);
    for (int j = 0; j < s.rank; ++j)
        for (int i = 0; i < a.rows(); ++i)
            b.at(i, j) = s.d.at(j, j) * s.u_inv.at(i, j);
    return b;
}

IntMat kernel_basis(const IntMat& a) {
    SnfResult s = smith_normal_form(a);
    std::vector<int> idx;
    for (int j = s.rank; j < a.cols(); ++j)
        idx.push_back(j);
    return s.v.columns(idx);
}

std::optional<std::vector<Int>> LatticeSolver::solve(const std::vector<Int>& b) const {
    const IntMat& u = snf_.u;
    if (int(b.size()) != u.cols())
        return std::nullopt;
    std::vector<Int> ub = u * b;
    std::vector<Int> y(cols_);
    for (int i = 0; i < int(ub.size()); ++i) {
        if (i < snf_.rank) {
            if (ub[i] % snf_.d.at(i, i) != 0)
                return std::nullopt;
            y[i] = ub[i] / snf_.d.at(i, i);
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return snf_.v * y;
}

std::optional<std::vector<Int>> solve_integer(const IntMat& a, const std::vector<Int>& b) {
    return LatticeSolver(a).solve(b);
}

IntMat hermite_basis(const IntMat& a) {
    // Column echelon over Z: process rows top down, gcd-reduce the active
    // columns, then normalize so off-staircase entries lie in [0, pivot).
    IntMat m = a;
    const int rows = m.rows(), cols = m.cols();
    int lead = 0;
    for (int i = 0; i < rows && lead < cols; ++i) {
        for (bool dirty = true; dirty;) {
            dirty = false;
            int pj = -1;
            for (int j = lead; j < cols; ++j)
                if (m.at(i, j) != 0 && (pj < 0 || abs(m.at(i, j)) < abs(m.at(i, pj))))
                    pj = j;
            if (pj < 0)
                break;
            m.swap_cols(lead, pj);
            for (int j = lead + 1; j < cols; ++j) {
                Int q = balanced_quot(m.at(i, j), m.at(i, lead));
                if (q != 0)
                    for (int r = 0; r < rows; ++r)
                        m.at(r, j) -= q * m.at(r, lead);
                if (m.at(i, j) != 0)
                    dirty = true;
            }
        }
        if (m.at(i, lead) == 0)
            continue;
        if (m.at(i, lead) < 0)
            for (int r = 0; r < rows; ++r)
                m.at(r, lead) = -m.at(r, lead);
        for (int j = 0; j < lead; ++j) {
            Int q = m.at(i, j) / m.at(i, lead);
            if (m.at(i, j) - q * m.at(i, lead) < 0)
                q -= 1;
            if (q != 0)
                for (int r = 0; r < rows; ++r)
                    m.at(r, j) -= q * m.at(r, lead);
        }
        ++lead;
    }
    std::vector<int> keep;
    for (int j = 0; j < lead; ++j)
        keep.push_back(j);
    return m.columns(keep);
}

bool lattice_contains(const IntMat& big, const IntMat& small) {
    if (big.rows() != small.rows())
        throw Error("lattice_contains: ambient dimension mismatch");
    LatticeSolver solver(big);
    for (int j = 0; j < small.cols(); ++j)
        if (!solver.solve(small.column(j)))
            return false;
    return true;
}

bool lattice_equal(const IntMat& a, const IntMat& b) {
    if (a.rows() != b.rows())
        throw Error("lattice_equal: ambient dimension mismatch");
    return hermite_basis(a) == hermite_basis(b);
}

Int Subquotient::order3() const {
    Int n = 1;
    for (const Int& f : p3_factors)
        n *= f;
    return n;
}

Subquotient subquotient_structure(const IntMat& ker_gens, const IntMat& im_gens) {
    if (ker_gens.rows() != im_gens.rows())
        throw Error("subquotient_structure: ambient dimension mismatch");
    const int ambient = ker_gens.rows();

    SnfResult sk = smith_normal_form(ker_gens);
    const int r = sk.rank;
    // Basis of colspan(ker_gens): b_i = d_i * (u_inv column i).
    IntMat basis(ambient, r);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < ambient; ++i)
            basis.at(i, j) = sk.d.at(j, j) * sk.u_inv.at(i, j);

    // Coordinates of im_gens in that basis; containment must be exact.
    IntMat um = sk.u * im_gens;
    IntMat coords(r, im_gens.cols());
    for (int j = 0; j < im_gens.cols(); ++j) {
        for (int i = 0; i < um.rows(); ++i) {
            if (i < r) {
                if (um.at(i, j) % sk.d.at(i, i) != 0)
                    throw Error(fmt::format(
                        "subquotient_structure: image generator {} lies outside the kernel lattice", j));
                coords.at(i, j) = um.at(i, j) / sk.d.at(i, i);
            } else if (um.at(i, j) != 0) {
                throw Error(fmt::format(
                    "subquotient_structure: image generator {} lies outside the kernel lattice", j));
            }
        }
    }

    // L/N = Z^r / colspan(coords); SNF diagonalizes, u_inv columns give the
    // corresponding generators back in the basis of L.
    SnfResult sc = smith_normal_form(coords);
    Subquotient q;
    q.free_rank = r - sc.rank;
    for (int i = 0; i < r; ++i) {
        Int f = i < sc.rank ? sc.d.at(i, i) : Int(0);
        if (f == 1)
            continue;
        std::vector<Int> gen(ambient);
        for (int k = 0; k < ambient; ++k)
            for (int l = 0; l < r; ++l)
                gen[k] += basis.at(k, l) * sc.u_inv.at(l, i);
        if (f == 0)
            continue;  // free summands carry no finite factor
        q.factors.push_back(f);
        q.reps.push_back(gen);
        Int f3 = 1;
        Int rest = f;
        while (rest % 3 == 0) {
            f3 *= 3;
            rest /= 3;
        }
        if (f3 > 1) {
            std::vector<Int> rep3(ambient);
            for (int k = 0; k < ambient; ++k)
                rep3[k] = rest * gen[k];
            q.p3_factors.push_back(f3);
            q.p3_reps.push_back(std::move(rep3));
        }
    }
    return q;
}

}  // namespace tatelab
