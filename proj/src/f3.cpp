#include "tatelab/f3.hpp"

#include <algorithm>

#include "tatelab/intmat.hpp"

namespace tatelab {

F3Mat F3Mat::identity(int n) {
    F3Mat m(n, n);
    for (int i = 0; i < n; ++i)
        m.set(i, i, 1);
    return m;
}

F3Mat F3Mat::from_int(const IntMat& a) {
    F3Mat m(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            Int r = a.at(i, j) % 3;
            if (r < 0)
                r += 3;
            if (r != 0)
                m.set(i, j, int(r));
        }
    return m;
}

IntMat F3Mat::to_int() const {
    IntMat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            m.at(i, j) = get(i, j);
    return m;
}

bool F3Mat::is_zero() const {
    return std::all_of(lo_.begin(), lo_.end(), [](uint64_t w) { return w == 0; }) &&
           std::all_of(hi_.begin(), hi_.end(), [](uint64_t w) { return w == 0; });
}

namespace {

inline void word_add(uint64_t al, uint64_t ah, uint64_t bl, uint64_t bh, uint64_t& sl, uint64_t& sh) {
    uint64_t e = (al & bh) | (ah & bl);
    sl = ((al ^ bl) & ~e) | (ah & bh);
    sh = ((ah ^ bh) & ~e) | (al & bl);
}

}  // namespace

F3Mat F3Mat::operator+(const F3Mat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error("F3Mat add: shape mismatch");
    F3Mat m(rows_, cols_);
    for (size_t w = 0; w < lo_.size(); ++w)
        word_add(lo_[w], hi_[w], rhs.lo_[w], rhs.hi_[w], m.lo_[w], m.hi_[w]);
    return m;
}

F3Mat F3Mat::operator-(const F3Mat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error("F3Mat subtract: shape mismatch");
    F3Mat m(rows_, cols_);
    for (size_t w = 0; w < lo_.size(); ++w)
        word_add(lo_[w], hi_[w], rhs.hi_[w], rhs.lo_[w], m.lo_[w], m.hi_[w]);
    return m;
}

F3Mat F3Mat::operator-() const {
    F3Mat m = *this;
    m.lo_.swap(m.hi_);
    return m;
}

void F3Mat::axpy_row(int i, int k, int c) {
    uint64_t* dl = lo_.data() + size_t(i) * wpr_;
    uint64_t* dh = hi_.data() + size_t(i) * wpr_;
    const uint64_t* sl = (c == 1 ? lo_ : hi_).data() + size_t(k) * wpr_;
    const uint64_t* sh = (c == 1 ? hi_ : lo_).data() + size_t(k) * wpr_;
    for (int w = 0; w < wpr_; ++w)
        word_add(dl[w], dh[w], sl[w], sh[w], dl[w], dh[w]);
}

void F3Mat::swap_rows(int i, int k) {
    if (i == k)
        return;
    std::swap_ranges(lo_.begin() + size_t(i) * wpr_, lo_.begin() + size_t(i + 1) * wpr_,
                     lo_.begin() + size_t(k) * wpr_);
    std::swap_ranges(hi_.begin() + size_t(i) * wpr_, hi_.begin() + size_t(i + 1) * wpr_,
                     hi_.begin() + size_t(k) * wpr_);
}

void F3Mat::scale_row(int i, int c) {
    if (c == 2)
        std::swap_ranges(lo_.begin() + size_t(i) * wpr_, lo_.begin() + size_t(i + 1) * wpr_,
                         hi_.begin() + size_t(i) * wpr_);
}

F3Mat F3Mat::operator*(const F3Mat& rhs) const {
    if (cols_ != rhs.rows_)
        throw Error("F3Mat multiply: shape mismatch");
    F3Mat m(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        uint64_t* dl = m.lo_.data() + size_t(i) * m.wpr_;
        uint64_t* dh = m.hi_.data() + size_t(i) * m.wpr_;
        const uint64_t* al = lo_.data() + size_t(i) * wpr_;
        const uint64_t* ah = hi_.data() + size_t(i) * wpr_;
        for (int w = 0; w < wpr_; ++w) {
            uint64_t nz = al[w] | ah[w];
            while (nz) {
                int bit = __builtin_ctzll(nz);
                nz &= nz - 1;
                int k = w * 64 + bit;
                bool two = (ah[w] >> bit) & 1;
                const uint64_t* sl = (two ? rhs.hi_ : rhs.lo_).data() + size_t(k) * rhs.wpr_;
                const uint64_t* sh = (two ? rhs.lo_ : rhs.hi_).data() + size_t(k) * rhs.wpr_;
                for (int x = 0; x < m.wpr_; ++x)
                    word_add(dl[x], dh[x], sl[x], sh[x], dl[x], dh[x]);
            }
        }
    }
    return m;
}

std::vector<uint8_t> F3Mat::operator*(const std::vector<uint8_t>& v) const {
    if (int(v.size()) != cols_)
        throw Error("F3Mat apply: size mismatch");
    std::vector<uint8_t> r(rows_);
    for (int i = 0; i < rows_; ++i) {
        int acc = 0;
        for (int j = 0; j < cols_; ++j)
            acc += get(i, j) * v[j];
        r[i] = uint8_t(acc % 3);
    }
    return r;
}

F3Mat F3Mat::transpose() const {
    F3Mat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int w = 0; w < wpr_; ++w) {
            uint64_t nz = lo_[size_t(i) * wpr_ + w] | hi_[size_t(i) * wpr_ + w];
            while (nz) {
                int bit = __builtin_ctzll(nz);
                nz &= nz - 1;
                int j = w * 64 + bit;
                m.set(j, i, get(i, j));
            }
        }
    return m;
}

F3Mat F3Mat::pow(int e) const {
    if (rows_ != cols_)
        throw Error("F3Mat pow: matrix not square");
    F3Mat r = identity(rows_), base = *this;
    for (; e > 0; e >>= 1) {
        if (e & 1)
            r = r * base;
        if (e > 1)
            base = base * base;
    }
    return r;
}

int F3Mat::rank() const {
    F3Mat m = *this;
    int rk = 0;
    for (int j = 0; j < cols_ && rk < rows_; ++j) {
        int piv = -1;
        for (int i = rk; i < rows_; ++i)
            if (m.get(i, j) != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        m.swap_rows(rk, piv);
        if (m.get(rk, j) == 2)
            m.scale_row(rk, 2);
        for (int i = rk + 1; i < rows_; ++i) {
            int c = m.get(i, j);
            if (c != 0)
                m.axpy_row(i, rk, 3 - c);
        }
        ++rk;
    }
    return rk;
}

F3Mat F3Mat::rref(std::vector<int>* pivot_cols) const {
    F3Mat m = *this;
    if (pivot_cols)
        pivot_cols->clear();
    int rk = 0;
    for (int j = 0; j < cols_ && rk < rows_; ++j) {
        int piv = -1;
        for (int i = rk; i < rows_; ++i)
            if (m.get(i, j) != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        m.swap_rows(rk, piv);
        if (m.get(rk, j) == 2)
            m.scale_row(rk, 2);
        for (int i = 0; i < rows_; ++i) {
            if (i == rk)
                continue;
            int c = m.get(i, j);
            if (c != 0)
                m.axpy_row(i, rk, 3 - c);
        }
        if (pivot_cols)
            pivot_cols->push_back(j);
        ++rk;
    }
    return m;
}

F3Mat F3Mat::kernel() const {
    std::vector<int> pivots;
    F3Mat r = rref(&pivots);
    std::vector<int> pivot_of_col(cols_, -1);
    for (int k = 0; k < int(pivots.size()); ++k)
        pivot_of_col[pivots[k]] = k;
    std::vector<int> free_cols;
    for (int j = 0; j < cols_; ++j)
        if (pivot_of_col[j] < 0)
            free_cols.push_back(j);
    F3Mat ker(cols_, int(free_cols.size()));
    for (int k = 0; k < int(free_cols.size()); ++k) {
        int f = free_cols[k];
        ker.set(f, k, 1);
        for (int j = 0; j < f; ++j)
            if (pivot_of_col[j] >= 0) {
                int c = r.get(pivot_of_col[j], f);
                if (c != 0)
                    ker.set(j, k, 3 - c);
            }
    }
    return ker;
}

std::optional<std::vector<uint8_t>> F3Mat::solve(const std::vector<uint8_t>& b) const {
    if (int(b.size()) != rows_)
        throw Error("F3Mat solve: size mismatch");
    F3Mat aug(rows_, cols_ + 1);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            int v = get(i, j);
            if (v)
                aug.set(i, j, v);
        }
        if (b[i])
            aug.set(i, cols_, b[i] % 3);
    }
    std::vector<int> pivots;
    F3Mat r = aug.rref(&pivots);
    std::vector<uint8_t> x(cols_);
    for (int k = 0; k < int(pivots.size()); ++k) {
        if (pivots[k] == cols_)
            return std::nullopt;  // pivot in the augmented column: inconsistent
        x[pivots[k]] = uint8_t(r.get(k, cols_));
    }
    return x;
}

F3Mat kronecker(const F3Mat& a, const F3Mat& b) {
    F3Mat m(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ia = 0; ia < a.rows(); ++ia)
        for (int ja = 0; ja < a.cols(); ++ja) {
            int va = a.get(ia, ja);
            if (va == 0)
                continue;
            for (int ib = 0; ib < b.rows(); ++ib)
                for (int jb = 0; jb < b.cols(); ++jb) {
                    int vb = b.get(ib, jb);
                    if (vb)
                        m.set(ia * b.rows() + ib, ja * b.cols() + jb, (va * vb) % 3);
                }
        }
    return m;
}

F3Mat to_f3(const IntMat& m) {
    F3Mat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            int v = static_cast<int>(((m.at(i, j) % 3) + 3) % 3);
            if (v != 0) r.set(i, j, static_cast<uint8_t>(v));
        }
    return r;
}

}  // namespace tatelab
