#include "tatelab/cyclotomic.hpp"

#include <fmt/format.h>

#include "tatelab/f3.hpp"

namespace tatelab {

namespace {

// Reduce a degree-10 product accumulator through z^6 = -z^3 - 1.
void fold(std::array<Int, 11>& acc) {
    for (int e = 10; e >= 6; --e) {
        if (acc[e] == 0) continue;
        acc[e - 3] -= acc[e];
        acc[e - 6] -= acc[e];
        acc[e] = 0;
    }
}

std::array<int, 6> mod3_of(const std::array<Int, 6>& c) {
    std::array<int, 6> r{};
    for (int i = 0; i < 6; ++i) r[i] = static_cast<int>(c[i] % 3);
    return r;
}

bool all_zero(const std::array<int, 6>& r) {
    for (int v : r)
        if (v != 0) return false;
    return true;
}

Int pow_int(const Int& b, int e) {
    Int r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

Cyclotomic::Cyclotomic(int digits, Pi pi) : n_(digits), pi_choice_(pi) {
    if (digits < 2) throw Error("Cyclotomic: need at least two base-3 digits");
    mod_ = pow_int(3, n_);

    pi_ = zero();
    if (pi == Pi::zeta_minus_one) {
        pi_.c[0] = mod_ - 1;
        pi_.c[1] = 1;
    } else {
        pi_.c[0] = 1;
        pi_.c[1] = mod_ - 1;
    }

    // u = pi^6 / 3 is a unit, the same for either sign of pi.
    El p6 = one();
    for (int i = 0; i < 6; ++i) p6 = raw_mul(p6, pi_);
    El u = zero();
    for (int i = 0; i < 6; ++i) {
        if (p6.c[i] % 3 != 0)
            throw Error("Cyclotomic: pi^6 is not divisible by 3");
        u.c[i] = p6.c[i] / 3;
    }

    // Invert u mod 3 by linear algebra, then Newton-lift to the full modulus.
    F3Mat mu(6, 6);
    for (int j = 0; j < 6; ++j) {
        El zj = zero();
        zj.c[j] = 1;
        El col = raw_mul(u, zj);
        for (int i = 0; i < 6; ++i)
            mu.set(i, j, static_cast<uint8_t>(col.c[i] % 3));
    }
    auto x0 = mu.solve(std::vector<uint8_t>{1, 0, 0, 0, 0, 0});
    if (!x0) throw Error("Cyclotomic: pi^6/3 is not invertible mod 3");
    u_inv_ = zero();
    for (int i = 0; i < 6; ++i) u_inv_.c[i] = (*x0)[i];
    for (int step = 0; step < 64; ++step) {
        El prod = raw_mul(u, u_inv_);
        if (equal(prod, one())) break;
        El two_minus = sub(integer(2), prod);
        u_inv_ = raw_mul(u_inv_, two_minus);
        if (step == 63) throw Error("Cyclotomic: unit inversion did not converge");
    }
    if (!equal(raw_mul(u, u_inv_), one()))
        throw Error("Cyclotomic: unit inversion failed");
}

Int Cyclotomic::reduce(const Int& x) const {
    Int r = x % mod_;
    if (r < 0) r += mod_;
    return r;
}

Cyclotomic::El Cyclotomic::integer(const Int& k) const {
    El r;
    r.c[0] = reduce(k);
    return r;
}

Cyclotomic::El Cyclotomic::zeta() const {
    El r;
    r.c[1] = 1;
    return r;
}

Cyclotomic::El Cyclotomic::from_coeffs(const std::array<Int, 6>& c) const {
    El r;
    for (int i = 0; i < 6; ++i) r.c[i] = reduce(c[i]);
    return r;
}

Cyclotomic::El Cyclotomic::add(const El& a, const El& b) const {
    El r;
    for (int i = 0; i < 6; ++i) r.c[i] = reduce(a.c[i] + b.c[i]);
    r.pi_loss = std::max(a.pi_loss, b.pi_loss);
    r.digits_lost = std::max(a.digits_lost, b.digits_lost);
    return r;
}

Cyclotomic::El Cyclotomic::sub(const El& a, const El& b) const {
    El r;
    for (int i = 0; i < 6; ++i) r.c[i] = reduce(a.c[i] - b.c[i]);
    r.pi_loss = std::max(a.pi_loss, b.pi_loss);
    r.digits_lost = std::max(a.digits_lost, b.digits_lost);
    return r;
}

Cyclotomic::El Cyclotomic::neg(const El& a) const { return sub(zero(), a); }

Cyclotomic::El Cyclotomic::raw_mul(const El& a, const El& b) const {
    std::array<Int, 11> acc{};
    for (int i = 0; i < 6; ++i) {
        if (a.c[i] == 0) continue;
        for (int j = 0; j < 6; ++j) {
            if (b.c[j] == 0) continue;
            acc[i + j] += a.c[i] * b.c[j];
        }
    }
    fold(acc);
    El r;
    for (int i = 0; i < 6; ++i) r.c[i] = reduce(acc[i]);
    return r;
}

Cyclotomic::El Cyclotomic::mul(const El& a, const El& b) const {
    El r = raw_mul(a, b);
    r.pi_loss = std::max(a.pi_loss, b.pi_loss);
    r.digits_lost = std::max(a.digits_lost, b.digits_lost);
    return r;
}

Cyclotomic::El Cyclotomic::pow(const El& a, long e) const {
    if (e < 0) throw Error("Cyclotomic::pow: negative exponent");
    El r = one();
    r.pi_loss = a.pi_loss;
    r.digits_lost = a.digits_lost;
    El base = a;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

int Cyclotomic::precision(const El& a) const {
    return n_ - (a.pi_loss + 5) / 6;
}

bool Cyclotomic::is_zero(const El& a) const {
    int valid = digits_valid(a);
    if (valid <= 0)
        throw Error("Cyclotomic::is_zero: element has no valid digits left");
    Int m = pow_int(3, valid);
    for (int i = 0; i < 6; ++i)
        if (a.c[i] % m != 0) return false;
    return true;
}

bool Cyclotomic::equal(const El& a, const El& b) const { return is_zero(sub(a, b)); }

std::array<int, 6> Cyclotomic::coeffs_mod3(const El& a) const {
    if (digits_valid(a) < 1)
        throw Error("Cyclotomic::coeffs_mod3: element has no valid digits left");
    return mod3_of(a.c);
}

std::optional<std::array<int, 6>> Cyclotomic::pi_obstruction(const El& a) const {
    El t = raw_mul(raw_mul(a, pow(pi_, 5)), u_inv_);
    auto r = mod3_of(t.c);
    if (all_zero(r)) return std::nullopt;
    return r;
}

Cyclotomic::El Cyclotomic::div3_exact(El a) const {
    for (int i = 0; i < 6; ++i) {
        if (a.c[i] % 3 != 0)
            throw Error("Cyclotomic: exact division by 3 hit a nonzero digit");
        a.c[i] /= 3;
    }
    a.digits_lost += 1;
    return a;
}

Cyclotomic::El Cyclotomic::divide_by_pi_exact(const El& a) const {
    El t = raw_mul(raw_mul(a, pow(pi_, 5)), u_inv_);
    auto r = mod3_of(t.c);
    if (!all_zero(r))
        throw Error(fmt::format(
            "divide_by_pi_exact: not divisible by pi; obstruction residue "
            "({},{},{},{},{},{}) mod 3 in basis (1,z,...,z^5)",
            r[0], r[1], r[2], r[3], r[4], r[5]));
    El q = div3_exact(t);
    q.pi_loss = a.pi_loss + 1;
    q.digits_lost = std::max(q.digits_lost, a.digits_lost + 1);
    return q;
}

Cyclotomic::Valuation Cyclotomic::pi_valuation(const El& a) const {
    if (is_zero(a)) return Valuation{true, 0, false};
    Valuation val;
    El x = a;
    while (digits_valid(x) >= 1) {
        if (pi_obstruction(x)) return val;
        x = divide_by_pi_exact(x);
        val.sixths += 1;
    }
    val.at_cap = true;
    return val;
}

Cyclotomic::El Cyclotomic::hazewinkel_v(int n) const {
    if (n < 1 || n > 6) throw Error("hazewinkel_v: index must be in 1..6");
    if (v_cache_[n]) return *v_cache_[n];
    // Residual r = 3 - sum_{1<=i<n} pi^{n-i} v_{n-i}^{3^i}, then v_n = r/pi^n,
    // done in one batch as r * pi^{6-n} * u^{-1} / 3.
    El r = integer(3);
    long p3 = 1;
    for (int i = 1; i < n; ++i) {
        p3 *= 3;
        El term = mul(pow(pi_, n - i), pow(hazewinkel_v(n - i), p3));
        r = sub(r, term);
    }
    El t = raw_mul(raw_mul(r, pow(pi_, 6 - n)), u_inv_);
    auto res = mod3_of(t.c);
    if (!all_zero(res))
        throw Error(fmt::format("hazewinkel_v({}): residual not divisible by pi^{}", n, n));
    El v = div3_exact(t);
    v.pi_loss = r.pi_loss + n;
    v.digits_lost = std::max(v.digits_lost, r.digits_lost + 1);
    if (digits_valid(v) < 1)
        throw Error(fmt::format("hazewinkel_v({}): precision exhausted", n));
    v_cache_[n] = v;
    return v;
}

bool Cyclotomic::residual_identity_holds(int n) const {
    El lhs = zero();
    long p3 = 1;
    for (int i = 0; i < n; ++i) {
        El term = mul(pow(pi_, n - i), pow(hazewinkel_v(n - i), p3));
        lhs = add(lhs, term);
        p3 *= 3;
    }
    return equal(lhs, integer(3));
}

Cyclotomic::HeightCertificate Cyclotomic::height_certificate() const {
    HeightCertificate cert;
    cert.v1_to_v5_divisible = true;
    for (int n = 1; n <= 5; ++n)
        if (pi_obstruction(hazewinkel_v(n))) cert.v1_to_v5_divisible = false;
    El v6 = hazewinkel_v(6);
    cert.v6_unit = pi_obstruction(v6).has_value();
    cert.v6_residue = coeffs_mod3(v6);
    return cert;
}

IntMat zeta_weight_matrix(int weight) {
    int w = ((weight % 9) + 9) % 9;
    IntMat z(6, 6);
    for (int j = 0; j < 6; ++j) {
        int e = (j + w) % 9;
        // Reduce z^e through z^6 = -z^3 - 1.
        std::array<Int, 9> acc{};
        acc[e] = 1;
        for (int k = 8; k >= 6; --k) {
            if (acc[k] == 0) continue;
            acc[k - 3] -= acc[k];
            acc[k - 6] -= acc[k];
            acc[k] = 0;
        }
        for (int i = 0; i < 6; ++i) z.at(i, j) = acc[i];
    }
    return z;
}

Subquotient h1_c9_weight_module(int weight) {
    IntMat z = zeta_weight_matrix(weight);
    IntMat tr = IntMat::zero(6, 6);
    IntMat p = IntMat::identity(6);
    for (int k = 0; k < 9; ++k) {
        tr = tr + p;
        p = p * z;
    }
    if (!(p == IntMat::identity(6)))
        throw Error("h1_c9_weight_module: weight action does not have order dividing 9");
    IntMat ker = kernel_basis(tr);
    IntMat im = IntMat::identity(6) - z;
    return subquotient_structure(ker, im);
}

}  // namespace tatelab
