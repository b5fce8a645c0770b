#pragma once

// Arithmetic in (Z/3^N)[z]/(z^6 + z^3 + 1), the mod-3^N model of the 9th
// cyclotomic integers. z is a primitive 9th root of unity, pi = z - 1 (or
// 1 - z, by choice) is a uniformizer with pi^6 = 3u for a unit u, so the
// 3-adic valuation of pi is 1/6 and valuations are reported in sixths.
//
// Exact division by pi is implemented as multiplication by pi^5 u^{-1}
// followed by division by 3, which drops the top base-3 digit of the stored
// representative. Two precision counters ride along: pi_loss counts pi
// divisions (precision() = N - ceil(pi_loss/6), the contract model, scaling
// one digit per six divisions), while digits_valid() counts the base-3 digits
// actually still trustworthy, which is the sharp bound. Deep division chains
// can make the first model optimistic by a digit or two; consumers that
// extract mod-3 data check digits_valid() >= 1.

#include <array>
#include <optional>

#include "tatelab/intmat.hpp"

namespace tatelab {

class Cyclotomic {
public:
    enum class Pi { zeta_minus_one, one_minus_zeta };

    struct El {
        std::array<Int, 6> c{};
        int pi_loss = 0;
        int digits_lost = 0;
    };

    struct Valuation {
        bool infinite = false;
        int sixths = 0;
        bool at_cap = false;  // divisibility still held at the precision cap
    };

    struct HeightCertificate {
        bool v1_to_v5_divisible = false;
        bool v6_unit = false;
        std::array<int, 6> v6_residue{};  // v6 mod 3
    };

    explicit Cyclotomic(int digits = 8, Pi pi = Pi::zeta_minus_one);

    int digits() const { return n_; }
    const Int& modulus() const { return mod_; }
    Pi pi_choice() const { return pi_choice_; }

    El zero() const { return El{}; }
    El one() const { return integer(1); }
    El integer(const Int& k) const;
    El zeta() const;
    El pi() const { return pi_; }
    El from_coeffs(const std::array<Int, 6>& c) const;

    El add(const El& a, const El& b) const;
    El sub(const El& a, const El& b) const;
    El neg(const El& a) const;
    El mul(const El& a, const El& b) const;
    El pow(const El& a, long e) const;

    int precision(const El& a) const;     // N - ceil(pi_loss/6)
    int digits_valid(const El& a) const { return n_ - a.digits_lost; }
    bool is_zero(const El& a) const;      // at the valid precision of a
    bool equal(const El& a, const El& b) const;
    std::array<int, 6> coeffs_mod3(const El& a) const;

    // Throws Error carrying the mod-3 obstruction residue if a is not
    // divisible by pi.
    El divide_by_pi_exact(const El& a) const;
    std::optional<std::array<int, 6>> pi_obstruction(const El& a) const;

    Valuation pi_valuation(const El& a) const;

    // Coefficients of the recursion 3 = sum_{0<=i<n} pi^{n-i} v_{n-i}^{3^i},
    // solved by n exact pi-divisions per step (batched: one digit of loss).
    El hazewinkel_v(int n) const;  // n in 1..6
    // The pi-scaled recursion identity, checked without any division.
    bool residual_identity_holds(int n) const;
    HeightCertificate height_certificate() const;

private:
    int n_;
    Int mod_;
    Pi pi_choice_;
    El pi_;
    El u_inv_;  // inverse of u = pi^6 / 3
    mutable std::array<std::optional<El>, 7> v_cache_;

    Int reduce(const Int& x) const;
    El raw_mul(const El& a, const El& b) const;  // no loss bookkeeping
    El div3_exact(El a) const;
};

// Multiplication by zeta^weight on the rank-6 lattice of 9th cyclotomic
// integers in the basis (1, z, ..., z^5).
IntMat zeta_weight_matrix(int weight);

// H^1 of the order-9 cyclic group acting on that lattice through zeta^weight:
// ker(norm) / im(generator - 1), reported with its 3-primary structure.
Subquotient h1_c9_weight_module(int weight);

}  // namespace tatelab
