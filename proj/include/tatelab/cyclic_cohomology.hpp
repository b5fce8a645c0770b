#pragma once

// Tate cohomology of cyclic groups from the 2-periodic resolution
//   0 <- M <- M⊗Z[C_n] <-(1-g)- M⊗Z[C_n] <-(norm)- M⊗Z[C_n] <- ...
// Even degrees present ker(1-g)/im(norm), odd degrees ker(norm)/im(1-g),
// both as integral subquotients so torsion orders come out exactly. The
// groups are 2-periodic, so one parity stands for every degree of that
// parity. Also: the induced action of an outer automorphism on classes,
// Jordan-type decomposition counts for order-3 actions over F_3,
// restriction and inflation along C_3 < C_9 -> C_9/C_3, and cup products
// of cochains through an explicit diagonal approximation.

#include <string>
#include <vector>

#include "tatelab/f3.hpp"
#include "tatelab/gca.hpp"
#include "tatelab/intmat.hpp"

namespace tatelab::cyclic {

// One parity of Ĥ*(C_n; L) for a lattice L with a chosen basis, as invariant
// factors (a divisibility chain of powers dividing n) with one representative
// cocycle per factor. Representatives come from the Smith-adapted basis of
// the cocycle lattice with coordinates reduced to the symmetric range mod n.
struct TateGroup {
    int n = 0;                           // group order
    int parity = 0;                      // 0 = even degrees, 1 = odd degrees
    std::vector<int> deg;                // internal degree of the slice, if graded
    std::vector<Int> factors;            // invariant factors > 1
    std::vector<std::vector<Int>> reps;  // cocycle representative per factor

    IntMat gamma;             // the acting matrix, kept for induced maps
    IntMat ker_u;             // row transform of the cocycle-lattice SNF
    std::vector<Int> ker_d;   // its diagonal (rank entries)
    IntMat coord_u;           // row transform of the coordinate SNF
    std::vector<int> kept;    // adapted columns carrying the listed factors

    Int order() const;
    bool is_zero() const { return factors.empty(); }
    std::string str() const;  // "0", "Z/3 + Z/9", ...
};

TateGroup tate_cohomology(const IntMat& gamma, int n, int parity);
// Graded form: the action of `gamma` on the degree-`deg` slice of its
// characteristic-zero algebra.
TateGroup tate_cohomology(const gca::RingMap& gamma, int n, int parity,
                          const std::vector<int>& deg);

// Coordinates of the class of x in ⊕ Z/f_i, each in [0, f_i). Throws when x
// is not a cocycle.
std::vector<Int> class_coords(const TateGroup& g, const std::vector<Int>& x);

// The invariant lattice M^{C_n} = ker(1-g), with no trace quotient.
struct InvariantLattice {
    IntMat basis;  // columns
    int rank = 0;
};
InvariantLattice h0(const IntMat& gamma);

// Matrix of a commuting operator on the classes: column j holds the class
// coordinates of outer * reps[j]. The operator must commute with the cyclic
// action; that makes it preserve cocycles and coboundaries, so the induced
// matrix is well defined.
IntMat induced_outer_action(const TateGroup& g, const IntMat& outer);

// Multiplicities of the three indecomposable F_3[C_3]-modules in an order-3
// unipotent action: trivial lines, 2-dimensional summands, free summands.
struct C3DecompositionCounts {
    int m_triv = 0;
    int m_two = 0;
    int m_free = 0;
};
C3DecompositionCounts decompose_c3(const F3Mat& g);

// Restriction to the index-k subgroup generated by gamma^k: even classes
// restrict as they stand, odd classes pick up the partial norm
// 1 + g + ... + g^{k-1} (the comparison map between the two periodic
// resolutions; (1 + ... + g^{k-1})(1-g) = 1-g^k keeps it a chain map).
std::vector<Int> restrict_cocycle(const IntMat& gamma, int k, int parity,
                                  const std::vector<Int>& x);

// Matrix of restriction on classes, from the C_n group to the group of the
// order-n/k subgroup acting on the same lattice.
IntMat restriction_matrix(const TateGroup& src, const TateGroup& tgt, int k);

// Inflation from the order-n/k quotient in homological degree `degree` >= 0:
// the comparison map multiplies by k^floor(degree/2), where k is the order
// of the subgroup being collapsed.
std::vector<Int> inflate_cocycle(int k, int degree, const std::vector<Int>& x);

// Cup product of cochain representatives via the diagonal approximation of
// the periodic resolution: with px, py the homological degrees,
//   even . even  ->  x y            even . odd  ->  x y
//   odd  . even  ->  x g(y)         odd  . odd  ->  sum_{0<=s<t<n} g^s(x) g^t(y)
// The result is a cochain for degree px+py; classes are compared through
// class_coords. The formula set is validated against the bar resolution in
// the tests rather than trusted.
gca::Element cup_product(const gca::Algebra& a, const gca::RingMap& gamma, int n,
                         int px, const gca::Element& x,
                         int py, const gca::Element& y);

// Direct F_3 dimension count per parity for the reduction of the action mod
// 3: even = dim ker(1-g) - rank(norm), odd = dim ker(norm) - rank(1-g).
// This is the brute-force oracle, and the only path that scales to large
// slices.
struct F3TateDims {
    int even = 0;
    int odd = 0;
};
F3TateDims tate_f3_dims(const F3Mat& gamma, int n);

}  // namespace tatelab::cyclic
