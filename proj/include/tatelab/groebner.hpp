#pragma once

// Buchberger's algorithm over F_3 and the algebraic-relations (elimination)
// computation. Polynomials are sparse maps from exponent vectors to nonzero
// coefficients in {1, 2}. Monomial orders: graded reverse-lexicographic,
// lexicographic, and two-block elimination products of those (senior block
// first, so the senior variables are the ones eliminated).

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tatelab/intmat.hpp"  // for Error

namespace tatelab::grb {

using Exp = std::vector<int>;
using Poly = std::map<Exp, int>;  // keys all the same length; coeffs in {1,2}

struct PolyRing {
    std::vector<std::string> vars;
    int nvars() const { return static_cast<int>(vars.size()); }
    int index(const std::string& name) const;
};

struct MonomialOrder {
    enum class Kind { grevlex, lex };
    Kind kind = Kind::grevlex;
    // Variables [0, block_split) form a senior block compared first; 0 means
    // a single block. A positive split makes this an elimination order for
    // the senior variables.
    int block_split = 0;

    bool less(const Exp& a, const Exp& b) const;
    bool greater(const Exp& a, const Exp& b) const { return less(b, a); }
};

// Arithmetic (characteristic 3).
Poly p_add(const Poly& a, const Poly& b);
Poly p_sub(const Poly& a, const Poly& b);
Poly p_scale(const Poly& a, int c);
Poly p_mul(const Poly& a, const Poly& b);
Poly p_mul_term(const Poly& a, const Exp& mono, int c);
Poly p_pow(const Poly& a, int e);
Poly p_var(const PolyRing& ring, int i);
Poly p_const(const PolyRing& ring, int c);

const std::pair<const Exp, int>& leading_term(const Poly& p, const MonomialOrder& ord);

struct GroebnerBasis {
    PolyRing ring;
    MonomialOrder order;
    std::vector<Poly> gens;  // reduced, monic, sorted by ascending leading term
};

// Fully reduced remainder of p modulo the basis; zero iff p is in the ideal.
Poly normal_form(const Poly& p, const GroebnerBasis& gb);

// selection_weights (one per variable, empty for unweighted) only bias the
// pair-selection degree; the result is the reduced basis either way.
GroebnerBasis buchberger(const PolyRing& ring, std::vector<Poly> gens, MonomialOrder order,
                         std::vector<int> selection_weights = {});

bool contains(const GroebnerBasis& gb, const Poly& p);
bool same_ideal(const GroebnerBasis& a, const GroebnerBasis& b);

// Relations among named elements of the ambient ring: adjoin one tag variable
// per element (named as given), form (tag_i - f_i) plus the ambient quotient
// generators, eliminate the ambient variables, and return the reduced basis
// of the relation ideal in the tag-only ring.
GroebnerBasis algebraic_relations(const PolyRing& ambient,
                                  const std::vector<std::pair<std::string, Poly>>& elements,
                                  const std::vector<Poly>& ambient_quotient = {});

// Plain-text parser: variables, integer literals, + - * ^ and parentheses.
Poly parse_poly(const PolyRing& ring, const std::string& text);
// Terms in descending order; coefficient 2 prints as a leading minus.
std::string poly_str(const PolyRing& ring, const Poly& p,
                     const MonomialOrder& ord = MonomialOrder{});

}  // namespace tatelab::grb
