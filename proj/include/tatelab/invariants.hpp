#pragma once

// The cyclic-invariant subring of F_3[d1,d2,d3] (x) Lambda[c1,c2,c3], where
// the order-3 action rotates both index families. Provides the sixteen-entry
// module generator table over the elementary symmetric functions in the d's,
// orbit-sum traces, degreewise invariant bases, a scan certifying that the
// s-monomial multiples of the table form a basis in every bidegree, and the
// identity suites expanding products of table entries back over the table.

#include <string>
#include <vector>

#include "tatelab/gca.hpp"

namespace tatelab::invariants {

struct TableEntry {
    std::string name;
    gca::Element value;
    int q = 0;  // exterior degree
    int t = 0;  // internal degree
};

struct FreenessRow {
    int q = 0;
    int t = 0;
    int dim_invariants = 0;
    int multiples = 0;  // s-monomial multiples of table entries landing here
    int rank = 0;       // rank of their coordinate matrix mod 3
    bool free = false;  // multiples are independent and span the invariants
};

struct FreenessReport {
    int t_min = 0;
    int t_max = 0;
    std::vector<FreenessRow> rows;  // nonempty bidegrees only
    bool all_free = true;
};

struct IdentityCheck {
    std::string name;      // the identity as printed
    std::string expected;  // "0", or the pinned residual for a variant line
    bool holds = false;    // left minus right equals expected
    std::string residual;  // left minus right, printed
};

gca::Presentation load_t(const std::string& path = "share/presentations/T.json");

// Orbit sum of a single monomial that is not fixed by the action.
gca::Element trace_element(const gca::Presentation& t, const gca::Element& x);

// 1, cbar, delta, cbar*delta, f0..f5, F0..F5 with their (q, t) bidegrees.
std::vector<TableEntry> generator_table(const gca::Presentation& t);

// s1, s2, s3.
std::vector<gca::Element> symmetric_functions(const gca::Presentation& t);

// Name -> element map holding the table entries and symmetric functions,
// ready to feed eval_formula.
std::map<std::string, gca::Element> table_env(const gca::Presentation& t);

// F_3-basis of the invariants in bidegree (q, t).
std::vector<gca::Element> invariant_basis(const gca::Presentation& t, int q, int tt);

// Checks, for every nonempty bidegree with t in [t_min, t_max], that the
// s-monomial multiples of the sixteen table entries form a basis of the
// invariants there.
FreenessReport verify_free_generation(const gca::Presentation& t, int t_min, int t_max);

// The six identities rewriting traces of the redundant index patterns
// (those not used as table entries) over the table.
std::vector<IdentityCheck> verify_generator_reductions(const gca::Presentation& t);

// The multiplicative relation suite: the delta square, the f_i*f_j
// expansions, and the f_i*delta expansions, each checked exactly, plus one
// variant f2*f5 line with its F2*s3 term dropped whose residual is pinned.
std::vector<IdentityCheck> verify_relation_suite(const gca::Presentation& t);

}  // namespace tatelab::invariants
