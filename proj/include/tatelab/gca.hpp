#pragma once

// Finitely generated graded-commutative algebras over Z or F_3, presented by
// generators with multidegrees and parities plus echelon linear substitutions
// (each eliminated generator is rewritten as a linear form in the kept ones).
// Odd generators square to zero and anticommute; reordering products picks up
// the usual Koszul sign. Elements are stored sparsely on exponent vectors
// over the kept generators, ordered graded-lexicographically.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tatelab/f3.hpp"
#include "tatelab/intmat.hpp"

namespace tatelab::gca {

using Exp = std::vector<int>;

struct DegLex {
    bool operator()(const Exp& a, const Exp& b) const;
};

using Element = std::map<Exp, Int, DegLex>;

struct Generator {
    std::string name;
    std::vector<int> degree;
    bool odd = false;
};

class Algebra {
public:
    Algebra(int characteristic, std::vector<Generator> gens);

    // Rewrite `victim` as the given linear form in still-kept generators.
    void substitute(const std::string& victim,
                    const std::vector<std::pair<std::string, Int>>& replacement);

    int characteristic() const { return char_; }
    int grading_dim() const { return grading_dim_; }
    int num_gens() const { return static_cast<int>(gens_.size()); }
    int num_kept() const { return static_cast<int>(kept_.size()); }
    const Generator& gen(int i) const { return gens_.at(i); }
    const Generator& kept_gen(int k) const { return gens_.at(kept_.at(k)); }
    int kept_full_index(int k) const { return kept_.at(k); }
    int gen_index(const std::string& name) const;
    bool is_kept(int i) const { return kept_pos_.at(i) >= 0; }

    Element zero() const { return {}; }
    Element one() const;
    Element constant(const Int& k) const;
    Element var(int i) const;  // substituted form of the i-th generator
    Element var(const std::string& name) const { return var(gen_index(name)); }

    Element add(const Element& a, const Element& b) const;
    Element sub(const Element& a, const Element& b) const;
    Element scale(const Element& a, const Int& k) const;
    Element mul(const Element& a, const Element& b) const;
    Element pow(const Element& a, int e) const;
    bool is_zero(const Element& a) const { return a.empty(); }
    bool equal(const Element& a, const Element& b) const;

    std::vector<int> degree_of_exp(const Exp& e) const;
    bool exp_has_odd_square(const Exp& e) const;
    // Degree of a homogeneous element; nullopt for 0 or inhomogeneous input.
    std::optional<std::vector<int>> degree_of(const Element& a) const;

    std::vector<Exp> basis_in_degree(const std::vector<int>& deg) const;
    std::vector<Int> coords(const Element& a, const std::vector<Exp>& basis) const;
    Element from_coords(const std::vector<Int>& c, const std::vector<Exp>& basis) const;

    std::string str(const Element& a) const;
    std::string monomial_str(const Exp& e) const;

private:
    int char_;
    int grading_dim_;
    std::vector<Generator> gens_;
    std::vector<int> kept_;              // generator indices still alive
    std::vector<int> kept_pos_;          // gen index -> slot in kept_, or -1
    std::vector<Element> replacement_;   // for eliminated gens, in kept vars
    // Leading coordinate where every kept generator's degree has one sign,
    // used to bound exponents during basis enumeration.
    int bound_coord_ = -1;
    int bound_sign_ = 0;

    void refresh_bound_coord();
    Int reduce(const Int& x) const;
};

// An algebra endomorphism determined by images of the full generator list.
// Images must be homogeneous of the generator's degree and parity.
class RingMap {
public:
    RingMap(const Algebra* alg, std::map<std::string, Element> images);

    Element apply(const Element& a) const;
    Element image_of(int gen_index) const { return images_.at(gen_index); }

    // Matrix of the map on basis_in_degree(deg), columns indexed by source
    // basis monomials. The mod-3 variant writes directly into a packed
    // matrix and is the one to use for large degrees.
    IntMat matrix_in_degree(const std::vector<int>& deg) const;
    F3Mat matrix_in_degree_mod3(const std::vector<int>& deg) const;

    const Algebra& algebra() const { return *alg_; }

private:
    const Algebra* alg_;
    std::vector<Element> images_;  // indexed by full generator index
};

// The algebra lives behind a shared_ptr so the RingMaps' back-pointers stay
// valid however the Presentation itself is moved around.
struct Presentation {
    std::string name;
    std::shared_ptr<Algebra> algebra;
    std::vector<std::string> grading_names;
    std::map<std::string, RingMap> maps;
    Algebra& alg() const { return *algebra; }
};

// Loads {name, characteristic, gradings, generators, substitutions?, maps?}
// from JSON, validating names, homogeneity, and parity.
Presentation load_presentation(const nlohmann::json& doc);
Presentation load_presentation_file(const std::string& path);

// Evaluates a formula built from named elements with + - * ^ and parentheses.
// Names resolve through env first, then as generator names. Products multiply
// in written order, so odd factors pick up Koszul signs exactly as typed.
// When sigma is given, tr(expr) is the orbit sum expr + s(expr) + s^2(expr).
Element eval_formula(const Algebra& a, const std::string& text,
                     const std::map<std::string, Element>& env = {},
                     const RingMap* sigma = nullptr);

}  // namespace tatelab::gca
