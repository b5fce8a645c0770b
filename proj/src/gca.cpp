#include "tatelab/gca.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>

namespace tatelab::gca {

namespace {

int total(const Exp& e) {
    int s = 0;
    for (int x : e) s += x;
    return s;
}

}  // namespace

bool DegLex::operator()(const Exp& a, const Exp& b) const {
    int ta = total(a), tb = total(b);
    if (ta != tb) return ta < tb;
    return a < b;
}

Algebra::Algebra(int characteristic, std::vector<Generator> gens)
    : char_(characteristic), gens_(std::move(gens)) {
    if (char_ != 0 && char_ != 3)
        throw Error("Algebra: characteristic must be 0 or 3");
    if (gens_.empty()) throw Error("Algebra: need at least one generator");
    grading_dim_ = static_cast<int>(gens_[0].degree.size());
    for (const auto& g : gens_) {
        if (static_cast<int>(g.degree.size()) != grading_dim_)
            throw Error(fmt::format("Algebra: generator {} has a mismatched grading dimension", g.name));
    }
    for (size_t i = 0; i < gens_.size(); ++i)
        for (size_t j = i + 1; j < gens_.size(); ++j)
            if (gens_[i].name == gens_[j].name)
                throw Error(fmt::format("Algebra: duplicate generator name {}", gens_[i].name));
    kept_.resize(gens_.size());
    for (size_t i = 0; i < gens_.size(); ++i) kept_[i] = static_cast<int>(i);
    kept_pos_.assign(gens_.size(), 0);
    for (size_t i = 0; i < gens_.size(); ++i) kept_pos_[i] = static_cast<int>(i);
    replacement_.resize(gens_.size());
    refresh_bound_coord();
}

int Algebra::gen_index(const std::string& name) const {
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return static_cast<int>(i);
    throw Error(fmt::format("Algebra: no generator named {}", name));
}

void Algebra::refresh_bound_coord() {
    bound_coord_ = -1;
    for (int k = 0; k < grading_dim_; ++k) {
        for (int s : {1, -1}) {
            bool ok = true;
            for (int i : kept_)
                if (s * gens_[i].degree[k] <= 0) ok = false;
            if (ok) {
                bound_coord_ = k;
                bound_sign_ = s;
                return;
            }
        }
    }
}

Int Algebra::reduce(const Int& x) const {
    if (char_ == 0) return x;
    Int r = x % 3;
    if (r < 0) r += 3;
    return r;
}

void Algebra::substitute(const std::string& victim,
                         const std::vector<std::pair<std::string, Int>>& replacement) {
    int vi = gen_index(victim);
    if (kept_pos_[vi] < 0)
        throw Error(fmt::format("substitute: {} was already eliminated", victim));
    std::vector<int> vdeg = gens_[vi].degree;
    for (const auto& [name, coef] : replacement) {
        int ri = gen_index(name);
        if (ri == vi)
            throw Error(fmt::format("substitute: {} cannot appear in its own replacement", victim));
        if (gens_[ri].degree != vdeg || gens_[ri].odd != gens_[vi].odd)
            throw Error(fmt::format(
                "substitute: replacement term {} does not match the degree and parity of {}",
                name, victim));
        (void)coef;
    }
    // Record the raw linear form; expansion happens lazily in var().
    Element raw;
    for (const auto& [name, coef] : replacement) {
        Exp e(gens_.size(), 0);
        e[gen_index(name)] = 1;
        raw[e] += coef;
    }
    replacement_[vi] = raw;  // keyed by full generator index, resolved later

    // Drop the victim from the kept list and renumber.
    kept_.erase(std::remove(kept_.begin(), kept_.end(), vi), kept_.end());
    kept_pos_.assign(gens_.size(), -1);
    for (size_t k = 0; k < kept_.size(); ++k) kept_pos_[kept_[k]] = static_cast<int>(k);
    refresh_bound_coord();
}

Element Algebra::one() const { return constant(1); }

Element Algebra::constant(const Int& k) const {
    Int r = reduce(k);
    if (r == 0) return {};
    Element e;
    e[Exp(kept_.size(), 0)] = r;
    return e;
}

Element Algebra::var(int i) const {
    if (i < 0 || i >= num_gens()) throw Error("Algebra::var: index out of range");
    if (kept_pos_[i] >= 0) {
        Exp e(kept_.size(), 0);
        e[kept_pos_[i]] = 1;
        Element m;
        m[e] = 1;
        return m;
    }
    // Expand the stored linear form, recursing through chained eliminations.
    Element out = zero();
    int guard = 0;
    std::vector<std::pair<int, Int>> work;
    for (const auto& [e, c] : replacement_[i])
        for (size_t j = 0; j < e.size(); ++j)
            if (e[j] != 0) work.emplace_back(static_cast<int>(j), c);
    while (!work.empty()) {
        if (++guard > num_gens() * num_gens() + 16)
            throw Error("Algebra::var: cyclic substitution chain");
        auto [j, c] = work.back();
        work.pop_back();
        if (kept_pos_[j] >= 0) {
            Exp e(kept_.size(), 0);
            e[kept_pos_[j]] = 1;
            Element m;
            m[e] = reduce(c);
            out = add(out, m);
        } else {
            for (const auto& [e2, c2] : replacement_[j])
                for (size_t k = 0; k < e2.size(); ++k)
                    if (e2[k] != 0) work.emplace_back(static_cast<int>(k), c * c2);
        }
    }
    return out;
}

Element Algebra::add(const Element& a, const Element& b) const {
    Element r = a;
    for (const auto& [e, c] : b) {
        Int v = reduce(r.count(e) ? r[e] + c : c);
        if (v == 0)
            r.erase(e);
        else
            r[e] = v;
    }
    return r;
}

Element Algebra::sub(const Element& a, const Element& b) const {
    return add(a, scale(b, -1));
}

Element Algebra::scale(const Element& a, const Int& k) const {
    Element r;
    for (const auto& [e, c] : a) {
        Int v = reduce(c * k);
        if (v != 0) r[e] = v;
    }
    return r;
}

Element Algebra::mul(const Element& a, const Element& b) const {
    Element r;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            // Koszul sign: each odd factor of eb crosses the odd factors of
            // ea sitting at higher slots; coinciding odd factors kill the term.
            int inversions = 0;
            bool dead = false;
            for (size_t i = 0; i < eb.size() && !dead; ++i) {
                if (eb[i] == 0 || !kept_gen(static_cast<int>(i)).odd) continue;
                if (ea[i] != 0) {
                    dead = true;
                    break;
                }
                for (size_t j = i + 1; j < ea.size(); ++j)
                    if (ea[j] != 0 && kept_gen(static_cast<int>(j)).odd) ++inversions;
            }
            if (dead) continue;
            Exp e(ea.size());
            for (size_t i = 0; i < ea.size(); ++i) e[i] = ea[i] + eb[i];
            Int v = ca * cb;
            if (inversions % 2) v = -v;
            v = reduce(r.count(e) ? r[e] + v : v);
            if (v == 0)
                r.erase(e);
            else
                r[e] = v;
        }
    }
    return r;
}

Element Algebra::pow(const Element& a, int e) const {
    if (e < 0) throw Error("Algebra::pow: negative exponent");
    Element r = one();
    Element base = a;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

bool Algebra::equal(const Element& a, const Element& b) const {
    return is_zero(sub(a, b));
}

std::vector<int> Algebra::degree_of_exp(const Exp& e) const {
    std::vector<int> d(grading_dim_, 0);
    for (size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < grading_dim_; ++k)
            d[k] += e[i] * kept_gen(static_cast<int>(i)).degree[k];
    return d;
}

bool Algebra::exp_has_odd_square(const Exp& e) const {
    for (size_t i = 0; i < e.size(); ++i)
        if (e[i] >= 2 && kept_gen(static_cast<int>(i)).odd) return true;
    return false;
}

std::optional<std::vector<int>> Algebra::degree_of(const Element& a) const {
    if (a.empty()) return std::nullopt;
    std::vector<int> d = degree_of_exp(a.begin()->first);
    for (const auto& [e, c] : a) {
        (void)c;
        if (degree_of_exp(e) != d) return std::nullopt;
    }
    return d;
}

std::vector<Exp> Algebra::basis_in_degree(const std::vector<int>& deg) const {
    if (static_cast<int>(deg.size()) != grading_dim_)
        throw Error("basis_in_degree: wrong grading dimension");
    if (bound_coord_ < 0)
        throw Error("basis_in_degree: no grading coordinate bounds all generators");
    std::vector<Exp> out;
    Exp cur(kept_.size(), 0);
    std::vector<int> remaining = deg;
    int n = num_kept();

    auto rec = [&](auto&& self, int slot) -> void {
        int budget = bound_sign_ * remaining[bound_coord_];
        if (budget < 0) return;
        if (slot == n) {
            for (int k = 0; k < grading_dim_; ++k)
                if (remaining[k] != 0) return;
            out.push_back(cur);
            return;
        }
        const Generator& g = kept_gen(slot);
        int step = bound_sign_ * g.degree[bound_coord_];
        int cap = budget / step;
        if (g.odd) cap = std::min(cap, 1);
        for (int e = 0; e <= cap; ++e) {
            cur[slot] = e;
            self(self, slot + 1);
            for (int k = 0; k < grading_dim_; ++k) remaining[k] -= g.degree[k];
        }
        for (int k = 0; k < grading_dim_; ++k) remaining[k] += (cap + 1) * g.degree[k];
        cur[slot] = 0;
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), DegLex{});
    return out;
}

std::vector<Int> Algebra::coords(const Element& a, const std::vector<Exp>& basis) const {
    std::map<Exp, int, DegLex> pos;
    for (size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<int>(i);
    std::vector<Int> c(basis.size(), 0);
    for (const auto& [e, v] : a) {
        auto it = pos.find(e);
        if (it == pos.end())
            throw Error(fmt::format("coords: monomial {} is not in the given basis", monomial_str(e)));
        c[it->second] = v;
    }
    return c;
}

Element Algebra::from_coords(const std::vector<Int>& c, const std::vector<Exp>& basis) const {
    if (c.size() != basis.size()) throw Error("from_coords: size mismatch");
    Element r;
    for (size_t i = 0; i < c.size(); ++i) {
        Int v = reduce(c[i]);
        if (v != 0) r[basis[i]] = v;
    }
    return r;
}

std::string Algebra::monomial_str(const Exp& e) const {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += kept_gen(static_cast<int>(i)).name;
        if (e[i] > 1) s += fmt::format("^{}", e[i]);
    }
    return s.empty() ? "1" : s;
}

std::string Algebra::str(const Element& a) const {
    if (a.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : a) {
        Int v = c;
        bool neg = v < 0;
        if (neg) v = -v;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        std::string m = monomial_str(e);
        if (v == 1 && m != "1")
            s += m;
        else if (m == "1")
            s += v.str();
        else
            s += fmt::format("{}*{}", v.str(), m);
    }
    return s;
}

RingMap::RingMap(const Algebra* alg, std::map<std::string, Element> images) : alg_(alg) {
    images_.resize(alg->num_gens());
    for (int i = 0; i < alg->num_gens(); ++i) {
        const Generator& g = alg->gen(i);
        auto it = images.find(g.name);
        if (it == images.end())
            throw Error(fmt::format("RingMap: missing image for generator {}", g.name));
        const Element& img = it->second;
        if (!alg->is_zero(img)) {
            auto d = alg->degree_of(img);
            if (!d || *d != g.degree)
                throw Error(fmt::format("RingMap: image of {} is not homogeneous of its degree", g.name));
            for (const auto& [e, c] : img) {
                (void)c;
                int odd_count = 0;
                for (size_t k = 0; k < e.size(); ++k)
                    if (alg->kept_gen(static_cast<int>(k)).odd) odd_count += e[k];
                if ((odd_count % 2 != 0) != g.odd)
                    throw Error(fmt::format("RingMap: image of {} has the wrong parity", g.name));
            }
        }
        images_[i] = img;
    }
    // The map must respect every recorded substitution: the given image of an
    // eliminated generator has to agree with the image of its replacement.
    for (int i = 0; i < alg->num_gens(); ++i) {
        if (alg->is_kept(i)) continue;
        Element via_replacement = apply(alg->var(i));
        if (!alg->equal(via_replacement, images_[i]))
            throw Error(fmt::format(
                "RingMap: image of {} conflicts with the image of its replacement",
                alg->gen(i).name));
    }
}

Element RingMap::apply(const Element& a) const {
    Element out = alg_->zero();
    for (const auto& [e, c] : a) {
        Element term = alg_->constant(c);
        for (size_t j = 0; j < e.size(); ++j) {
            if (e[j] == 0) continue;
            int full = alg_->kept_full_index(static_cast<int>(j));
            term = alg_->mul(term, alg_->pow(images_[full], e[j]));
        }
        out = alg_->add(out, term);
    }
    return out;
}

IntMat RingMap::matrix_in_degree(const std::vector<int>& deg) const {
    auto basis = alg_->basis_in_degree(deg);
    int n = static_cast<int>(basis.size());
    IntMat m(n, n);
    for (int j = 0; j < n; ++j) {
        Element mono;
        mono[basis[j]] = 1;
        auto col = alg_->coords(apply(mono), basis);
        for (int i = 0; i < n; ++i) m.at(i, j) = col[i];
    }
    return m;
}

F3Mat RingMap::matrix_in_degree_mod3(const std::vector<int>& deg) const {
    auto basis = alg_->basis_in_degree(deg);
    int n = static_cast<int>(basis.size());
    std::map<Exp, int, DegLex> pos;
    for (int i = 0; i < n; ++i) pos[basis[i]] = i;
    F3Mat m(n, n);
    for (int j = 0; j < n; ++j) {
        Element mono;
        mono[basis[j]] = 1;
        Element img = apply(mono);
        for (const auto& [e, c] : img) {
            auto it = pos.find(e);
            if (it == pos.end())
                throw Error("matrix_in_degree_mod3: image leaves the degree slice");
            int v = static_cast<int>(((c % 3) + 3) % 3);
            if (v != 0) m.set(it->second, j, static_cast<uint8_t>(v));
        }
    }
    return m;
}

Presentation load_presentation(const nlohmann::json& doc) {
    for (const char* key : {"name", "characteristic", "gradings", "generators"})
        if (!doc.contains(key))
            throw Error(fmt::format("presentation: missing field {}", key));

    std::vector<Generator> gens;
    int gdim = static_cast<int>(doc["gradings"].size());
    for (const auto& g : doc["generators"]) {
        Generator gen;
        gen.name = g.at("name").get<std::string>();
        gen.degree = g.at("degree").get<std::vector<int>>();
        gen.odd = g.value("odd", false);
        if (static_cast<int>(gen.degree.size()) != gdim)
            throw Error(fmt::format("presentation: generator {} degree length != #gradings", gen.name));
        gens.push_back(std::move(gen));
    }

    Presentation pres{doc["name"].get<std::string>(),
                      std::make_shared<Algebra>(doc["characteristic"].get<int>(), std::move(gens)),
                      doc["gradings"].get<std::vector<std::string>>(),
                      {}};
    Algebra& alg = *pres.algebra;

    if (doc.contains("substitutions")) {
        for (const auto& s : doc["substitutions"]) {
            std::vector<std::pair<std::string, Int>> repl;
            for (const auto& t : s.at("replacement"))
                repl.emplace_back(t.at("var").get<std::string>(), Int(t.at("coef").get<long>()));
            alg.substitute(s.at("eliminate").get<std::string>(), repl);
        }
    }

    if (doc.contains("maps")) {
        for (const auto& [mname, mdef] : doc["maps"].items()) {
            std::map<std::string, Element> images;
            for (const auto& [gname, terms] : mdef.items()) {
                Element img = alg.zero();
                for (const auto& t : terms) {
                    Element mono = alg.constant(Int(t.at("coef").get<long>()));
                    for (const auto& v : t.at("vars"))
                        mono = alg.mul(mono, alg.pow(alg.var(v.at(0).get<std::string>()),
                                                     v.at(1).get<int>()));
                    img = alg.add(img, mono);
                }
                images[gname] = img;
            }
            pres.maps.emplace(mname, RingMap(&alg, std::move(images)));
        }
    }
    return pres;
}

Presentation load_presentation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open presentation file {}", path));
    nlohmann::json doc;
    in >> doc;
    return load_presentation(doc);
}

namespace {

struct FormulaParser {
    const Algebra& a;
    const std::map<std::string, Element>& env;
    const RingMap* sigma;
    const std::string& s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    Element expr() {
        Element r = eat('-') ? a.scale(term(), -1) : term();
        while (true) {
            if (eat('+'))
                r = a.add(r, term());
            else if (eat('-'))
                r = a.sub(r, term());
            else
                return r;
        }
    }

    Element term() {
        Element r = factor();
        while (eat('*')) r = a.mul(r, factor());
        return r;
    }

    Element factor() {
        Element b = base();
        if (eat('^')) {
            skip();
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start)
                throw Error(fmt::format("eval_formula: exponent expected at {} in \"{}\"", pos, s));
            b = a.pow(b, std::stoi(s.substr(start, pos - start)));
        }
        return b;
    }

    Element paren_expr() {
        if (!eat('('))
            throw Error(fmt::format("eval_formula: '(' expected at {} in \"{}\"", pos, s));
        Element r = expr();
        if (!eat(')'))
            throw Error(fmt::format("eval_formula: ')' expected at {} in \"{}\"", pos, s));
        return r;
    }

    Element base() {
        skip();
        if (pos < s.size() && s[pos] == '(') return paren_expr();
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            return a.constant(Int(s.substr(start, pos - start)));
        }
        if (pos < s.size() &&
            (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            if (name == "tr" && env.find(name) == env.end()) {
                if (!sigma)
                    throw Error(fmt::format("eval_formula: tr without an action in \"{}\"", s));
                Element inner = paren_expr();
                Element once = sigma->apply(inner);
                return a.add(a.add(inner, once), sigma->apply(once));
            }
            if (auto it = env.find(name); it != env.end()) return it->second;
            return a.var(name);
        }
        throw Error(fmt::format("eval_formula: unexpected character at {} in \"{}\"", pos, s));
    }
};

}  // namespace

Element eval_formula(const Algebra& a, const std::string& text,
                     const std::map<std::string, Element>& env, const RingMap* sigma) {
    FormulaParser p{a, env, sigma, text};
    Element r = p.expr();
    p.skip();
    if (p.pos != text.size())
        throw Error(fmt::format("eval_formula: trailing input at {} in \"{}\"", p.pos, text));
    return r;
}

}  // namespace tatelab::gca
