#include "tatelab/groebner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

namespace tatelab::grb {

namespace {

int slice_deg(const Exp& e, int lo, int hi) {
    int d = 0;
    for (int i = lo; i < hi; ++i) d += e[i];
    return d;
}

// -1, 0, 1 comparison of a vs b restricted to [lo, hi), in the given kind.
int cmp_block(const Exp& a, const Exp& b, int lo, int hi, MonomialOrder::Kind kind) {
    if (kind == MonomialOrder::Kind::lex) {
        for (int i = lo; i < hi; ++i)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    int da = slice_deg(a, lo, hi), db = slice_deg(b, lo, hi);
    if (da != db) return da < db ? -1 : 1;
    for (int i = hi - 1; i >= lo; --i)
        if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    return 0;
}

Exp exp_add(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

int total_deg(const Exp& e) { return slice_deg(e, 0, static_cast<int>(e.size())); }

int inv3(int c) { return c; }  // 1 and 2 are their own inverses mod 3

}  // namespace

int PolyRing::index(const std::string& name) const {
    for (int i = 0; i < nvars(); ++i)
        if (vars[i] == name) return i;
    throw Error(fmt::format("PolyRing: no variable named {}", name));
}

bool MonomialOrder::less(const Exp& a, const Exp& b) const {
    int n = static_cast<int>(a.size());
    if (block_split > 0) {
        int c = cmp_block(a, b, 0, block_split, kind);
        if (c != 0) return c < 0;
        return cmp_block(a, b, block_split, n, kind) < 0;
    }
    return cmp_block(a, b, 0, n, kind) < 0;
}

Poly p_add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [e, c] : b) {
        int v = ((r.count(e) ? r[e] : 0) + c) % 3;
        if (v == 0)
            r.erase(e);
        else
            r[e] = v;
    }
    return r;
}

Poly p_scale(const Poly& a, int c) {
    c = ((c % 3) + 3) % 3;
    if (c == 0) return {};
    if (c == 1) return a;
    Poly r;
    for (const auto& [e, v] : a) r[e] = (v * c) % 3;
    return r;
}

Poly p_sub(const Poly& a, const Poly& b) { return p_add(a, p_scale(b, 2)); }

Poly p_mul_term(const Poly& a, const Exp& mono, int c) {
    c = ((c % 3) + 3) % 3;
    if (c == 0) return {};
    Poly r;
    for (const auto& [e, v] : a) r[exp_add(e, mono)] = (v * c) % 3;
    return r;
}

Poly p_mul(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [e, v] : b) r = p_add(r, p_mul_term(a, e, v));
    return r;
}

Poly p_pow(const Poly& a, int e) {
    if (e < 0) throw Error("p_pow: negative exponent");
    if (a.empty()) return e == 0 ? Poly{} : Poly{};
    Poly r;
    // empty ring context: build 1 with the right key length
    r[Exp(a.begin()->first.size(), 0)] = 1;
    Poly base = a;
    while (e > 0) {
        if (e & 1) r = p_mul(r, base);
        base = p_mul(base, base);
        e >>= 1;
    }
    return r;
}

Poly p_var(const PolyRing& ring, int i) {
    Exp e(ring.nvars(), 0);
    e[i] = 1;
    return Poly{{e, 1}};
}

Poly p_const(const PolyRing& ring, int c) {
    c = ((c % 3) + 3) % 3;
    if (c == 0) return {};
    return Poly{{Exp(ring.nvars(), 0), c}};
}

const std::pair<const Exp, int>& leading_term(const Poly& p, const MonomialOrder& ord) {
    if (p.empty()) throw Error("leading_term of zero polynomial");
    auto best = p.begin();
    for (auto it = std::next(p.begin()); it != p.end(); ++it)
        if (ord.less(best->first, it->first)) best = it;
    return *best;
}

// The computational core packs exponent vectors one byte per variable into
// 64-bit words (so at most 32 variables), with each block of a block order
// aligned to a word boundary. Divisibility is a borrow test per word,
// support bitmasks prescreen reducers and decide the product criterion, and
// per-block degrees ride along so comparisons rarely touch the bytes.
namespace {

constexpr uint64_t kHighBits = 0x8080808080808080ULL;
constexpr int kMaxVars = 32;

struct Layout {
    int n = 0;      // variables
    int W = 1;      // packed words in use
    int sword = 0;  // words of the senior block (0 when there is no split)
    int split = 0;
    MonomialOrder::Kind kind = MonomialOrder::Kind::grevlex;
    std::array<int8_t, kMaxVars> word{};
    std::array<int8_t, kMaxVars> shift{};
};

Layout make_layout(int n, const MonomialOrder& order) {
    if (n > kMaxVars)
        throw Error(fmt::format("buchberger: {} variables exceeds the supported {}", n, kMaxVars));
    Layout L;
    L.n = n;
    L.split = order.block_split;
    L.kind = order.kind;
    int w = 0;
    auto place = [&](int lo, int hi) {
        for (int v = lo; v < hi; ++v) {
            int local = v - lo;
            L.word[v] = static_cast<int8_t>(w + local / 8);
            L.shift[v] = static_cast<int8_t>(8 * (7 - local % 8));
        }
        w += (hi - lo + 7) / 8;
    };
    if (L.split > 0) {
        place(0, L.split);
        L.sword = w;
        place(L.split, n);
    } else {
        place(0, n);
    }
    L.W = std::max(w, 1);
    return L;
}

struct PM {
    std::array<uint64_t, 4> w{};
    std::array<int16_t, 2> bd{};  // per-block degrees
    uint64_t mask = 0;            // support bits, one per variable
};

PM pm_pack(const Exp& e, const Layout& L) {
    PM r;
    for (int v = 0; v < L.n; ++v) {
        int x = e[v];
        if (x < 0 || x > 127) throw Error(fmt::format("buchberger: exponent {} out of range", x));
        r.w[L.word[v]] |= static_cast<uint64_t>(x) << L.shift[v];
        int blk = (L.split > 0 && v >= L.split) ? 1 : 0;
        r.bd[blk] = static_cast<int16_t>(r.bd[blk] + x);
        if (x > 0) r.mask |= 1ULL << v;
    }
    return r;
}

Exp pm_unpack(const PM& a, const Layout& L) {
    Exp e(L.n);
    for (int v = 0; v < L.n; ++v) e[v] = (a.w[L.word[v]] >> L.shift[v]) & 0x7f;
    return e;
}

bool pm_eq(const PM& a, const PM& b, int W) {
    for (int k = 0; k < W; ++k)
        if (a.w[k] != b.w[k]) return false;
    return true;
}

PM pm_add(const PM& a, const PM& b, const Layout& L) {
    PM r;
    for (int k = 0; k < L.W; ++k) {
        r.w[k] = a.w[k] + b.w[k];
        if ((r.w[k] & kHighBits) != 0) throw Error("buchberger: exponent overflow");
    }
    r.bd[0] = static_cast<int16_t>(a.bd[0] + b.bd[0]);
    r.bd[1] = static_cast<int16_t>(a.bd[1] + b.bd[1]);
    r.mask = a.mask | b.mask;
    return r;
}

// a / b for b | a; the support mask is rebuilt from the bytes.
PM pm_div(const PM& a, const PM& b, const Layout& L) {
    PM r;
    for (int k = 0; k < L.W; ++k) r.w[k] = a.w[k] - b.w[k];
    r.bd[0] = static_cast<int16_t>(a.bd[0] - b.bd[0]);
    r.bd[1] = static_cast<int16_t>(a.bd[1] - b.bd[1]);
    for (int v = 0; v < L.n; ++v)
        if ((r.w[L.word[v]] >> L.shift[v]) & 0x7f) r.mask |= 1ULL << v;
    return r;
}

bool pm_divides(const PM& a, const PM& b, int W) {  // a | b
    for (int k = 0; k < W; ++k)
        if (((b.w[k] - a.w[k]) & kHighBits) != 0) return false;
    return true;
}

PM pm_lcm(const PM& a, const PM& b, const Layout& L) {
    PM r;
    int deg[2] = {0, 0};
    for (int k = 0; k < L.W; ++k) {
        uint64_t m = 0;
        for (int s = 0; s < 64; s += 8) {
            uint64_t xa = (a.w[k] >> s) & 0xff, xb = (b.w[k] >> s) & 0xff;
            uint64_t hi = xa > xb ? xa : xb;
            m |= hi << s;
            deg[L.split > 0 && k >= L.sword ? 1 : 0] += static_cast<int>(hi);
        }
        r.w[k] = m;
    }
    r.bd[0] = static_cast<int16_t>(deg[0]);
    r.bd[1] = static_cast<int16_t>(deg[1]);
    r.mask = a.mask | b.mask;
    return r;
}

int scan_grevlex(const PM& a, const PM& b, int lo, int hi) {
    for (int k = hi - 1; k >= lo; --k) {
        uint64_t x = a.w[k] ^ b.w[k];
        if (!x) continue;
        int sh = __builtin_ctzll(x) & ~7;
        int av = (a.w[k] >> sh) & 0xff, bv = (b.w[k] >> sh) & 0xff;
        return av > bv ? -1 : 1;  // larger entry at the rightmost difference loses
    }
    return 0;
}

int scan_lex(const PM& a, const PM& b, int lo, int hi) {
    for (int k = lo; k < hi; ++k) {
        uint64_t x = a.w[k] ^ b.w[k];
        if (!x) continue;
        int sh = (63 - __builtin_clzll(x)) & ~7;
        int av = (a.w[k] >> sh) & 0xff, bv = (b.w[k] >> sh) & 0xff;
        return av < bv ? -1 : 1;
    }
    return 0;
}

struct PMLess {
    const Layout* L;
    int cmp_block(const PM& a, const PM& b, int blk) const {
        int lo = blk == 0 ? 0 : L->sword;
        int hi = (L->split > 0 && blk == 0) ? L->sword : L->W;
        if (L->kind == MonomialOrder::Kind::lex) return scan_lex(a, b, lo, hi);
        if (a.bd[blk] != b.bd[blk]) return a.bd[blk] < b.bd[blk] ? -1 : 1;
        return scan_grevlex(a, b, lo, hi);
    }
    bool operator()(const PM& a, const PM& b) const {
        if (L->split > 0) {
            int c = cmp_block(a, b, 0);
            if (c != 0) return c < 0;
            return cmp_block(a, b, 1) < 0;
        }
        return cmp_block(a, b, 0) < 0;
    }
};

using PVec = std::vector<std::pair<PM, int>>;  // descending by the order

PVec pack_poly(const Poly& p, const Layout& L) {
    PVec r;
    r.reserve(p.size());
    for (const auto& [e, c] : p) r.emplace_back(pm_pack(e, L), c);
    PMLess less{&L};
    std::sort(r.begin(), r.end(),
              [&](const auto& x, const auto& y) { return less(y.first, x.first); });
    return r;
}

Poly unpack_poly(const PVec& p, const Layout& L) {
    Poly r;
    for (const auto& [m, c] : p) r[pm_unpack(m, L)] = c;
    return r;
}

// Geobucket working polynomial: sorted runs with geometrically growing
// capacities, so adding an m-term multiple costs one merge of length O(m)
// amortized rather than m tree walks.
struct Bucket {
    const Layout* L;
    std::vector<PVec> runs;  // runs[i] ascending, at most 4^(i+1) terms

    static size_t cap(size_t i) { return size_t{4} << (2 * i); }

    PVec merge(const PVec& a, const PVec& b) const {
        PVec out;
        out.reserve(a.size() + b.size());
        PMLess less{L};
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (pm_eq(a[i].first, b[j].first, L->W)) {
                int s = (a[i].second + b[j].second) % 3;
                if (s != 0) out.emplace_back(a[i].first, s);
                ++i, ++j;
            } else if (less(a[i].first, b[j].first)) {
                out.push_back(a[i++]);
            } else {
                out.push_back(b[j++]);
            }
        }
        out.insert(out.end(), a.begin() + i, a.end());
        out.insert(out.end(), b.begin() + j, b.end());
        return out;
    }

    // this += c * x^shift * src[from:], with src descending as stored.
    void add(const PVec& src, const PM& shift, int c, size_t from = 0) {
        if (from >= src.size() || c % 3 == 0) return;
        PVec t;
        t.reserve(src.size() - from);
        for (size_t k = src.size(); k-- > from;)
            t.emplace_back(pm_add(src[k].first, shift, *L), (c * src[k].second) % 3);
        size_t i = 0;
        while (cap(i) < t.size()) ++i;
        if (runs.size() <= i) runs.resize(i + 1);
        t = merge(runs[i], t);
        runs[i].clear();
        while (t.size() > cap(i)) {
            ++i;
            if (runs.size() <= i) runs.resize(i + 1);
            if (!runs[i].empty()) {
                t = merge(runs[i], t);
                runs[i].clear();
            }
        }
        runs[i] = std::move(t);
    }

    // Largest remaining term; coefficient 0 means empty. Copies of one
    // monomial in different runs combine here and may cancel outright.
    std::pair<PM, int> pop_max() {
        PMLess less{L};
        for (;;) {
            const PM* top = nullptr;
            for (const auto& r : runs)
                if (!r.empty() && (!top || less(*top, r.back().first))) top = &r.back().first;
            if (!top) return {PM{}, 0};
            PM m = *top;
            int c = 0;
            for (auto& r : runs)
                if (!r.empty() && pm_eq(r.back().first, m, L->W)) {
                    c += r.back().second;
                    r.pop_back();
                }
            if (c % 3 != 0) return {m, c % 3};
        }
    }
};

// Full normal form, popping h from the top. Cancelling the leading term only
// introduces strictly smaller monomials, so terms surface at most once and
// irreducible ones collect in descending order; the reducer's own lead
// cancels the popped term exactly, so only its tail goes back in. skip names
// a basis index to ignore, for tail-reducing a basis element against the
// others; live, when given, restricts the reducers to the indices still
// flagged (every retired leading monomial is a multiple of a live one, so
// reducibility is unchanged).
PVec full_reduce(Bucket h, const std::vector<PVec>& basis, const std::vector<PM>& lms,
                 const std::vector<int>& lcs, const Layout& L, int skip = -1,
                 const std::vector<char>* live = nullptr) {
    PVec r;
    for (;;) {
        auto [top, c] = h.pop_max();
        if (c == 0) break;
        int which = -1;
        for (size_t k = 0; k < lms.size(); ++k) {
            if (static_cast<int>(k) == skip) continue;
            if (live && !(*live)[k]) continue;
            if ((lms[k].mask & ~top.mask) != 0) continue;
            if (pm_divides(lms[k], top, L.W)) {
                which = static_cast<int>(k);
                break;
            }
        }
        if (which < 0) {
            r.emplace_back(top, c);
            continue;
        }
        h.add(basis[which], pm_div(top, lms[which], L), (2 * c * inv3(lcs[which])) % 3, 1);
    }
    return r;
}

}  // namespace

Poly normal_form(const Poly& p, const GroebnerBasis& gb) {
    Layout L = make_layout(gb.ring.nvars(), gb.order);
    std::vector<PVec> basis;
    std::vector<PM> lms;
    std::vector<int> lcs;
    basis.reserve(gb.gens.size());
    for (const auto& g : gb.gens) {
        basis.push_back(pack_poly(g, L));
        if (basis.back().empty()) throw Error("normal_form: zero basis element");
        lms.push_back(basis.back().front().first);
        lcs.push_back(basis.back().front().second);
    }
    Bucket h{&L};
    h.add(pack_poly(p, L), PM{}, 1);
    return unpack_poly(full_reduce(std::move(h), basis, lms, lcs, L), L);
}

GroebnerBasis buchberger(const PolyRing& ring, std::vector<Poly> gens, MonomialOrder order,
                         std::vector<int> selection_weights) {
    if (!selection_weights.empty() &&
        selection_weights.size() != static_cast<size_t>(ring.nvars()))
        throw Error("buchberger: selection weight count differs from the variable count");
    Layout lay = make_layout(ring.nvars(), order);
    std::vector<PVec> g;
    std::vector<PM> lms;
    std::vector<int> lcs;
    std::vector<char> live;  // indices whose leading monomial is still minimal

    auto wdeg = [&](const PM& m) {
        if (selection_weights.empty()) return static_cast<int>(m.bd[0] + m.bd[1]);
        int d = 0;
        for (int v = 0; v < lay.n; ++v)
            d += static_cast<int>((m.w[lay.word[v]] >> lay.shift[v]) & 0x7f) *
                 selection_weights[v];
        return d;
    };

    // Pair queue keyed by (lcm selection degree, lcm, i, j) for determinism.
    struct PairKey {
        int deg;
        PM lcm;
        int i, j;
        bool operator<(const PairKey& o) const {
            if (deg != o.deg) return deg < o.deg;
            if (lcm.w != o.lcm.w) return lcm.w < o.lcm.w;
            if (i != o.i) return i < o.i;
            return j < o.j;
        }
    };
    std::set<PairKey> queue;

    // Gebauer-Moller update: among the pairs with the new element keep only
    // those with divisibility-minimal lcm (one per equal-lcm group, preferring
    // support-disjoint pairs which then drop by the product criterion), and
    // retire old pairs whose lcm the new leading monomial properly refines.
    auto update_pairs = [&](int m) {
        std::vector<PM> L;
        L.reserve(m);
        for (int i = 0; i < m; ++i) L.push_back(pm_lcm(lms[i], lms[m], lay));
        std::vector<char> inC(m, 1), inD(m, 0);
        for (int i = 0; i < m; ++i) {
            inC[i] = 0;
            bool keep = (lms[i].mask & lms[m].mask) == 0;
            if (!keep) {
                keep = true;
                for (int j = 0; j < m && keep; ++j)
                    if ((inC[j] || inD[j]) && (L[j].mask & ~L[i].mask) == 0 &&
                        pm_divides(L[j], L[i], lay.W))
                        keep = false;
            }
            if (keep) inD[i] = 1;
        }
        std::vector<PairKey> stale;
        for (const auto& pk : queue) {
            if ((lms[m].mask & ~pk.lcm.mask) != 0 || !pm_divides(lms[m], pk.lcm, lay.W))
                continue;
            if (pm_eq(pm_lcm(lms[pk.i], lms[m], lay), pk.lcm, lay.W)) continue;
            if (pm_eq(pm_lcm(lms[pk.j], lms[m], lay), pk.lcm, lay.W)) continue;
            stale.push_back(pk);
        }
        for (const auto& pk : stale) queue.erase(pk);
        for (int i = 0; i < m; ++i)
            if (inD[i] && (lms[i].mask & lms[m].mask) != 0)
                queue.insert(PairKey{wdeg(L[i]), L[i], i, m});
    };

    auto push = [&](PVec p) {
        const PM& lt = p.front().first;
        for (size_t k = 0; k < lms.size(); ++k)
            if (live[k] && (lt.mask & ~lms[k].mask) == 0 && pm_divides(lt, lms[k], lay.W))
                live[k] = 0;
        lms.push_back(lt);
        lcs.push_back(p.front().second);
        live.push_back(1);
        g.push_back(std::move(p));
        update_pairs(static_cast<int>(g.size()) - 1);
    };

    // Interreduce the inputs as they enter, so no two leading monomials ever
    // coincide (the live flags and tail reduction below rely on that).
    for (auto& p : gens) {
        Bucket h{&lay};
        h.add(pack_poly(p, lay), PM{}, 1);
        PVec q = full_reduce(std::move(h), g, lms, lcs, lay, -1, &live);
        if (!q.empty()) push(std::move(q));
    }

    const bool trace = std::getenv("TATELAB_GRB_TRACE") != nullptr;
    long pops = 0;
    while (!queue.empty()) {
        PairKey pk = *queue.begin();
        queue.erase(queue.begin());
        if (trace && ++pops % 50 == 0)
            fmt::print(stderr, "grb: pops={} basis={} queue={} deg={}\n", pops, g.size(),
                       queue.size(), pk.deg);

        Bucket s{&lay};
        s.add(g[pk.i], pm_div(pk.lcm, lms[pk.i], lay), inv3(lcs[pk.i]));
        s.add(g[pk.j], pm_div(pk.lcm, lms[pk.j], lay), (2 * inv3(lcs[pk.j])) % 3);
        PVec r = full_reduce(std::move(s), g, lms, lcs, lay, -1, &live);
        if (!r.empty()) push(std::move(r));
    }

    // The live leading monomials are exactly the divisibility-minimal ones;
    // tail-reduce those elements against each other and normalize.
    std::vector<Poly> reduced;
    for (size_t idx = 0; idx < g.size(); ++idx) {
        if (!live[idx]) continue;
        Bucket h{&lay};
        h.add(g[idx], PM{}, 1);
        PVec r = full_reduce(std::move(h), g, lms, lcs, lay, static_cast<int>(idx), &live);
        if (r.empty()) continue;
        reduced.push_back(p_scale(unpack_poly(r, lay), inv3(r.front().second)));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const Poly& a, const Poly& b) {
        return order.less(leading_term(a, order).first, leading_term(b, order).first);
    });
    return GroebnerBasis{ring, order, std::move(reduced)};
}

bool contains(const GroebnerBasis& gb, const Poly& p) { return normal_form(p, gb).empty(); }

bool same_ideal(const GroebnerBasis& a, const GroebnerBasis& b) {
    for (const auto& g : b.gens)
        if (!contains(a, g)) return false;
    for (const auto& g : a.gens)
        if (!contains(b, g)) return false;
    return true;
}

namespace {

// q with variable v replaced by image (image must not involve v).
Poly p_subst(const Poly& q, int v, const Poly& image) {
    Poly out;
    for (const auto& [e, c] : q) {
        if (e[v] == 0) {
            out = p_add(out, Poly{{e, c}});
            continue;
        }
        Exp rest = e;
        int k = rest[v];
        rest[v] = 0;
        out = p_add(out, p_mul_term(p_pow(image, k), rest, c));
    }
    return out;
}

}  // namespace

GroebnerBasis algebraic_relations(const PolyRing& ambient,
                                  const std::vector<std::pair<std::string, Poly>>& elements,
                                  const std::vector<Poly>& ambient_quotient) {
    int na = ambient.nvars();
    int nt = static_cast<int>(elements.size());
    PolyRing big;
    big.vars = ambient.vars;
    for (const auto& [name, p] : elements) {
        (void)p;
        big.vars.push_back(name);
    }

    auto lift = [&](const Poly& p) {
        Poly r;
        for (const auto& [e, c] : p) {
            Exp w(na + nt, 0);
            std::copy(e.begin(), e.end(), w.begin());
            r[w] = c;
        }
        return r;
    };

    std::vector<Poly> work;
    for (int k = 0; k < nt; ++k)
        work.push_back(p_sub(p_var(big, na + k), lift(elements[k].second)));
    for (const auto& q : ambient_quotient) work.push_back(lift(q));

    // Pair selection by weighted degree (tag weight = degree of its element)
    // keeps the run degree-by-degree when every element is homogeneous.
    std::vector<int> weights(na + nt, 1);
    bool weighted = true;
    for (int k = 0; k < nt && weighted; ++k) {
        const Poly& p = elements[k].second;
        if (p.empty()) continue;
        int d = total_deg(p.begin()->first);
        for (const auto& [e, c] : p) {
            (void)c;
            if (total_deg(e) != d) weighted = false;
        }
        weights[na + k] = d;
    }
    for (const auto& q : ambient_quotient) {
        if (q.empty()) continue;
        int d = total_deg(q.begin()->first);
        for (const auto& [e, c] : q) {
            (void)c;
            if (total_deg(e) != d) weighted = false;
        }
    }
    if (!weighted) weights.clear();

    // A generator of the form u*x + h with u a nonzero constant, x ambient and
    // h free of x just solves for x: substitute it away and drop the
    // generator. The elimination ideal is unchanged.
    std::vector<char> gone(na, 0);
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t w = 0; w < work.size() && !progress; ++w) {
            for (int v = 0; v < na && !progress; ++v) {
                if (gone[v]) continue;
                int lin = 0;
                bool clean = true;
                for (const auto& [e, c] : work[w]) {
                    if (e[v] == 0) continue;
                    if (e[v] == 1 && total_deg(e) == 1 && lin == 0)
                        lin = c;
                    else
                        clean = false;
                    if (!clean) break;
                }
                if (!clean || lin == 0) continue;
                Poly h;
                for (const auto& [e, c] : work[w])
                    if (e[v] == 0) h[e] = c;
                Poly image = p_scale(h, 3 - inv3(lin));
                for (size_t u = 0; u < work.size(); ++u)
                    if (u != w) work[u] = p_subst(work[u], v, image);
                work.erase(work.begin() + static_cast<long>(w));
                gone[v] = 1;
                progress = true;
            }
        }
    }

    // Compact away the substituted columns.
    std::vector<int> cols;
    PolyRing big2;
    for (int v = 0; v < na; ++v)
        if (!gone[v]) {
            cols.push_back(v);
            big2.vars.push_back(ambient.vars[v]);
        }
    int na2 = static_cast<int>(big2.vars.size());
    for (int k = 0; k < nt; ++k) {
        cols.push_back(na + k);
        big2.vars.push_back(elements[k].first);
    }
    std::vector<Poly> gens;
    for (const auto& p : work) {
        Poly r;
        for (const auto& [e, c] : p) {
            Exp w(cols.size());
            for (size_t k = 0; k < cols.size(); ++k) w[k] = e[cols[k]];
            r[w] = c;
        }
        gens.push_back(std::move(r));
    }
    std::vector<int> weights2;
    if (!weights.empty())
        for (int col : cols) weights2.push_back(weights[col]);

    MonomialOrder elim{MonomialOrder::Kind::grevlex, na2};
    GroebnerBasis full = buchberger(big2, std::move(gens), elim, std::move(weights2));

    PolyRing tags;
    for (const auto& [name, p] : elements) {
        (void)p;
        tags.vars.push_back(name);
    }
    GroebnerBasis out{tags, MonomialOrder{}, {}};
    for (const auto& p : full.gens) {
        bool tag_only = true;
        for (const auto& [e, c] : p) {
            (void)c;
            if (slice_deg(e, 0, na2) != 0) {
                tag_only = false;
                break;
            }
        }
        if (!tag_only) continue;
        Poly r;
        for (const auto& [e, c] : p) r[Exp(e.begin() + na2, e.end())] = c;
        out.gens.push_back(std::move(r));
    }
    std::sort(out.gens.begin(), out.gens.end(), [&](const Poly& a, const Poly& b) {
        return out.order.less(leading_term(a, out.order).first, leading_term(b, out.order).first);
    });
    return out;
}

namespace {

struct Parser {
    const PolyRing& ring;
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
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }

    Poly expr() {
        Poly r = eat('-') ? p_scale(term(), 2) : term();
        while (true) {
            if (eat('+'))
                r = p_add(r, term());
            else if (eat('-'))
                r = p_sub(r, term());
            else
                break;
        }
        return r;
    }

    Poly term() {
        Poly r = factor();
        while (eat('*')) r = p_mul(r, factor());
        return r;
    }

    Poly factor() {
        Poly b = base();
        if (eat('^')) {
            skip();
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) throw Error(fmt::format("parse_poly: exponent expected at {}", start));
            b = p_pow(b, std::stoi(s.substr(start, pos - start)));
            if (b.empty() && std::stoi(s.substr(start, pos - start)) == 0)
                b = p_const(ring, 1);
        }
        return b;
    }

    Poly base() {
        skip();
        if (eat('(')) {
            Poly r = expr();
            if (!eat(')')) throw Error("parse_poly: missing closing parenthesis");
            return r;
        }
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            return p_const(ring, std::stoi(s.substr(start, pos - start)));
        }
        if (pos < s.size() &&
            (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            size_t start = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            return p_var(ring, ring.index(s.substr(start, pos - start)));
        }
        throw Error(fmt::format("parse_poly: unexpected character at {} in \"{}\"", pos, s));
    }
};

}  // namespace

Poly parse_poly(const PolyRing& ring, const std::string& text) {
    Parser p{ring, text};
    Poly r = p.expr();
    p.skip();
    if (p.pos != text.size())
        throw Error(fmt::format("parse_poly: trailing input at {} in \"{}\"", p.pos, text));
    return r;
}

std::string poly_str(const PolyRing& ring, const Poly& p, const MonomialOrder& ord) {
    if (p.empty()) return "0";
    std::vector<const std::pair<const Exp, int>*> terms;
    for (const auto& t : p) terms.push_back(&t);
    std::sort(terms.begin(), terms.end(),
              [&](auto* a, auto* b) { return ord.greater(a->first, b->first); });
    std::string out;
    for (auto* t : terms) {
        bool neg = t->second == 2;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string mono;
        for (size_t i = 0; i < t->first.size(); ++i) {
            if (t->first[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += ring.vars[i];
            if (t->first[i] > 1) mono += fmt::format("^{}", t->first[i]);
        }
        out += mono.empty() ? "1" : mono;
    }
    return out;
}

}  // namespace tatelab::grb
