#include "tatelab/cyclic_cohomology.hpp"

#include <fmt/format.h>

namespace tatelab::cyclic {

namespace {

IntMat power(const IntMat& g, int e) {
    IntMat p = IntMat::identity(g.rows());
    for (int i = 0; i < e; ++i)
        p = p * g;
    return p;
}

// Representative of v mod m in the symmetric range.
Int smod(const Int& v, const Int& m) {
    Int r = v % m;
    if (r < 0)
        r += m;
    if (2 * r > m)
        r -= m;
    return r;
}

Int pmod(const Int& v, const Int& m) {
    Int r = v % m;
    if (r < 0)
        r += m;
    return r;
}

}  // namespace

Int TateGroup::order() const {
    Int o = 1;
    for (const Int& f : factors)
        o *= f;
    return o;
}

std::string TateGroup::str() const {
    if (factors.empty())
        return "0";
    std::string s;
    for (size_t i = 0; i < factors.size(); ++i)
        s += fmt::format("{}Z/{}", i ? " + " : "", factors[i].str());
    return s;
}

TateGroup tate_cohomology(const IntMat& gamma, int n, int parity) {
    if (gamma.rows() != gamma.cols())
        throw Error("tate_cohomology: action matrix must be square");
    if (n <= 0)
        throw Error("tate_cohomology: group order must be positive");
    if (parity != 0 && parity != 1)
        throw Error("tate_cohomology: parity must be 0 or 1");
    const int dim = gamma.rows();

    IntMat norm(dim, dim);
    IntMat pw = IntMat::identity(dim);
    for (int i = 0; i < n; ++i) {
        norm = norm + pw;
        pw = pw * gamma;
    }
    if (!(pw == IntMat::identity(dim)))
        throw Error(fmt::format("tate_cohomology: action does not have order dividing {}", n));
    IntMat diff = IntMat::identity(dim) - gamma;

    const IntMat& ker_mat = parity == 0 ? diff : norm;
    const IntMat& im_mat = parity == 0 ? norm : diff;

    TateGroup g;
    g.n = n;
    g.parity = parity;
    g.gamma = gamma;

    IntMat kb = kernel_basis(ker_mat);
    SnfResult sk = smith_normal_form(kb);
    const int r = sk.rank;

    // Coordinates of the coboundary generators in the cocycle lattice; the
    // containment is automatic since (1-g) and the norm annihilate each other.
    IntMat um = sk.u * im_mat;
    IntMat coords(r, im_mat.cols());
    for (int j = 0; j < im_mat.cols(); ++j) {
        for (int i = 0; i < um.rows(); ++i) {
            if (i < r) {
                if (um.at(i, j) % sk.d.at(i, i) != 0)
                    throw Error("tate_cohomology: coboundary left the cocycle lattice");
                coords.at(i, j) = um.at(i, j) / sk.d.at(i, i);
            } else if (um.at(i, j) != 0) {
                throw Error("tate_cohomology: coboundary left the cocycle lattice");
            }
        }
    }

    SnfResult sc = smith_normal_form(coords);
    if (sc.rank < r)
        throw Error("tate_cohomology: subquotient has an infinite part");

    for (int i = 0; i < r; ++i) {
        Int f = sc.d.at(i, i);
        if (f == 1)
            continue;
        if (n % f != 0)
            throw Error(fmt::format("tate_cohomology: invariant factor {} does not divide {}",
                                    f.str(), n));
        // Representative: the adapted basis column, with cocycle-lattice
        // coordinates reduced mod n (n times a cocycle is a coboundary).
        std::vector<Int> rep(dim);
        for (int l = 0; l < r; ++l) {
            Int c = smod(sc.u_inv.at(l, i), n);
            if (c == 0)
                continue;
            for (int k = 0; k < dim; ++k)
                rep[k] += c * sk.d.at(l, l) * sk.u_inv.at(k, l);
        }
        g.factors.push_back(f);
        g.reps.push_back(std::move(rep));
        g.kept.push_back(i);
    }

    g.ker_u = sk.u;
    g.ker_d.resize(r);
    for (int i = 0; i < r; ++i)
        g.ker_d[i] = sk.d.at(i, i);
    g.coord_u = sc.u;
    return g;
}

TateGroup tate_cohomology(const gca::RingMap& gamma, int n, int parity,
                          const std::vector<int>& deg) {
    if (gamma.algebra().characteristic() != 0)
        throw Error("tate_cohomology: integral subquotients need a characteristic-zero algebra");
    TateGroup g = tate_cohomology(gamma.matrix_in_degree(deg), n, parity);
    g.deg = deg;
    return g;
}

std::vector<Int> class_coords(const TateGroup& g, const std::vector<Int>& x) {
    if (int(x.size()) != g.ker_u.cols())
        throw Error("class_coords: vector has the wrong dimension");
    std::vector<Int> w = g.ker_u * x;
    const int r = int(g.ker_d.size());
    for (int i = r; i < int(w.size()); ++i)
        if (w[i] != 0)
            throw Error("class_coords: vector is not a cocycle");
    std::vector<Int> y(r);
    for (int i = 0; i < r; ++i) {
        if (w[i] % g.ker_d[i] != 0)
            throw Error("class_coords: vector is not a cocycle");
        y[i] = w[i] / g.ker_d[i];
    }
    std::vector<Int> a = g.coord_u * y;
    std::vector<Int> out(g.factors.size());
    for (size_t j = 0; j < g.factors.size(); ++j)
        out[j] = pmod(a[g.kept[j]], g.factors[j]);
    return out;
}

InvariantLattice h0(const IntMat& gamma) {
    if (gamma.rows() != gamma.cols())
        throw Error("h0: action matrix must be square");
    InvariantLattice inv;
    inv.basis = kernel_basis(IntMat::identity(gamma.rows()) - gamma);
    inv.rank = inv.basis.cols();
    return inv;
}

IntMat induced_outer_action(const TateGroup& g, const IntMat& outer) {
    if (!(outer * g.gamma == g.gamma * outer))
        throw Error("induced_outer_action: operator does not commute with the cyclic action");
    const int m = int(g.factors.size());
    IntMat act(m, m);
    for (int j = 0; j < m; ++j) {
        std::vector<Int> c = class_coords(g, outer * g.reps[j]);
        for (int i = 0; i < m; ++i)
            act.at(i, j) = c[i];
    }
    return act;
}

C3DecompositionCounts decompose_c3(const F3Mat& g) {
    if (g.rows() != g.cols())
        throw Error("decompose_c3: matrix must be square");
    F3Mat b = g - F3Mat::identity(g.rows());
    F3Mat b2 = b * b;
    if (!(b2 * b).is_zero())
        throw Error("decompose_c3: action is not order-3 unipotent");
    int r1 = b.rank();
    int r2 = b2.rank();
    C3DecompositionCounts counts;
    counts.m_free = r2;
    counts.m_two = r1 - 2 * r2;
    counts.m_triv = g.rows() - 2 * r1 + r2;
    return counts;
}

std::vector<Int> restrict_cocycle(const IntMat& gamma, int k, int parity,
                                  const std::vector<Int>& x) {
    if (parity == 0)
        return x;
    std::vector<Int> out(x.size());
    std::vector<Int> v = x;
    for (int i = 0; i < k; ++i) {
        for (size_t j = 0; j < out.size(); ++j)
            out[j] += v[j];
        if (i + 1 < k)
            v = gamma * v;
    }
    return out;
}

IntMat restriction_matrix(const TateGroup& src, const TateGroup& tgt, int k) {
    if (src.parity != tgt.parity)
        throw Error("restriction_matrix: parities differ");
    if (k <= 0 || src.n != k * tgt.n)
        throw Error(fmt::format("restriction_matrix: order {} is not index {} over order {}",
                                src.n, k, tgt.n));
    if (!(tgt.gamma == power(src.gamma, k)))
        throw Error("restriction_matrix: target group does not act through gamma^k");
    IntMat m(int(tgt.factors.size()), int(src.factors.size()));
    for (int j = 0; j < int(src.factors.size()); ++j) {
        std::vector<Int> c =
            class_coords(tgt, restrict_cocycle(src.gamma, k, src.parity, src.reps[j]));
        for (int i = 0; i < m.rows(); ++i)
            m.at(i, j) = c[i];
    }
    return m;
}

std::vector<Int> inflate_cocycle(int k, int degree, const std::vector<Int>& x) {
    if (degree < 0)
        throw Error("inflate_cocycle: inflation is defined in nonnegative degrees");
    Int f = 1;
    for (int i = 0; i < degree / 2; ++i)
        f *= k;
    std::vector<Int> out(x.size());
    for (size_t j = 0; j < x.size(); ++j)
        out[j] = f * x[j];
    return out;
}

gca::Element cup_product(const gca::Algebra& a, const gca::RingMap& gamma, int n,
                         int px, const gca::Element& x,
                         int py, const gca::Element& y) {
    const bool ox = ((px % 2) + 2) % 2 == 1;
    const bool oy = ((py % 2) + 2) % 2 == 1;
    if (!ox)
        return a.mul(x, y);
    if (!oy)
        return a.mul(x, gamma.apply(y));
    std::vector<gca::Element> xs(n), ys(n);
    xs[0] = x;
    ys[0] = y;
    for (int i = 1; i < n; ++i) {
        xs[i] = gamma.apply(xs[i - 1]);
        ys[i] = gamma.apply(ys[i - 1]);
    }
    gca::Element sum = a.zero();
    for (int s = 0; s < n; ++s)
        for (int t = s + 1; t < n; ++t)
            sum = a.add(sum, a.mul(xs[s], ys[t]));
    return a.scale(sum, -1);
}

F3TateDims tate_f3_dims(const F3Mat& gamma, int n) {
    if (gamma.rows() != gamma.cols())
        throw Error("tate_f3_dims: action matrix must be square");
    const int dim = gamma.rows();
    F3Mat norm(dim, dim);
    F3Mat pw = F3Mat::identity(dim);
    for (int i = 0; i < n; ++i) {
        norm = norm + pw;
        pw = pw * gamma;
    }
    if (!(pw == F3Mat::identity(dim)))
        throw Error(fmt::format("tate_f3_dims: action does not have order dividing {}", n));
    F3Mat diff = F3Mat::identity(dim) - gamma;
    int rd = diff.rank();
    int rn = norm.rank();
    F3TateDims dims;
    dims.even = (dim - rd) - rn;
    dims.odd = (dim - rn) - rd;
    return dims;
}

}  // namespace tatelab::cyclic
