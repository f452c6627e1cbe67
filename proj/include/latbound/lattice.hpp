#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "latbound/matrix.hpp"

namespace latbound {

// An integer lattice presented by the Gram matrix of a fixed basis.  Vectors
// are integer coordinate tuples in that basis.  The library's sign
// convention keeps Gram matrices negative definite; a handful of internal
// routines flip to the positive definite mirror where that is more natural.
struct Lattice {
    IntMat gram;

    Lattice() = default;
    explicit Lattice(IntMat g) : gram(std::move(g)) {
        if (gram.rows != gram.cols) throw BadInput("Gram matrix must be square");
        for (int r = 0; r < gram.rows; ++r)
            for (int c = r + 1; c < gram.cols; ++c)
                if (gram(r, c) != gram(c, r))
                    throw BadInput("Gram matrix must be symmetric");
    }

    int rank() const { return gram.rows; }

    bool operator==(const Lattice& o) const { return gram == o.gram; }

    static Lattice empty() { return Lattice(IntMat(0, 0)); }

    static Lattice diagonal(const std::vector<Int>& d) {
        IntMat g((int)d.size(), (int)d.size());
        for (int i = 0; i < (int)d.size(); ++i) g(i, i) = d[i];
        return Lattice(g);
    }

    // <-1>^n, the standard negative definite diagonal lattice.
    static Lattice standard_diagonal(int n) {
        return diagonal(std::vector<Int>(n, Int(-1)));
    }
};

inline Int determinant(const Lattice& L) { return det_int(L.gram); }

inline bool is_negative_definite(const Lattice& L) {
    auto mins = leading_minors(L.gram);
    if ((int)mins.size() < L.rank()) return false;
    for (int k = 0; k < L.rank(); ++k) {
        bool want_neg = (k % 2 == 0);
        if (want_neg ? mins[k] >= 0 : mins[k] <= 0) return false;
    }
    return true;
}

inline Lattice direct_sum(const Lattice& a, const Lattice& b) {
    IntMat g(a.rank() + b.rank(), a.rank() + b.rank());
    for (int r = 0; r < a.rank(); ++r)
        for (int c = 0; c < a.rank(); ++c) g(r, c) = a.gram(r, c);
    for (int r = 0; r < b.rank(); ++r)
        for (int c = 0; c < b.rank(); ++c) g(a.rank() + r, a.rank() + c) = b.gram(r, c);
    return Lattice(std::move(g));
}

// Gram matrix of the dual basis, i.e. the inverse Gram matrix.
inline RatMat dual_gram(const Lattice& L) {
    if (L.rank() == 0) return RatMat(0, 0);
    return inverse_rat(L.gram);
}

inline Int pairing(const Lattice& L, const IntVec& x, const IntVec& y) {
    int n = L.rank();
    if ((int)x.size() != n || (int)y.size() != n)
        throw BadInput("vector length does not match lattice rank");
    Int s = 0;
    for (int r = 0; r < n; ++r) {
        if (x[r] == 0) continue;
        Int row = 0;
        for (int c = 0; c < n; ++c) row += L.gram(r, c) * y[c];
        s += x[r] * row;
    }
    return s;
}

inline Int vec_norm(const Lattice& L, const IntVec& x) { return pairing(L, x, x); }

struct ShortVector {
    IntVec coords;
    Int norm; // signed value x^T G x
};

namespace detail {

// LDL^T data for a positive definite rational form:
//   Q(x) = sum_k d[k] * (x_k + sum_{i>k} l(i,k) x_i)^2
struct Ldl {
    int n = 0;
    RatVec d;
    RatMat l;
};

inline Ldl ldl_decompose(const RatMat& P) {
    Ldl out;
    out.n = P.rows;
    out.d.assign(out.n, Rat(0));
    out.l = RatMat(out.n, out.n);
    RatMat A = P;
    for (int k = 0; k < out.n; ++k) {
        if (A(k, k) <= 0) throw NotDefinite("form is not positive definite");
        out.d[k] = A(k, k);
        for (int i = k + 1; i < out.n; ++i) out.l(i, k) = A(i, k) / A(k, k);
        for (int i = k + 1; i < out.n; ++i)
            for (int j = k + 1; j < out.n; ++j)
                A(i, j) -= out.l(i, k) * out.d[k] * out.l(j, k);
    }
    return out;
}

// Rational upper bound for sqrt(q), q >= 0.
inline Rat sqrt_upper(const Rat& q) {
    if (q < 0) throw BadInput("sqrt of negative rational");
    Int p = num(q), d = den(q);
    // sqrt(p/d) = sqrt(p*d)/d
    return Rat(isqrt(p * d) + 1, d);
}

template <typename Fn>
void fp_enumerate_level(const Ldl& ldl, const Rat& bound,
                        IntVec& x, int k, const Rat& used, bool nonzero_seen,
                        Fn&& emit) {
    if (k < 0) {
        if (nonzero_seen) emit(x, used);
        return;
    }
    Rat room = bound - used;
    if (room < 0) return;
    Rat c = 0;
    for (int i = k + 1; i < ldl.n; ++i)
        if (x[i] != 0) c += ldl.l(i, k) * x[i];
    Rat radius = sqrt_upper(room / ldl.d[k]);
    Int lo = ceil_rat(-c - radius);
    Int hi = floor_rat(-c + radius);
    if (!nonzero_seen && lo < 0) lo = 0;
    for (Int v = lo; v <= hi; ++v) {
        Rat t = Rat(v) + c;
        Rat add = ldl.d[k] * t * t;
        if (used + add > bound) continue;
        x[k] = v;
        fp_enumerate_level(ldl, bound, x, k - 1, used + add,
                           nonzero_seen || v != 0, emit);
        x[k] = 0;
    }
}

// All x != 0 with x^T P x <= bound, up to sign (the highest-index nonzero
// coordinate is positive).  P must be positive definite.
template <typename Fn>
void fp_enumerate(const RatMat& P, const Rat& bound, Fn&& emit) {
    if (P.rows == 0 || bound < 0) return;
    Ldl ldl = ldl_decompose(P);
    IntVec x(ldl.n, Int(0));
    fp_enumerate_level(ldl, bound, x, ldl.n - 1, Rat(0), false, emit);
}

inline bool coords_less(const IntVec& a, const IntVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace detail

// All nonzero v with |v . v| <= bound, one per {v, -v} pair, sorted by
// (|norm|, coordinates).  The lattice must be negative definite.
inline std::vector<ShortVector> shortest_vectors(const Lattice& L, const Int& bound) {
    if (!is_negative_definite(L)) throw NotDefinite("shortest_vectors needs a definite lattice");
    std::vector<ShortVector> out;
    if (L.rank() == 0 || bound <= 0) return out;
    RatMat P(L.rank(), L.rank());
    for (int r = 0; r < L.rank(); ++r)
        for (int c = 0; c < L.rank(); ++c) P(r, c) = Rat(-L.gram(r, c));
    detail::fp_enumerate(P, Rat(bound), [&](const IntVec& x, const Rat& q) {
        out.push_back(ShortVector{x, -num(q)});
    });
    std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) {
        Int na = abs_int(a.norm), nb = abs_int(b.norm);
        if (na != nb) return na < nb;
        return detail::coords_less(a.coords, b.coords);
    });
    return out;
}

struct StableReduction {
    Lattice core;       // no vectors of square -1 remain
    int split_count = 0; // number of <-1> summands split off
};

// Split off <-1> summands until none remain.  The result is the reduced part
// of the stable equivalence class.
inline StableReduction reduce_stable(const Lattice& L) {
    if (!is_negative_definite(L)) throw NotDefinite("reduce_stable needs a definite lattice");
    Lattice cur = L;
    int m = 0;
    for (;;) {
        int n = cur.rank();
        if (n == 0) break;
        auto sv = shortest_vectors(cur, 1);
        if (sv.empty()) break;
        const IntVec& v = sv.front().coords;
        // rows e_i + (v_i . v) v span exactly the orthogonal complement of v
        IntVec gv(n, Int(0));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) gv[r] += cur.gram(r, c) * v[c];
        IntMat W(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                W(r, c) = (r == c ? Int(1) : Int(0)) + gv[r] * v[c];
        IntMat B = hnf_rows(W);
        if (B.rows != n - 1) throw DegenerateSublattice("unexpected complement rank");
        IntMat G = mat_mul(mat_mul(B, cur.gram), B.transposed());
        cur = Lattice(std::move(G));
        ++m;
    }
    return StableReduction{cur, m};
}

// Sublattice of vectors orthogonal to every v in vs, with its restricted
// Gram matrix.  vs must be linearly independent.
inline Lattice orthogonal_complement(const Lattice& L, const std::vector<IntVec>& vs) {
    int n = L.rank(), k = (int)vs.size();
    IntMat A(k, n);
    for (int r = 0; r < k; ++r) {
        if ((int)vs[r].size() != n) throw BadInput("vector length does not match lattice rank");
        for (int c = 0; c < n; ++c) {
            Int s = 0;
            for (int j = 0; j < n; ++j) s += vs[r][j] * L.gram(j, c);
            A(r, c) = s;
        }
    }
    IntMat K = kernel_int(A);
    if (K.rows != n - k) throw DegenerateSublattice("spanning vectors are not independent");
    IntMat G = mat_mul(mat_mul(K, L.gram), K.transposed());
    Lattice out(std::move(G));
    if (out.rank() > 0 && determinant(out) == 0)
        throw DegenerateSublattice("restricted pairing is degenerate");
    return out;
}

namespace detail {

// Candidate images for isometry search, bucketed by norm.
inline std::map<Int, std::vector<IntVec>> norm_buckets(const Lattice& L, const Int& bound) {
    std::map<Int, std::vector<IntVec>> buckets;
    for (const auto& sv : shortest_vectors(L, bound)) buckets[abs_int(sv.norm)].push_back(sv.coords);
    return buckets;
}

inline IntVec negated(const IntVec& v) {
    IntVec w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = -v[i];
    return w;
}

// Find integer solutions x of  x = x0 + t*u  (t rational) with
// x^T G x = target.  Appends at most two candidates.
inline void solve_norm_on_line(const Lattice& L, const RatVec& x0, const RatVec& u,
                               const Int& target, std::vector<IntVec>& out) {
    int n = L.rank();
    auto pair_rr = [&](const RatVec& a, const RatVec& b) {
        Rat s = 0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) s += a[r] * Rat(L.gram(r, c)) * b[c];
        return s;
    };
    Rat A = pair_rr(u, u);
    Rat B = 2 * pair_rr(x0, u);
    Rat C = pair_rr(x0, x0) - Rat(target);
    std::vector<Rat> roots;
    if (A == 0) {
        if (B != 0) roots.push_back(-C / B);
        else if (C == 0) roots.push_back(Rat(0));
    } else {
        Rat disc = B * B - 4 * A * C;
        if (disc < 0) return;
        Int dn = num(disc), dd = den(disc);
        Int rn, rd;
        if (!is_perfect_square(dn, rn) || !is_perfect_square(dd, rd)) return;
        Rat s(rn, rd);
        roots.push_back((-B + s) / (2 * A));
        if (s != 0) roots.push_back((-B - s) / (2 * A));
    }
    for (const Rat& t : roots) {
        IntVec x(n);
        bool integral = true;
        for (int i = 0; i < n && integral; ++i) {
            Rat xi = x0[i] + t * u[i];
            if (den(xi) != 1) integral = false;
            else x[i] = num(xi);
        }
        if (integral) out.push_back(std::move(x));
    }
}

struct IsoSearch {
    const Lattice* L1;
    const Lattice* L2;
    std::vector<int> order;            // slot order; last entry solved on a line
    std::map<Int, std::vector<IntVec>> buckets;
    std::vector<IntVec> images;        // parallel to order prefix
    std::optional<IntMat> witness;

    bool pair_ok(const IntVec& cand, int depth) const {
        int slot = order[depth];
        for (int d = 0; d < depth; ++d)
            if (pairing(*L2, cand, images[d]) != L1->gram(slot, order[d])) return false;
        return true;
    }

    bool finish() {
        int n = L1->rank();
        IntMat U(n, n);
        for (int d = 0; d < n; ++d)
            for (int r = 0; r < n; ++r) U(r, order[d]) = images[d][r];
        IntMat G = mat_mul(mat_mul(U.transposed(), L2->gram), U);
        if (!(G == L1->gram)) return false;
        witness = U;
        return true;
    }

    bool dfs(int depth) {
        int n = L1->rank();
        if (depth == n) return finish();
        int slot = order[depth];
        if (depth == n - 1) {
            // images of the other n-1 basis vectors pin this one to a line
            RatMat A(depth, n);
            RatVec b(depth);
            for (int d = 0; d < depth; ++d) {
                for (int c = 0; c < n; ++c) {
                    Rat s = 0;
                    for (int j = 0; j < n; ++j) s += Rat(images[d][j]) * Rat(L2->gram(j, c));
                    A(d, c) = s;
                }
                b[d] = Rat(L1->gram(slot, order[d]));
            }
            auto sol = solve_rat(A, b);
            if (!sol) return false;
            std::vector<IntVec> cands;
            if (sol->second.size() == 1) {
                solve_norm_on_line(*L2, sol->first, sol->second[0], L1->gram(slot, slot), cands);
            } else if (sol->second.empty()) {
                // fully pinned; accept the unique point if integral
                solve_norm_on_line(*L2, sol->first, RatVec(n, Rat(0)), L1->gram(slot, slot), cands);
            } else {
                return false;
            }
            for (auto& cand : cands) {
                if (!pair_ok(cand, depth)) continue;
                images.push_back(cand);
                if (dfs(depth + 1)) return true;
                images.pop_back();
            }
            return false;
        }
        auto it = buckets.find(abs_int(L1->gram(slot, slot)));
        if (it == buckets.end()) return false;
        for (const IntVec& w : it->second) {
            for (int sign = 0; sign < (depth == 0 ? 1 : 2); ++sign) {
                IntVec cand = sign == 0 ? w : negated(w);
                if (!pair_ok(cand, depth)) continue;
                images.push_back(std::move(cand));
                if (dfs(depth + 1)) return true;
                images.pop_back();
            }
        }
        return false;
    }
};

} // namespace detail

// Isometry witness U with U^T G2 U = G1 (columns are images of L1's basis),
// or nullopt.  Both lattices must be negative definite.
inline std::optional<IntMat> is_isometric(const Lattice& L1, const Lattice& L2) {
    int n = L1.rank();
    if (n != L2.rank()) return std::nullopt;
    if (n == 0) return IntMat(0, 0);
    if (!is_negative_definite(L1) || !is_negative_definite(L2))
        throw NotDefinite("is_isometric needs definite lattices");
    if (determinant(L1) != determinant(L2)) return std::nullopt;
    if (L1.gram == L2.gram) return IntMat::identity(n);
    // cheap invariant: counts of vectors by norm up to 4
    {
        auto c1 = shortest_vectors(L1, 4), c2 = shortest_vectors(L2, 4);
        if (c1.size() != c2.size()) return std::nullopt;
        std::multiset<Int> n1, n2;
        for (auto& s : c1) n1.insert(s.norm);
        for (auto& s : c2) n2.insert(s.norm);
        if (n1 != n2) return std::nullopt;
    }

    // schedule: the single largest-norm slot is solved analytically at the
    // end, so candidate enumeration only needs the second-largest norm
    std::vector<int> slots(n);
    for (int i = 0; i < n; ++i) slots[i] = i;
    int last = 0;
    for (int i = 1; i < n; ++i)
        if (abs_int(L1.gram(i, i)) > abs_int(L1.gram(last, last))) last = i;
    Int bucket_bound = 1;
    for (int i = 0; i < n; ++i)
        if (i != last) bucket_bound = std::max(bucket_bound, abs_int(L1.gram(i, i)));

    detail::IsoSearch s;
    s.L1 = &L1;
    s.L2 = &L2;
    s.buckets = detail::norm_buckets(L2, bucket_bound);

    // order remaining slots greedily: most pairing constraints to the
    // already-ordered ones, tie-broken by smaller candidate bucket
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
        if (i != last) rest.push_back(i);
    std::vector<int> order;
    std::vector<bool> used(n, false);
    auto bucket_size = [&](int i) {
        auto it = s.buckets.find(abs_int(L1.gram(i, i)));
        return it == s.buckets.end() ? size_t(0) : it->second.size();
    };
    while (order.size() < rest.size()) {
        int best = -1;
        int best_links = -1;
        size_t best_bucket = 0;
        for (int i : rest) {
            if (used[i]) continue;
            int links = 0;
            for (int j : order)
                if (L1.gram(i, j) != 0) ++links;
            size_t bsz = bucket_size(i);
            if (best < 0 || links > best_links ||
                (links == best_links && bsz < best_bucket)) {
                best = i;
                best_links = links;
                best_bucket = bsz;
            }
        }
        order.push_back(best);
        used[best] = true;
    }
    order.push_back(last);
    s.order = std::move(order);
    s.dfs(0);
    return s.witness;
}

// Deterministic total order on lattices: by rank, then Gram entries.
inline bool lattice_less(const Lattice& a, const Lattice& b) {
    if (a.rank() != b.rank()) return a.rank() < b.rank();
    return std::lexicographical_compare(a.gram.a.begin(), a.gram.a.end(),
                                        b.gram.a.begin(), b.gram.a.end());
}

} // namespace latbound
