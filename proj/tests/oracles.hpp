#pragma once

// Slow reference implementations the tests check the library against.
// Everything here favors being obviously correct over speed: cofactor
// determinants, adjugate inverses, and box searches with explicit bounds.

#include <latbound/lattice.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using latbound::Int;
using latbound::IntMat;
using latbound::IntVec;
using latbound::Lattice;
using latbound::Rat;
using latbound::RatMat;

// Determinant by cofactor expansion along the first row.
inline Int cofactor_det(const IntMat& m) {
    if (m.rows != m.cols) throw latbound::BadInput("cofactor_det: not square");
    int n = m.rows;
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    Int total = 0;
    for (int j = 0; j < n; ++j) {
        if (m(0, j) == 0) continue;
        IntMat minor(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        Int term = m(0, j) * cofactor_det(minor);
        total += (j % 2 == 0) ? term : -term;
    }
    return total;
}

// Inverse via the adjugate: inv(i,j) = cofactor(j,i) / det.
inline RatMat adjugate_inverse(const IntMat& m) {
    int n = m.rows;
    Int d = cofactor_det(m);
    if (d == 0) throw latbound::SingularGram("adjugate_inverse: singular");
    RatMat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMat minor(n - 1, n - 1);
            int rr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == j) continue;
                int cc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(rr, cc++) = m(r, c);
                }
                ++rr;
            }
            Int cof = cofactor_det(minor);
            if ((i + j) % 2 != 0) cof = -cof;
            inv(i, j) = Rat(cof) / Rat(d);
        }
    return inv;
}

// xi^T inv(G) xi computed with the adjugate inverse.
inline Rat covector_norm(const Lattice& L, const IntVec& xi) {
    if (L.rank() == 0) return Rat(0);
    RatMat inv = adjugate_inverse(L.gram);
    Rat s = 0;
    for (int r = 0; r < L.rank(); ++r)
        for (int c = 0; c < L.rank(); ++c) s += Rat(xi[r]) * inv(r, c) * Rat(xi[c]);
    return s;
}

// Minimal |xi^T inv(G) xi| over covectors with xi_i = G_ii (mod 2), by
// exhausting a box.  The diagonal covector xi0 gives a value c, and any
// covector at or below c lies in |xi_i| <= sqrt(c |G_ii|): with A = -inv(G)
// positive definite, x^T A x <= c forces x_i^2 <= c (A^-1)_ii = c |G_ii|.
inline std::pair<Rat, IntVec> box_min_char_norm(const Lattice& L) {
    int n = L.rank();
    if (n == 0) return {Rat(0), IntVec{}};
    IntVec xi0(n);
    for (int i = 0; i < n; ++i) xi0[i] = L.gram(i, i);
    Rat cap = -covector_norm(L, xi0);
    std::vector<Int> hi(n);
    for (int i = 0; i < n; ++i)
        hi[i] = latbound::isqrt(latbound::floor_rat(cap * Rat(-L.gram(i, i))));
    IntVec cur(n);
    Rat best = cap;
    IntVec best_xi = xi0;
    // odometer over the box, stepping each coordinate by 2 to keep parity
    std::vector<Int> lo(n);
    for (int i = 0; i < n; ++i) {
        Int start = -hi[i];
        if (((start - L.gram(i, i)) % 2) != 0) start += 1;
        lo[i] = start;
        cur[i] = start;
    }
    while (true) {
        Rat v = -covector_norm(L, cur);
        if (v < best) {
            best = v;
            best_xi = cur;
        }
        int k = 0;
        while (k < n) {
            cur[k] += 2;
            if (cur[k] <= hi[k]) break;
            cur[k] = lo[k];
            ++k;
        }
        if (k == n) break;
    }
    return {best, best_xi};
}

// Nonzero v with |v^T G v| <= bound, one per +-pair, by exhausting the box
// |v_i| <= sqrt(bound |inv(G)_ii|) that contains the ellipsoid.
inline std::vector<IntVec> box_short_vectors(const Lattice& L, const Int& bound) {
    int n = L.rank();
    std::vector<IntVec> out;
    if (n == 0) return out;
    RatMat inv = adjugate_inverse(L.gram);
    std::vector<Int> hi(n);
    for (int i = 0; i < n; ++i)
        hi[i] = latbound::isqrt(latbound::floor_rat(Rat(bound) * -inv(i, i)));
    IntVec cur(n);
    for (int i = 0; i < n; ++i) cur[i] = -hi[i];
    while (true) {
        bool zero = true, flipped = false;
        for (int i = 0; i < n && zero; ++i) {
            zero = cur[i] == 0;
            flipped = cur[i] < 0;
        }
        if (!zero && !flipped) {
            Int norm = 0;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) norm += cur[r] * L.gram(r, c) * cur[c];
            if (-norm <= bound) out.push_back(cur);
        }
        int k = 0;
        while (k < n) {
            cur[k] += 1;
            if (cur[k] <= hi[k]) break;
            cur[k] = -hi[k];
            ++k;
        }
        if (k == n) break;
    }
    return out;
}

// Reduced binary forms, one per isometry class: -G = [[a,b],[b,c]] with
// 0 <= 2b <= a <= c and ac - b^2 = d.
inline std::vector<Lattice> reduced_rank2(const Int& d) {
    std::vector<Lattice> out;
    for (Int a = 1; 3 * a * a <= 4 * d; ++a)
        for (Int b = 0; 2 * b <= a; ++b) {
            Int rem = d + b * b;
            if (rem % a != 0) continue;
            Int c = rem / a;
            if (c < a) continue;
            IntMat g(2, 2);
            g(0, 0) = -a;
            g(0, 1) = g(1, 0) = -b;
            g(1, 1) = -c;
            out.push_back(Lattice{g});
        }
    return out;
}

// All v in Z^N with sum v_i^2 = m, by direct recursion.
inline void vectors_of_square_sum(int N, const Int& m, IntVec& cur,
                                  std::vector<IntVec>& out) {
    if ((int)cur.size() == N) {
        if (m == 0) out.push_back(cur);
        return;
    }
    Int r = latbound::isqrt(m);
    for (Int v = -r; v <= r; ++v) {
        cur.push_back(v);
        vectors_of_square_sum(N, m - v * v, cur, out);
        cur.pop_back();
    }
}

// Every integer matrix M with M^T (-I_N) M = G_S, no symmetry reduction.
inline std::vector<IntMat> all_diagonal_embeddings(const Lattice& S, int N) {
    int k = S.rank();
    std::vector<std::vector<IntVec>> choices(k);
    for (int j = 0; j < k; ++j) {
        IntVec cur;
        vectors_of_square_sum(N, -S.gram(j, j), cur, choices[j]);
    }
    std::vector<IntMat> out;
    std::vector<const IntVec*> pick(k, nullptr);
    std::function<void(int)> rec = [&](int j) {
        if (j == k) {
            IntMat M(N, k);
            for (int c = 0; c < k; ++c)
                for (int r = 0; r < N; ++r) M(r, c) = (*pick[c])[r];
            out.push_back(std::move(M));
            return;
        }
        for (const IntVec& v : choices[j]) {
            bool ok = true;
            for (int i = 0; i < j && ok; ++i) {
                Int dot = 0;
                for (int r = 0; r < N; ++r) dot += (*pick[i])[r] * v[r];
                ok = (-dot == S.gram(i, j));
            }
            if (!ok) continue;
            pick[j] = &v;
            rec(j + 1);
        }
    };
    rec(0);
    return out;
}

// All signed permutation matrices of size N (use only for N <= 4).
inline std::vector<IntMat> signed_permutations(int N) {
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[i] = i;
    std::vector<IntMat> out;
    do {
        for (int mask = 0; mask < (1 << N); ++mask) {
            IntMat P(N, N);
            for (int i = 0; i < N; ++i) P(perm[i], i) = (mask >> i & 1) ? -1 : 1;
            out.push_back(std::move(P));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// Finite-index sublattice of <-1>^n spanned by p e_1 and e_{i+1} + s_i e_1,
// in that basis.  Index is p; the Gram works out to
//   [-p^2, -p s_i; -p s_j, -delta_ij - s_i s_j].
inline Lattice index_p_sublattice(const Int& p, const std::vector<Int>& s) {
    int n = (int)s.size() + 1;
    IntMat g(n, n);
    g(0, 0) = -p * p;
    for (int i = 0; i < n - 1; ++i) {
        g(0, i + 1) = g(i + 1, 0) = -p * s[i];
        for (int j = 0; j < n - 1; ++j) g(i + 1, j + 1) = (i == j ? -1 : 0) - s[i] * s[j];
    }
    return Lattice{g};
}

// The same sublattice as an embedding matrix into <-1>^n (columns are the
// basis vectors in ambient coordinates).
inline IntMat index_p_embedding(const Int& p, const std::vector<Int>& s) {
    int n = (int)s.size() + 1;
    IntMat M(n, n);
    M(0, 0) = p;
    for (int i = 0; i < n - 1; ++i) {
        M(0, i + 1) = s[i];
        M(i + 1, i + 1) = 1;
    }
    return M;
}

struct TestRng {
    std::mt19937_64 eng;
    explicit TestRng(std::uint64_t seed) : eng(seed) {}
    int pick(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(eng);
    }
};

// B^T D B with B unitriangular and D a negative diagonal: always negative
// definite, determinant prod(D).
inline Lattice random_negdef(TestRng& rng, int rank) {
    IntMat b = IntMat::identity(rank);
    for (int r = 0; r < rank; ++r)
        for (int c = r + 1; c < rank; ++c) b(r, c) = rng.pick(-2, 2);
    IntMat g(rank, rank);
    for (int i = 0; i < rank; ++i) g(i, i) = -rng.pick(1, 4);
    return Lattice{latbound::mat_mul(latbound::mat_mul(b.transposed(), g), b)};
}

// U^T G U for a random unimodular U (unitriangular times signed permutation):
// an isometric copy on a scrambled basis.
inline Lattice random_congruence(TestRng& rng, const Lattice& L) {
    int n = L.rank();
    IntMat u = IntMat::identity(n);
    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) u(r, c) = rng.pick(-1, 1);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng.eng);
    IntMat p(n, n);
    for (int i = 0; i < n; ++i) p(perm[i], i) = rng.pick(0, 1) ? 1 : -1;
    IntMat full = latbound::mat_mul(u, p);
    return Lattice{latbound::mat_mul(latbound::mat_mul(full.transposed(), L.gram), full)};
}

} // namespace oracle
