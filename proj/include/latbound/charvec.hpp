#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "latbound/lattice.hpp"

namespace latbound {

// Characteristic covectors are written in the dual basis: xi pairs with the
// i-th basis vector to xi[i], so the characteristic congruence
// xi . w == w . w (mod 2) becomes the coordinatewise parity condition
// xi[i] == gram(i,i) (mod 2), and xi . xi = xi^T G^{-1} xi.

inline bool parity_matches(const Int& a, const Int& b) {
    return ((a % 2) != 0) == ((b % 2) != 0);
}

inline void require_characteristic(const Lattice& L, const IntVec& xi) {
    if ((int)xi.size() != L.rank()) throw BadInput("covector length does not match rank");
    for (int i = 0; i < L.rank(); ++i)
        if (!parity_matches(xi[i], L.gram(i, i)))
            throw ParityViolation("covector parity does not match the diagonal");
}

inline Rat char_norm(const Lattice& L, const IntVec& xi) {
    require_characteristic(L, xi);
    if (L.rank() == 0) return Rat(0);
    RatMat inv = dual_gram(L);
    Rat s = 0;
    for (int r = 0; r < L.rank(); ++r) {
        if (xi[r] == 0) continue;
        for (int c = 0; c < L.rank(); ++c) s += Rat(xi[r]) * inv(r, c) * Rat(xi[c]);
    }
    return s;
}

struct DeltaResult {
    Rat delta;     // (rank - |xi.xi|_min) / 4
    Rat min_norm;  // min |xi . xi| over characteristic covectors
    IntVec minimizer;
};

namespace detail {

struct CharBnb {
    int n;
    std::vector<int> perm;   // level -> original index
    Ldl ldl;                 // of the permuted positive definite dual form
    IntVec parity;           // in permuted order
    Rat best;
    IntVec best_x;           // in permuted order
    IntVec x;

    void leaf(const Rat& value) {
        if (value < best) {
            best = value;
            best_x = x;
        }
    }

    void descend(int k, const Rat& used) {
        if (k < 0) {
            leaf(used);
            return;
        }
        Rat c = 0;
        for (int i = k + 1; i < n; ++i)
            if (x[i] != 0) c += ldl.l(i, k) * x[i];
        // nearest parity point right of the center, then alternate outward;
        // base sits within 2 of the true minimum, so once both sides of a
        // step >= 2 fall outside the shrinking window every later step does
        Int base = -ceil_rat(c - Rat(1));
        if (!parity_matches(base, parity[k])) base += 1;
        for (Int step = 0;; step += 2) {
            bool any = false;
            for (int side = 0; side < (step == 0 ? 1 : 2); ++side) {
                Int v = side == 0 ? Int(base + step) : Int(base - step);
                Rat t = Rat(v) + c;
                Rat add = ldl.d[k] * t * t;
                if (used + add >= best) continue;
                any = true;
                x[k] = v;
                descend(k - 1, used + add);
                x[k] = 0;
            }
            if (!any && step >= 2) break;
        }
    }
};

} // namespace detail

// Minimize |xi . xi| over characteristic covectors by branch and bound over
// the parity coset of the dual form.  The lattice must be negative definite.
inline DeltaResult min_char_norm(const Lattice& L) {
    int n = L.rank();
    if (n == 0) return DeltaResult{Rat(0), Rat(0), {}};
    if (!is_negative_definite(L)) throw NotDefinite("min_char_norm needs a definite lattice");
    RatMat inv = dual_gram(L);
    RatMat P(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) P(r, c) = -inv(r, c);

    IntVec par(n);
    for (int i = 0; i < n; ++i) par[i] = (L.gram(i, i) % 2 != 0) ? 1 : 0;

    auto value_of = [&](const IntVec& xi) {
        Rat s = 0;
        for (int r = 0; r < n; ++r) {
            if (xi[r] == 0) continue;
            for (int c = 0; c < n; ++c) s += Rat(xi[r]) * P(r, c) * Rat(xi[c]);
        }
        return s;
    };

    // greedy coordinate descent from the parity vector seeds the bound
    IntVec seed = par;
    Rat seed_val = value_of(seed);
    for (bool moved = true; moved;) {
        moved = false;
        for (int i = 0; i < n; ++i) {
            for (int dir = -1; dir <= 1; dir += 2) {
                IntVec cand = seed;
                cand[i] += 2 * dir;
                Rat v = value_of(cand);
                if (v < seed_val) {
                    seed = cand;
                    seed_val = v;
                    moved = true;
                }
            }
        }
    }

    // put large dual diagonal entries at the deepest levels so they are
    // fixed first during the search
    std::vector<int> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return P(a, a) < P(b, b); });

    RatMat Pp(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) Pp(r, c) = P(ord[r], ord[c]);

    detail::CharBnb bnb;
    bnb.n = n;
    bnb.perm = ord;
    bnb.ldl = detail::ldl_decompose(Pp);
    bnb.parity.resize(n);
    for (int k = 0; k < n; ++k) bnb.parity[k] = par[ord[k]];
    bnb.best = seed_val + 1;
    bnb.x.assign(n, Int(0));
    bnb.descend(n - 1, Rat(0));

    IntVec minimizer(n);
    Rat best;
    if (bnb.best <= seed_val) {
        for (int k = 0; k < n; ++k) minimizer[ord[k]] = bnb.best_x[k];
        best = bnb.best;
    } else {
        minimizer = seed;
        best = seed_val;
    }
    return DeltaResult{(Rat(n) - best) / 4, best, minimizer};
}

inline Rat delta_invariant(const Lattice& L) { return min_char_norm(L).delta; }

struct CovectorWitness {
    Int k;
    IntVec ks;
    Int value; // k^2 + sum (k*s_i - p*ks_i)^2
};

// For an odd prime p and odd offsets s_i, pick odd k and even ks_i
// minimizing k^2 + sum (k s_i - p ks_i)^2.  The minimum always lands below
// (n+2) p^2 / 3 where n = |s| + 1; that margin is what makes rank bounds for
// prime-index covector descent work, so it is asserted here.
inline CovectorWitness covector_witness(const Int& p, const std::vector<Int>& s) {
    if (p < 3 || !detail::is_prime_int(p)) throw BadInput("p must be an odd prime");
    for (const Int& si : s) {
        if (si % 2 == 0) throw BadInput("offsets must be odd");
        if (abs_int(si) > p - 1) throw BadInput("offset out of range");
    }
    int n = (int)s.size() + 1;
    CovectorWitness best;
    bool have = false;
    for (Int mag = 1; mag <= p - 2; mag += 2) {
        for (int side = 0; side < 2; ++side) {
            Int k = side == 0 ? mag : -mag;
            Int total = k * k;
            IntVec ks;
            for (const Int& si : s) {
                // nearest even to k*si/p, checked against both neighbours
                Int t = k * si;
                Int q = t / (2 * p); // toward zero
                Int pick = 0, pick_val = -1;
                for (Int cand2 = q - 2; cand2 <= q + 2; ++cand2) {
                    Int ki = 2 * cand2;
                    Int diff = t - p * ki;
                    Int val = diff * diff;
                    if (pick_val < 0 || val < pick_val ||
                        (val == pick_val && abs_int(ki) < abs_int(pick))) {
                        pick = ki;
                        pick_val = val;
                    }
                }
                ks.push_back(pick);
                total += pick_val;
            }
            if (!have || total < best.value) {
                best = CovectorWitness{k, ks, total};
                have = true;
            }
        }
    }
    if (!have) throw BadInput("no admissible k");
    if (3 * best.value >= Int(n + 2) * p * p)
        throw Error("covector witness exceeded its guaranteed bound");
    return best;
}

enum class IndexParity { odd, two };

// Rank ceiling for definite lattices admitting a chain of odd-prime-index
// (resp. index-two) sublattices with delta at most C.
inline Int prime_index_rank_bound(const Rat& C, IndexParity parity) {
    if (C < 0) throw BadInput("delta bound must be nonnegative");
    if (parity == IndexParity::odd) return floor_rat(6 * C + 1);
    return floor_rat(4 * C);
}

} // namespace latbound
