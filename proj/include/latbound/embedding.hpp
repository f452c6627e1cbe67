#pragma once

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "latbound/lattice.hpp"

namespace latbound {

// An embedding of S into T is an integer matrix M (rank T x rank S) whose
// columns are the images of S's basis vectors, with M^T G_T M = G_S.

inline bool verify_embedding(const Lattice& S, const Lattice& T, const IntMat& M) {
    if (M.rows != T.rank() || M.cols != S.rank()) return false;
    return mat_mul(mat_mul(M.transposed(), T.gram), M) == S.gram;
}

namespace detail {

// Source slots reordered so every vector after the first pairs with a
// previously placed one whenever possible; ties prefer larger norms.
// Tightens the pairing constraints near the root of embedding searches.
inline std::vector<int> connectivity_order(const Lattice& S) {
    int n = S.rank();
    std::vector<int> order;
    std::vector<bool> used(n, false);
    while ((int)order.size() < n) {
        int best = -1, best_links = -1;
        Int best_norm = 0;
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            int links = 0;
            for (int j : order)
                if (S.gram(i, j) != 0) ++links;
            Int nrm = abs_int(S.gram(i, i));
            if (best < 0 || links > best_links ||
                (links == best_links && nrm > best_norm)) {
                best = i;
                best_links = links;
                best_norm = nrm;
            }
        }
        order.push_back(best);
        used[best] = true;
    }
    return order;
}

// Basis of the sublattice orthogonal to the given target vectors (columns),
// as rows in target coordinates.
inline IntMat complement_basis(const Lattice& T, const IntMat& cols) {
    IntMat rows(cols.cols, T.rank());
    for (int j = 0; j < cols.cols; ++j)
        for (int r = 0; r < T.rank(); ++r) {
            Int s = 0;
            for (int c = 0; c < T.rank(); ++c) s += cols(c, j) * T.gram(c, r);
            rows(j, r) = s;
        }
    return kernel_int(rows);
}

// Exhaustive embedding search into A + diag(-delta_1, ..., -delta_N), up to
// permutations and sign flips of the diagonal coordinates.
//
// Diagonal coordinates with equal delta and identical history (the values
// already assigned by earlier columns) are interchangeable, and a coordinate
// with all-zero history can be negated freely.  So each new column is forced
// non-increasing on every such block and nonnegative on untouched blocks.
// Every orbit under the signed permutations then contains exactly one matrix
// satisfying the constraints: inducting over columns, equal-by-orbit columns
// have equal value multisets per block, hence equal sorted layouts.
struct DiagEmbedSearch {
    const Lattice* S = nullptr;
    const Lattice* T = nullptr; // original target, for the emit-time check
    const Lattice* A = nullptr; // non-diagonal part (may be empty)
    std::vector<Int> delta;     // positive; kept grouped by equal value
    std::vector<int> slot_of;   // search depth -> source basis index
    std::vector<int> arow_of;   // A row -> target coordinate
    std::vector<int> drow_of;   // diagonal position -> target coordinate
    std::function<bool(const IntMat&)> sink; // return false to stop

    int n = 0, m = 0, N = 0;
    std::vector<IntVec> acols;
    std::vector<IntVec> xcols;
    std::vector<int> class_of;
    std::vector<bool> virgin;
    std::vector<IntVec> apart_cands;
    IntVec cur_x;
    bool stopped = false;

    void run() {
        n = S->rank();
        m = A->rank();
        N = (int)delta.size();
        class_of.assign(N, 0);
        virgin.clear();
        for (int c = 0; c < N; ++c) {
            if (c > 0 && delta[c] == delta[c - 1])
                class_of[c] = class_of[c - 1];
            else {
                class_of[c] = (int)virgin.size();
                virgin.push_back(true);
            }
        }
        Int maxnorm = 0;
        for (int i = 0; i < n; ++i)
            maxnorm = std::max(maxnorm, abs_int(S->gram(i, i)));
        apart_cands.assign(1, IntVec(m, Int(0)));
        if (m > 0)
            for (const auto& sv : shortest_vectors(*A, maxnorm)) {
                apart_cands.push_back(sv.coords);
                apart_cands.push_back(negated(sv.coords));
            }
        cur_x.assign(N, Int(0));
        acols.clear();
        xcols.clear();
        stopped = false;
        descend(0);
    }

    void emit() {
        IntMat M(m + N, n);
        for (int d = 0; d < n; ++d) {
            for (int r = 0; r < m; ++r) M(arow_of[r], slot_of[d]) = acols[d][r];
            for (int c = 0; c < N; ++c) M(drow_of[c], slot_of[d]) = xcols[d][c];
        }
        assert(verify_embedding(*S, *T, M));
        if (!sink(M)) stopped = true;
    }

    void descend(int depth) {
        if (stopped) return;
        if (depth == n) {
            emit();
            return;
        }
        int slot = slot_of[depth];
        Int pkk = -S->gram(slot, slot);
        std::vector<IntVec> suffix(depth, IntVec(N + 1, Int(0)));
        for (int d = 0; d < depth; ++d)
            for (int c = N - 1; c >= 0; --c)
                suffix[d][c] = suffix[d][c + 1] + delta[c] * xcols[d][c] * xcols[d][c];
        for (const IntVec& a : apart_cands) {
            if (stopped) return;
            Int an = m > 0 ? Int(-vec_norm(*A, a)) : Int(0);
            Int nr0 = pkk - an;
            if (nr0 < 0) continue;
            // remaining pairing demand on the diagonal block, against each
            // earlier column, in the positive definite mirror
            IntVec defs(depth);
            bool feasible = true;
            for (int d = 0; d < depth; ++d) {
                Int ap = m > 0 ? pairing(*A, a, acols[d]) : Int(0);
                defs[d] = ap - S->gram(slot, slot_of[d]);
                if (defs[d] * defs[d] > nr0 * suffix[d][0]) feasible = false;
            }
            if (!feasible) continue;
            acols.push_back(a);
            place(depth, 0, nr0, defs, suffix);
            acols.pop_back();
            if (stopped) return;
        }
    }

    void place(int depth, int c, Int nr, IntVec& defs, const std::vector<IntVec>& suffix) {
        if (c == N) {
            if (nr != 0) return;
            for (const Int& d : defs)
                if (d != 0) return;
            xcols.push_back(cur_x);
            std::vector<int> old_class = class_of;
            std::vector<bool> old_virgin = virgin;
            std::vector<bool> nv;
            for (int i = 0; i < N; ++i) {
                if (i > 0 && old_class[i] == old_class[i - 1] && cur_x[i] == cur_x[i - 1])
                    class_of[i] = class_of[i - 1];
                else {
                    class_of[i] = (int)nv.size();
                    nv.push_back(old_virgin[old_class[i]] && cur_x[i] == 0);
                }
            }
            virgin = nv;
            descend(depth + 1);
            virgin = old_virgin;
            class_of = old_class;
            xcols.pop_back();
            return;
        }
        bool class_start = (c == 0 || class_of[c] != class_of[c - 1]);
        bool vir = virgin[class_of[c]];
        Int cap = isqrt(Int(nr / delta[c]));
        Int hi = cap;
        if (!class_start && cur_x[c - 1] < hi) hi = cur_x[c - 1];
        Int lo = vir ? Int(0) : Int(-cap);
        for (Int v = hi; v >= lo; --v) {
            Int nr2 = nr - delta[c] * v * v;
            if (nr2 < 0) continue;
            for (int d = 0; d < depth; ++d) defs[d] -= delta[c] * xcols[d][c] * v;
            bool ok = true;
            for (int d = 0; d < depth && ok; ++d)
                if (defs[d] * defs[d] > nr2 * suffix[d][c + 1]) ok = false;
            if (ok) {
                cur_x[c] = v;
                place(depth, c + 1, nr2, defs, suffix);
                cur_x[c] = 0;
            }
            for (int d = 0; d < depth; ++d) defs[d] += delta[c] * xcols[d][c] * v;
            if (stopped) return;
        }
    }
};

// Splits the target into isolated diagonal coordinates and the rest, sets up
// the canonical search, and streams embeddings of S into the sink.
inline void embed_search(const Lattice& S, const Lattice& T,
                         const std::function<bool(const IntMat&)>& sink) {
    int tn = T.rank();
    std::vector<int> diag_pos, core_pos;
    for (int c = 0; c < tn; ++c) {
        bool isolated = true;
        for (int j = 0; j < tn && isolated; ++j)
            if (j != c && T.gram(c, j) != 0) isolated = false;
        (isolated ? diag_pos : core_pos).push_back(c);
    }
    std::stable_sort(diag_pos.begin(), diag_pos.end(), [&](int a, int b) {
        return -T.gram(a, a) < -T.gram(b, b);
    });
    IntMat agram((int)core_pos.size(), (int)core_pos.size());
    for (size_t i = 0; i < core_pos.size(); ++i)
        for (size_t j = 0; j < core_pos.size(); ++j)
            agram((int)i, (int)j) = T.gram(core_pos[i], core_pos[j]);
    Lattice A{agram};

    DiagEmbedSearch search;
    search.S = &S;
    search.T = &T;
    search.A = &A;
    for (int c : diag_pos) search.delta.push_back(-T.gram(c, c));
    search.slot_of = detail::connectivity_order(S);
    search.arow_of = core_pos;
    search.drow_of = diag_pos;
    search.sink = sink;
    search.run();
}

} // namespace detail

// Donaldson-style test: embedding into the standard diagonal lattice of rank
// N, or proof of absence by exhausting the canonical search tree.
inline std::optional<IntMat> embed_in_diagonal(const Lattice& L, int N) {
    if (!is_negative_definite(L)) throw NotDefinite("embed_in_diagonal: source not negative definite");
    if (N < L.rank()) return std::nullopt;
    std::optional<IntMat> found;
    detail::embed_search(L, Lattice::standard_diagonal(N), [&](const IntMat& M) {
        found = M;
        return false;
    });
    return found;
}

// Decides whether two embeddings of the same source into T differ by an
// automorphism of T.  Searches for images of a complement basis of the first
// image, pinned by all pairings, and accepts once the assembled map is an
// integral isometry carrying M1 to M2.
inline bool embeddings_equivalent(const Lattice& T, const IntMat& M1, const IntMat& M2) {
    if (M1.rows != M2.rows || M1.cols != M2.cols) return false;
    if (M1 == M2) return true;
    int tn = T.rank(), sn = M1.cols;
    IntMat P1 = mat_mul(mat_mul(M1.transposed(), T.gram), M1);
    IntMat P2 = mat_mul(mat_mul(M2.transposed(), T.gram), M2);
    if (P1 != P2) return false;

    IntMat C = detail::complement_basis(T, M1); // rows
    int k = C.rows;
    // image of M1 is nondegenerate, so image + complement has full rank
    assert(sn + k == tn);
    IntMat F1(tn, sn + k);
    for (int r = 0; r < tn; ++r) {
        for (int j = 0; j < sn; ++j) F1(r, j) = M1(r, j);
        for (int j = 0; j < k; ++j) F1(r, sn + j) = C(j, r);
    }
    RatMat F1inv = inverse_rat(F1);

    // candidate images for the complement rows, by exact norm
    Int maxnorm = 0;
    for (int i = 0; i < k; ++i) {
        IntVec ci(tn);
        for (int r = 0; r < tn; ++r) ci[r] = C(i, r);
        maxnorm = std::max(maxnorm, abs_int(vec_norm(T, ci)));
    }
    std::vector<IntVec> cands;
    for (const auto& sv : shortest_vectors(T, maxnorm)) {
        cands.push_back(sv.coords);
        cands.push_back(detail::negated(sv.coords));
    }

    std::vector<IntVec> crows(k, IntVec(tn));
    for (int i = 0; i < k; ++i)
        for (int r = 0; r < tn; ++r) crows[i][r] = C(i, r);
    std::vector<IntVec> chosen;

    std::function<bool(int)> dfs = [&](int depth) -> bool {
        if (depth == k) {
            IntMat F2(tn, sn + k);
            for (int r = 0; r < tn; ++r) {
                for (int j = 0; j < sn; ++j) F2(r, j) = M2(r, j);
                for (int j = 0; j < k; ++j) F2(r, sn + j) = chosen[j][r];
            }
            RatMat sigma_r = mat_mul(to_rat(F2), F1inv);
            IntMat sigma(tn, tn);
            for (int r = 0; r < tn; ++r)
                for (int c = 0; c < tn; ++c) {
                    const Rat& x = sigma_r(r, c);
                    if (den(x) != 1) return false;
                    sigma(r, c) = num(x);
                }
            if (mat_mul(mat_mul(sigma.transposed(), T.gram), sigma) != T.gram) return false;
            return mat_mul(sigma, M1) == M2;
        }
        for (const IntVec& x : cands) {
            if (vec_norm(T, x) != vec_norm(T, crows[depth])) continue;
            bool ok = true;
            for (int j = 0; j < sn && ok; ++j) {
                Int want = 0, got = 0;
                for (int r = 0; r < tn; ++r)
                    for (int c = 0; c < tn; ++c) {
                        want += crows[depth][r] * T.gram(r, c) * M1(c, j);
                        got += x[r] * T.gram(r, c) * M2(c, j);
                    }
                if (want != got) ok = false;
            }
            for (int i = 0; i < depth && ok; ++i)
                if (pairing(T, x, chosen[i]) != pairing(T, crows[depth], crows[i])) ok = false;
            if (!ok) continue;
            chosen.push_back(x);
            if (dfs(depth + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return dfs(0);
}

// All embeddings of S into T up to the automorphism group of T.  The
// canonical search already gives one representative per orbit under signed
// permutations of T's split diagonal coordinates; automorphisms moving the
// non-diagonal part are quotiented out pairwise.  max_results = 0 means
// unlimited; a positive cap truncates the underlying search (useful when only
// existence or a witness is needed).
inline std::vector<IntMat> enumerate_embeddings(const Lattice& S, const Lattice& T,
                                                size_t max_results = 0) {
    if (!is_negative_definite(S)) throw NotDefinite("enumerate_embeddings: source not negative definite");
    if (!is_negative_definite(T)) throw NotDefinite("enumerate_embeddings: target not negative definite");
    std::vector<IntMat> raw;
    detail::embed_search(S, T, [&](const IntMat& M) {
        raw.push_back(M);
        return max_results == 0 || raw.size() < max_results;
    });
    bool has_core = false;
    for (int c = 0; c < T.rank() && !has_core; ++c)
        for (int j = 0; j < T.rank(); ++j)
            if (j != c && T.gram(c, j) != 0) {
                has_core = true;
                break;
            }
    if (!has_core || raw.size() <= 1) return raw;
    std::vector<IntMat> classes;
    for (const IntMat& M : raw) {
        bool dup = false;
        for (const IntMat& R : classes)
            if (embeddings_equivalent(T, R, M)) {
                dup = true;
                break;
            }
        if (!dup) classes.push_back(M);
    }
    return classes;
}

// Stable isometry classes of complements of G1 inside G2 + <-1>^N*, with
// N* = sum |v_i . v_i| + 1 over G1's basis; by stability the class set does
// not change for larger N.
inline std::vector<Lattice> complement_classes(const Lattice& G1, const Lattice& G2) {
    if (!is_negative_definite(G1)) throw NotDefinite("complement_classes: G1 not negative definite");
    if (!is_negative_definite(G2)) throw NotDefinite("complement_classes: G2 not negative definite");
    Int nstar = 1;
    for (int i = 0; i < G1.rank(); ++i) nstar += abs_int(G1.gram(i, i));
    Lattice target = direct_sum(G2, Lattice::standard_diagonal((int)nstar.convert_to<long>()));
    std::vector<Lattice> classes;
    detail::embed_search(G1, target, [&](const IntMat& M) {
        IntMat B = detail::complement_basis(target, M);
        IntMat g(B.rows, B.rows);
        for (int i = 0; i < B.rows; ++i)
            for (int j = 0; j < B.rows; ++j) {
                Int s = 0;
                for (int r = 0; r < target.rank(); ++r)
                    for (int c = 0; c < target.rank(); ++c)
                        s += B(i, r) * target.gram(r, c) * B(j, c);
                g(i, j) = s;
            }
        Lattice core = reduce_stable(Lattice{g}).core;
        for (const Lattice& K : classes)
            if (K.rank() == core.rank() && is_isometric(K, core)) return true;
        classes.push_back(core);
        return true;
    });
    std::sort(classes.begin(), classes.end(),
              [](const Lattice& a, const Lattice& b) { return lattice_less(a, b); });
    return classes;
}

// All integral lattices containing L with index p, up to isometry.  Adjoined
// classes w/p need w.L in pZ and w.w in p^2 Z; representatives run over the
// projective classes of (L/pL) \ {0}.
inline std::vector<Lattice> prime_overlattices(const Lattice& L, const Int& p) {
    if (p < 2 || !detail::is_prime_int(p)) throw BadInput("prime_overlattices: p must be prime");
    int n = L.rank();
    std::vector<Lattice> out;
    if (n == 0) return out;
    Int p2 = p * p;
    if (abs_int(determinant(L)) % p2 != 0) return out;
    std::vector<Int> w(n, Int(0));
    // first nonzero coordinate fixed to 1: one vector per projective class
    for (int pivot = n - 1; pivot >= 0; --pivot) {
        std::fill(w.begin(), w.end(), Int(0));
        w[pivot] = 1;
        bool carry = false;
        while (!carry) {
            bool glue = true;
            for (int r = 0; r < n && glue; ++r) {
                Int s = 0;
                for (int c = 0; c < n; ++c) s += L.gram(r, c) * w[c];
                if (s % p != 0) glue = false;
            }
            if (glue) {
                Int ww = 0;
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) ww += w[r] * L.gram(r, c) * w[c];
                if (ww % p2 == 0) {
                    // rows of p*M in L's coordinates
                    IntMat gen(n + 1, n);
                    for (int i = 0; i < n; ++i) gen(i, i) = p;
                    for (int c = 0; c < n; ++c) gen(n, c) = w[c];
                    IntMat B = hnf_rows(gen);
                    IntMat g(n, n);
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            Int s = 0;
                            for (int r = 0; r < n; ++r)
                                for (int c = 0; c < n; ++c)
                                    s += B(i, r) * L.gram(r, c) * B(j, c);
                            assert(s % p2 == 0);
                            g(i, j) = s / p2;
                        }
                    Lattice M{g};
                    bool dup = false;
                    for (const Lattice& K : out)
                        if (is_isometric(K, M)) {
                            dup = true;
                            break;
                        }
                    if (!dup) out.push_back(M);
                }
            }
            // next suffix combination after the pivot
            carry = true;
            for (int c = n - 1; c > pivot && carry; --c) {
                w[c] += 1;
                if (w[c] == p)
                    w[c] = 0;
                else
                    carry = false;
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Lattice& a, const Lattice& b) { return lattice_less(a, b); });
    return out;
}

// Index of a full-rank embedding, from the matrix alone: the image has index
// |det| in the target.
inline Int embedding_index(const IntMat& e) {
    if (e.rows != e.cols) throw NotFullRank("embedding_index: matrix not square");
    Int d = det_int(e);
    if (d == 0) throw NotFullRank("embedding_index: matrix is singular");
    return abs_int(d);
}

// Index from the two lattices: sqrt(|det S| / |det T|), which must be a
// perfect square ratio for a full-rank embedding to exist.
inline Int embedding_index(const Lattice& S, const Lattice& T) {
    if (S.rank() != T.rank()) throw NotFullRank("embedding_index: rank mismatch");
    Int ds = abs_int(determinant(S));
    Int dt = abs_int(determinant(T));
    if (dt == 0 || ds % dt != 0) throw NonSquareRatio("embedding_index: determinant ratio not integral");
    Int q = ds / dt;
    Int root;
    if (!is_perfect_square(q, root)) throw NonSquareRatio("embedding_index: determinant ratio not a square");
    return root;
}

} // namespace latbound
