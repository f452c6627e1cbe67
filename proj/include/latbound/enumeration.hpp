#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "latbound/charvec.hpp"
#include "latbound/embedding.hpp"
#include "latbound/lattice.hpp"

namespace latbound {

struct EnumerateOptions {
    int rank_cap = 8;
    int threads = 1;
    std::optional<std::chrono::milliseconds> deadline;
};

namespace detail {

// Exact m-th powers of the Hermite constants for m <= 8; Hermite's classical
// bound (4/3)^{m(m-1)/2} beyond.
inline Rat hermite_pow(int m) {
    switch (m) {
        case 1: return Rat(1);
        case 2: return Rat(4, 3);
        case 3: return Rat(2);
        case 4: return Rat(4);
        case 5: return Rat(8);
        case 6: return Rat(64, 3);
        case 7: return Rat(64);
        case 8: return Rat(256);
        default: {
            Rat r(1);
            for (int i = 0; i < m * (m - 1) / 2; ++i) r *= Rat(4, 3);
            return r;
        }
    }
}

// Enumerates positive definite integer Gram matrices Q of the given rank and
// determinant inside a region that provably contains one representative of
// every class, built column by column:
//   - ascending diagonal, 2|q_ij| <= q_ii for i < j;
//   - Q(v_k + w) >= Q(v_k) for every signed sum w of at most three earlier
//     basis vectors (coset minimality, truncated to small support);
//   - q_kk bounded by the projected-lattice estimate
//       q_kk <= gamma_m (det / D_{k-1})^{1/m} + (1/4) sum_{j<k} d_{j+1}/d_j,
//     m = n-k+1: the projection of v_k is no shorter than the projected
//     minimum, and size reduction against v_1..v_{k-1} costs at most a
//     quarter of each Gram-Schmidt norm;
//   - when the whole lattice has minimum >= min_first_diag, each leading
//     minor D_k >= min_first_diag^k / gamma_k^k (Hermite on the sublattice);
//   - first nonzero entry of each column negative (sign flips);
//   - for adjacent columns with equal diagonal, absolute prefixes above the
//     pair nondecreasing: swapping equal-norm neighbours of a reduced basis
//     keeps it reduced and fixes all rows above, so the representative whose
//     concatenated absolute column prefixes are lexicographically least
//     satisfies this.
// Every Minkowski-reduced form satisfies the norm and bound conditions, and
// the canonicalizations only move within its class, so no class is missed.
// Integral Gram-Schmidt data (minor chain d_k, scaled coefficients lambda)
// prunes indefinite branches.  The running projection of a partial column
// onto the span so far is kept as the integer pn with
//   sum_{j<=i} lam_j^2 / (d_j d_{j+1}) = pn / d_{i+1},
// updated by pn' = (pn * d_{i+1} + lam^2) / d_i (exact), which also gives the
// minor recurrence d_{k+1} = d_k q_kk - pn; the last diagonal entry is solved
// from the determinant target instead of searched.
struct RegionSearch {
    int n = 0;
    Int target; // required determinant of Q
    int min_first_diag = 1;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::function<void(const IntMat&)> emit;

    IntMat q;                        // symmetric, filled through column k
    std::vector<std::vector<Int>> lam; // lam[k][i], i < k, scaled GS
    std::vector<Int> dmin;           // dmin[k] = leading k x k minor, dmin[0] = 1
    std::vector<Int> minor_floor;    // least admissible dmin[k]
    // coset check: the signed sum w = s1 v_j1 (+ s2 v_j2) + v_i, with norm wn,
    // must not shorten any later column vector
    struct Coset {
        int j1, j2; // j2 < 0 for a pair
        int s1, s2;
        Int wn;
    };
    std::vector<std::vector<Coset>> coset; // checks whose top row is i
    long long tick = 0;
    long long nodes = 0, emits = 0;  // search statistics

    void prepare() {
        q = IntMat(n, n);
        lam.assign(n, {});
        dmin.assign(n + 1, Int(1));
        coset.assign(n, {});
        minor_floor.assign(n + 1, Int(1));
        if (min_first_diag > 1) {
            Int mp = 1;
            for (int j = 1; j <= n; ++j) {
                mp *= min_first_diag;
                Rat b = Rat(mp) / hermite_pow(j);
                Int fl = num(b) / den(b);
                if (Rat(fl) < b) fl += 1;
                if (fl > 1) minor_floor[j] = fl;
            }
        }
    }

    void run() {
        prepare();
        if (n == 0) {
            if (target == 1) emit(q);
            return;
        }
        if (target < minor_floor[n]) return;
        column(0);
    }

    void check_deadline() {
        if (deadline && (++tick & 255) == 0 &&
            std::chrono::steady_clock::now() > *deadline)
            throw DeadlineExceeded("enumerate_definite: deadline exceeded");
    }

    // whether v satisfies the projected-lattice diagonal bound at column k
    bool diag_ok(int k, const Int& v) const {
        int m = n - k;
        Rat t(4 * v);
        for (int j = 0; j < k; ++j) t -= Rat(dmin[j + 1], dmin[j]);
        if (t <= 0) return true;
        Rat lhs(1);
        for (int i = 0; i < m; ++i) lhs *= t / 4;
        return lhs <= hermite_pow(m) * Rat(target, dmin[k]);
    }

    // largest diagonal value allowed at column k, from lo upward
    Int diag_cap(int k, const Int& lo) const {
        Int a = lo;
        while (diag_ok(k, a)) a += 1;
        return a - 1;
    }

    // coset checks topped by row k, built once column k is complete
    void build_coset(int k) {
        auto& out = coset[k];
        out.clear();
        for (int j = 0; j < k; ++j)
            for (int s = 1; s >= -1; s -= 2)
                out.push_back({j, -1, s, 0, q(j, j) + q(k, k) + 2 * s * q(j, k)});
        for (int j1 = 0; j1 < k; ++j1)
            for (int j2 = j1 + 1; j2 < k; ++j2)
                for (int s1 = 1; s1 >= -1; s1 -= 2)
                    for (int s2 = 1; s2 >= -1; s2 -= 2)
                        out.push_back({j1, j2, s1, s2,
                                       q(j1, j1) + q(j2, j2) + q(k, k) +
                                           2 * (s1 * s2 * q(j1, j2) + s1 * q(j1, k) +
                                                s2 * q(j2, k))});
    }

    void column(int k) {
        check_deadline();
        lam[k].assign(k, Int(0));
        Int lo = k == 0 ? Int(min_first_diag) : Int(q(k - 1, k - 1));
        Int cap = diag_cap(k, lo);
        if (cap < lo) return;
        offdiag(k, 0, true, cap, Int(0));
    }

    // pn carries the projected length of the partial column (denominator
    // dmin[i]); q_kk must exceed it, so it must stay below cap
    void offdiag(int k, int i, bool all_zero, const Int& cap, const Int& pn) {
        check_deadline();
        ++nodes;
        if (i == k) {
            diagonal(k, pn);
            return;
        }
        // lam[k][i] is linear in the entry: dmin[i] * v + t0
        Int t0 = 0;
        for (int l = 0; l < i; ++l)
            t0 = (dmin[l + 1] * t0 - lam[k][l] * lam[i][l]) / dmin[l];
        Int half = q(i, i) / 2;
        const auto& checks = coset[i];
        // sign canonicalization: the first nonzero entry of a column is
        // negative, later entries are free
        for (Int v = all_zero ? Int(0) : half; v >= -half; --v) {
            q(i, k) = v;
            q(k, i) = v;
            bool ok = true;
            for (const Coset& c : checks) {
                Int dot = c.s1 * q(c.j1, k) + v;
                if (c.j2 >= 0) dot += c.s2 * q(c.j2, k);
                if (2 * abs_int(dot) > c.wn) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                Int lv = dmin[i] * v + t0;
                lam[k][i] = lv;
                Int np = (pn * dmin[i + 1] + lv * lv) / dmin[i];
                if (cap * dmin[i + 1] > np)
                    offdiag(k, i + 1, all_zero && v == 0, cap, np);
            }
        }
        q(i, k) = 0;
        q(k, i) = 0;
    }

    // adjacent equal-diagonal columns: absolute prefixes above the pair are
    // nondecreasing
    bool run_order_ok(int k) const {
        if (k == 0 || q(k, k) != q(k - 1, k - 1)) return true;
        for (int i = 0; i < k - 1; ++i) {
            Int prev = abs_int(q(i, k - 1)), cur = abs_int(q(i, k));
            if (prev < cur) return true;
            if (prev > cur) return false;
        }
        return true;
    }

    void diagonal(int k, const Int& pn) {
        Int lo = k == 0 ? Int(min_first_diag) : Int(q(k - 1, k - 1));
        // minor chain applied to q_kk: dmin[k+1] = dmin[k] * q_kk - pn
        if (k == n - 1) {
            // solve dmin[n] = target exactly
            Int nm = target + pn;
            if (nm % dmin[k] != 0) return;
            Int v = nm / dmin[k];
            if (v < lo) return;
            if (!diag_ok(k, v)) return;
            q(k, k) = v;
            if (run_order_ok(k)) {
                ++emits;
                emit(q);
            }
            q(k, k) = 0;
            return;
        }
        Int cap = diag_cap(k, lo);
        for (Int v = lo; v <= cap; ++v) {
            Int dk = dmin[k] * v - pn;
            if (dk < minor_floor[k + 1]) continue;
            q(k, k) = v;
            if (!run_order_ok(k)) continue;
            dmin[k + 1] = dk;
            build_coset(k);
            column(k + 1);
        }
        q(k, k) = 0;
    }
};

// negated copy: search space is positive definite, library convention is
// negative definite
inline Lattice negate_form(const IntMat& q) {
    IntMat g = q;
    for (Int& x : g.a) x = -x;
    return Lattice{g};
}

inline void insert_class(std::vector<Lattice>& classes, const Lattice& L) {
    for (const Lattice& K : classes)
        if (is_isometric(K, L)) return;
    classes.push_back(L);
}

// Isometry-class collector tuned for long emit streams that mostly repeat a
// few classes.  Each stored class caches its vectors up to the running norm
// bound together with their mutual pairings as machine integers, so membership
// is decided by a table-driven matching search instead of a fresh vector
// enumeration per emitted form.  All forms in one stream must share rank and
// determinant (the region search guarantees this), so a full pairing match is
// an isometry.  Falls back to is_isometric when entries are too large for the
// tables.
struct ClassSet {
    struct Entry {
        Lattice L;
        bool even = false;
        Int bound = 0;                        // vectors enumerated up to this norm
        std::vector<IntVec> vecs;             // one per +-pair
        std::vector<std::vector<long long>> ptab;
        std::map<long long, std::vector<int>> by_norm;

        void extend(const Int& need) {
            if (need <= bound && bound > 0) return;
            bound = need;
            vecs.clear();
            ptab.clear();
            by_norm.clear();
            for (const auto& sv : shortest_vectors(L, bound)) {
                by_norm[abs_int(sv.norm).convert_to<long long>()].push_back((int)vecs.size());
                vecs.push_back(sv.coords);
            }
            int m = (int)vecs.size();
            ptab.assign(m, std::vector<long long>(m, 0));
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j)
                    ptab[i][j] = ptab[j][i] =
                        pairing(L, vecs[i], vecs[j]).convert_to<long long>();
        }
    };
    std::vector<Entry> entries;

    static bool is_even_form(const Lattice& L) {
        for (int i = 0; i < L.rank(); ++i)
            if (L.gram(i, i) % 2 != 0) return false;
        return true;
    }

    // table-driven search for a basis image of src inside e's vector list
    bool matches(Entry& e, const Lattice& src) const {
        int n = src.rank();
        if (n == 0) return true;
        std::vector<std::vector<long long>> g(n, std::vector<long long>(n));
        Int maxdiag = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                g[i][j] = src.gram(i, j).convert_to<long long>();
                if (i == j) maxdiag = std::max(maxdiag, abs_int(src.gram(i, i)));
            }
        e.extend(maxdiag);
        std::vector<int> img(n);
        std::vector<int> sgn(n);
        auto dfs = [&](auto&& self, int d) -> bool {
            if (d == n) return true;
            auto it = e.by_norm.find(-g[d][d]);
            if (it == e.by_norm.end()) return false;
            for (int idx : it->second) {
                for (int s = (d == 0 ? 1 : -1); s <= 1; s += 2) {
                    bool ok = true;
                    for (int j = 0; j < d && ok; ++j)
                        if (s * sgn[j] * e.ptab[idx][img[j]] != g[d][j]) ok = false;
                    if (!ok) continue;
                    img[d] = idx;
                    sgn[d] = s;
                    if (self(self, d + 1)) return true;
                }
            }
            return false;
        };
        return dfs(dfs, 0);
    }

    void insert(const Lattice& L) {
        Int big = Int(1) << 40;
        for (const Int& x : L.gram.a)
            if (abs_int(x) > big) {
                // out of table range; generic path
                for (const Entry& e : entries)
                    if (is_isometric(e.L, L)) return;
                entries.push_back(Entry{L, is_even_form(L)});
                return;
            }
        bool even = is_even_form(L);
        for (Entry& e : entries) {
            if (e.even != even || e.L.rank() != L.rank()) continue;
            if (matches(e, L)) return;
        }
        entries.push_back(Entry{L, even});
    }

    std::vector<Lattice> lattices() const {
        std::vector<Lattice> out;
        out.reserve(entries.size());
        for (const Entry& e : entries) out.push_back(e.L);
        return out;
    }
};

// seeds a search whose first two columns are fixed, matching the state the
// sequential run has when it enters column 2
inline void seed_prefix(RegionSearch& s, const Int& a, const Int& b, const Int& c) {
    s.prepare();
    s.q(0, 0) = a;
    s.q(0, 1) = b;
    s.q(1, 0) = b;
    s.q(1, 1) = c;
    s.lam[1] = {b};
    s.dmin[1] = a;
    s.dmin[2] = a * c - b * b;
    s.build_coset(0);
    s.build_coset(1);
}

// runs the region search, reducing emitted forms to isometry classes as they
// arrive; when threads > 1, completed two-column prefixes are distributed
// over a pool (each worker deduplicating locally) and the per-prefix class
// lists merged in prefix order, so the output matches the sequential run
inline std::vector<Lattice> region_classes(int rank, const Int& det_abs, int min_first_diag,
                                           const EnumerateOptions& opts) {
    std::optional<std::chrono::steady_clock::time_point> dl;
    if (opts.deadline) dl = std::chrono::steady_clock::now() + *opts.deadline;
    if (opts.threads <= 1 || rank <= 2) {
        RegionSearch s;
        s.n = rank;
        s.target = det_abs;
        s.min_first_diag = min_first_diag;
        s.deadline = dl;
        ClassSet found;
        s.emit = [&](const IntMat& m) { found.insert(negate_form(m)); };
        s.run();
        return found.lattices();
    }
    std::vector<Lattice> classes;
    // prefixes: accepted first two columns, encoded as (q00, q01, q11)
    struct Prefix {
        Int q00, q01, q11;
    };
    std::vector<Prefix> prefixes;
    {
        // leading 2x2 blocks, enumerated in the same order as the sequential
        // search would visit them
        RegionSearch caps;
        caps.n = rank;
        caps.target = det_abs;
        caps.min_first_diag = min_first_diag;
        caps.prepare();
        if (det_abs < caps.minor_floor[rank]) return classes;
        Int cap0 = caps.diag_cap(0, Int(min_first_diag));
        for (Int a = min_first_diag; a <= cap0; ++a) {
            caps.q(0, 0) = a;
            caps.dmin[1] = a;
            Int half = a / 2;
            for (Int b = 0; b >= -half; --b) {
                caps.q(0, 1) = b;
                caps.q(1, 0) = b;
                caps.lam[1] = {b};
                Int lo = a;
                Int cap1 = caps.diag_cap(1, lo);
                for (Int c = lo; c <= cap1; ++c) {
                    if (a * c - b * b < caps.minor_floor[2]) continue;
                    caps.q(1, 1) = c;
                    if (!caps.run_order_ok(1)) continue;
                    prefixes.push_back({a, b, c});
                }
            }
        }
    }
    std::vector<std::vector<Lattice>> results(prefixes.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t idx = next.fetch_add(1);
            if (idx >= prefixes.size()) return;
            const Prefix& p = prefixes[idx];
            RegionSearch s;
            s.n = rank;
            s.target = det_abs;
            s.min_first_diag = min_first_diag;
            s.deadline = dl;
            ClassSet found;
            s.emit = [&](const IntMat& m) { found.insert(negate_form(m)); };
            seed_prefix(s, p.q00, p.q01, p.q11);
            s.column(2);
            results[idx] = found.lattices();
        }
    };
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int t = 0; t < opts.threads; ++t)
        pool.emplace_back([&]() {
            try {
                worker();
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(prefixes.size());
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    for (auto& r : results)
        for (auto& L : r) insert_class(classes, L);
    return classes;
}

} // namespace detail

// All negative definite lattices of the given rank and |det|, one per
// isometry class.
inline std::vector<Lattice> enumerate_definite(int rank, const Int& det_abs,
                                               const EnumerateOptions& opts = {}) {
    if (rank < 0) throw BadInput("enumerate_definite: negative rank");
    if (det_abs < 1) throw BadInput("enumerate_definite: determinant must be positive");
    if (rank > opts.rank_cap)
        throw RankCapExceeded("enumerate_definite: rank " + std::to_string(rank) +
                              " above cap " + std::to_string(opts.rank_cap));
    std::vector<Lattice> classes = detail::region_classes(rank, det_abs, 1, opts);
    std::sort(classes.begin(), classes.end(),
              [](const Lattice& a, const Lattice& b) { return lattice_less(a, b); });
    return classes;
}

// All D >= 1 with D | h and h/D a perfect square: the determinants a lattice
// bounded by a manifold with |H^2| = h can have.
inline std::vector<Int> admissible_determinants(const Int& h) {
    if (h < 1) throw BadInput("admissible_determinants: h must be positive");
    std::vector<Int> out;
    for (Int t = 1; t * t <= h; ++t)
        if (h % (t * t) == 0) out.push_back(h / (t * t));
    std::sort(out.begin(), out.end());
    return out;
}

// Stable classes of negative definite unimodular lattices of rank <= rank_cap
// with delta <= C (no bound when C is absent).  Only split-free cores are
// returned; the diagonal summands carry no information.
inline std::vector<Lattice> unimodular_stable_classes(int rank_cap, std::optional<Rat> C,
                                                      const EnumerateOptions& opts = {}) {
    if (rank_cap < 0) throw BadInput("unimodular_stable_classes: negative cap");
    if (rank_cap > opts.rank_cap)
        throw RankCapExceeded("unimodular_stable_classes: cap above configured rank cap");
    std::vector<Lattice> classes;
    classes.push_back(Lattice{IntMat(0, 0)}); // the diagonal-only class
    for (int r = 1; r <= rank_cap; ++r)
        for (const Lattice& L : detail::region_classes(r, 1, 2, opts)) {
            if (reduce_stable(L).split_count != 0) continue; // not a core
            if (C && delta_invariant(L) > *C) continue;
            classes.push_back(L);
        }
    std::sort(classes.begin(), classes.end(),
              [](const Lattice& a, const Lattice& b) { return lattice_less(a, b); });
    return classes;
}

struct BoundedSetQuery {
    Lattice gamma1{IntMat(0, 0)};
    Lattice gamma2{IntMat(0, 0)};
    Rat C = 0;
    Int D = 1;
    int rank_cap = 0;
};

struct CandidateAudit {
    Lattice lattice;  // core representative
    Rat delta = 0;
    bool delta_ok = false;
    bool embed_ok = false;
    bool cap_hit = false; // deadline expired while testing this candidate
};

struct BoundedSetResult {
    std::vector<Lattice> classes;
    std::vector<CandidateAudit> audits;
};

namespace detail {

// Whether gamma1 + L + <-1>^m embeds into gamma2 + <-1>^{N + m} for some
// padding m, with N matching total ranks.  Equivalent formulation: some
// embedding of gamma1 + L into gamma2 + <-1>^{N*} has stably diagonal
// complement; N* = sum |diag| + 1 is past the stabilization point, so one
// exhaustive sweep decides.
inline bool embeds_stably(const Lattice& gamma1, const Lattice& L, const Lattice& gamma2) {
    Lattice src = direct_sum(gamma1, L);
    Int nstar = 1;
    for (int i = 0; i < src.rank(); ++i) nstar += abs_int(src.gram(i, i));
    Lattice target = direct_sum(gamma2, Lattice::standard_diagonal((int)nstar.convert_to<long>()));
    bool found = false;
    detail::embed_search(src, target, [&](const IntMat& M) {
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
        if (reduce_stable(Lattice{g}).core.rank() == 0) {
            found = true;
            return false;
        }
        return true;
    });
    return found;
}

} // namespace detail

// The finite set of stable classes [L] with core rank <= rank_cap,
// |det L| = |D|, delta(L) <= C, and gamma1 + L embedding into
// gamma2 + <-1>^N at matching total rank (padding by units allowed; the
// membership is a stable-class property).  Audits record every candidate
// that reached the filters.
inline BoundedSetResult enumerate_bounded_set(const BoundedSetQuery& query,
                                              const EnumerateOptions& opts = {}) {
    if (query.rank_cap < 0) throw BadInput("enumerate_bounded_set: negative rank cap");
    if (query.C < 0) throw BadInput("enumerate_bounded_set: C must be nonnegative");
    if (query.D == 0) throw BadInput("enumerate_bounded_set: D must be nonzero");
    if (!is_negative_definite(query.gamma1) || !is_negative_definite(query.gamma2))
        throw NotDefinite("enumerate_bounded_set: gamma lattices must be negative definite");
    Int dabs = abs_int(query.D);
    BoundedSetResult result;
    for (int r = 0; r <= query.rank_cap; ++r) {
        std::vector<Lattice> cores;
        for (const Lattice& L : detail::region_classes(r, dabs, r == 0 ? 1 : 2, opts)) {
            if (reduce_stable(L).split_count != 0) continue;
            cores.push_back(L);
        }
        for (const Lattice& L : cores) {
            CandidateAudit audit;
            audit.lattice = L;
            try {
                audit.delta = delta_invariant(L);
                audit.delta_ok = audit.delta <= query.C;
                if (audit.delta_ok)
                    audit.embed_ok = detail::embeds_stably(query.gamma1, L, query.gamma2);
            } catch (const DeadlineExceeded&) {
                audit.cap_hit = true;
            }
            if (audit.delta_ok && audit.embed_ok) result.classes.push_back(L);
            result.audits.push_back(std::move(audit));
        }
    }
    std::sort(result.classes.begin(), result.classes.end(),
              [](const Lattice& a, const Lattice& b) { return lattice_less(a, b); });
    return result;
}

} // namespace latbound
