#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "latbound/charvec.hpp"
#include "latbound/embedding.hpp"
#include "latbound/errors.hpp"
#include "latbound/lattice.hpp"
#include "latbound/matrix.hpp"
#include "latbound/types.hpp"

namespace latbound {

// Closed oriented Seifert fibered space over S^2 with base data
// (e0; (a1,b1),...,(ak,bk)). Each pair must be coprime; the space is a
// rational homology sphere exactly when no multiplicity is zero and the
// Euler number is nonzero.
struct SeifertForm {
    Int e0 = 0;
    std::vector<std::pair<Int, Int>> pairs;

    int fiber_count() const { return (int)pairs.size(); }

    // Normal form: every retained pair satisfies a > b > 0.
    bool is_normal() const {
        for (const auto& [a, b] : pairs)
            if (!(a > b && b > 0)) return false;
        return true;
    }

    bool operator==(const SeifertForm& o) const {
        return e0 == o.e0 && pairs == o.pairs;
    }
};

namespace detail {

inline void check_fibers(const SeifertForm& f) {
    for (const auto& [a, b] : f.pairs) {
        if (a == 0) throw NotQHS("seifert: fiber multiplicity is zero");
        if (boost::multiprecision::gcd(abs_int(a), abs_int(b)) != 1)
            throw BadInput("seifert: fiber pair is not coprime");
    }
}

} // namespace detail

// Continued fraction with minus signs: a/b = x1 - 1/(x2 - 1/(...)) with all
// coefficients >= 2, unique for coprime a > b > 0. Greedy: x = ceil(a/b).
inline std::vector<Int> hj_expand(Int a, Int b) {
    if (!(a > b && b > 0)) throw BadFraction("hj_expand: need a > b > 0");
    if (boost::multiprecision::gcd(a, b) != 1)
        throw BadFraction("hj_expand: need gcd(a, b) = 1");
    std::vector<Int> coeffs;
    while (b != 0) {
        Int x = (a + b - 1) / b;
        coeffs.push_back(x);
        Int next = x * b - a; // in [0, b)
        a = b;
        b = next;
    }
    return coeffs;
}

// Evaluates [x1,...,xl] back to the fraction it expands. Inverse of
// hj_expand on its image.
inline Rat hj_evaluate(const std::vector<Int>& coeffs) {
    if (coeffs.empty()) throw BadFraction("hj_evaluate: empty expansion");
    Rat v(coeffs.back());
    for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) {
        if (v == 0) throw BadFraction("hj_evaluate: zero tail");
        v = Rat(*it) - 1 / v;
    }
    return v;
}

// Canonical representative of the homeomorphism type: unit fibers are
// absorbed into e0 and every remaining pair is twisted into 0 < b < a,
// processing pairs left to right. Preserves the Euler number exactly.
inline SeifertForm normalize(const SeifertForm& f) {
    detail::check_fibers(f);
    SeifertForm out;
    out.e0 = f.e0;
    for (auto [a, b] : f.pairs) {
        if (a < 0) {
            a = -a;
            b = -b;
        }
        if (a == 1) {
            out.e0 += b;
            continue;
        }
        Int q = b / a;
        Int r = b - q * a;
        if (r < 0) {
            r += a;
            q -= 1;
        }
        out.e0 += q;
        out.pairs.emplace_back(a, r);
    }
    return out;
}

// e(M) = e0 + sum b_i/a_i. The canonical plumbing is negative definite
// exactly when this is negative.
inline Rat euler_number(const SeifertForm& f) {
    detail::check_fibers(f);
    Rat e(f.e0);
    for (const auto& [a, b] : f.pairs) e += Rat(b) / Rat(a);
    return e;
}

// Same space with the opposite orientation: (-e0-k; (a_i, a_i-b_i)),
// re-normalized. Negates the Euler number.
inline SeifertForm reverse_orientation(const SeifertForm& f) {
    if (!f.is_normal()) throw NotNormal("reverse_orientation: input not in normal form");
    SeifertForm out;
    out.e0 = -f.e0 - Int(f.fiber_count());
    for (const auto& [a, b] : f.pairs) out.pairs.emplace_back(a, a - b);
    return normalize(out);
}

// Star-shaped plumbing tree: one central vertex, one chain per exceptional
// fiber. Arm weights are the negated expansion coefficients of a_i/b_i.
struct PlumbingGraph {
    Int center_weight = 0;
    std::vector<std::vector<Int>> arms;

    int rank() const {
        int n = 1;
        for (const auto& arm : arms) n += (int)arm.size();
        return n;
    }

    // Vertex 0 is the center; each arm is laid out consecutively with +1
    // pairings along the chain and from the center to the first arm vertex.
    Lattice gram() const {
        IntMat g(rank(), rank());
        g(0, 0) = center_weight;
        int pos = 1;
        for (const auto& arm : arms) {
            int prev = 0;
            for (const Int& w : arm) {
                g(pos, pos) = w;
                g(prev, pos) = 1;
                g(pos, prev) = 1;
                prev = pos;
                ++pos;
            }
        }
        return Lattice{g};
    }
};

inline PlumbingGraph plumbing_graph(const SeifertForm& f) {
    if (!f.is_normal()) throw NotNormal("plumbing_graph: input not in normal form");
    PlumbingGraph p;
    p.center_weight = f.e0;
    for (const auto& [a, b] : f.pairs) {
        std::vector<Int> arm = hj_expand(a, b);
        for (Int& w : arm) w = -w;
        p.arms.push_back(std::move(arm));
    }
    return p;
}

inline Lattice plumbing_gram(const SeifertForm& f) { return plumbing_graph(f).gram(); }

enum class SphericalFamily { Cyclic, Dihedral, Tetrahedral, Octahedral, Icosahedral };

struct SphericalType {
    SphericalFamily family;
    bool reversed; // matched only after orientation reversal
};

// Matches f, or its reversal, against the spherical families in their
// normalized presentation with e0 <= -2: at most one exceptional fiber
// (cyclic), multiplicities (2,2,n) (dihedral), or (2,3,n) for n = 3, 4, 5.
inline std::optional<SphericalType> classify_spherical(const SeifertForm& f) {
    if (!f.is_normal()) throw NotNormal("classify_spherical: input not in normal form");
    auto family_of = [](const SeifertForm& g) -> std::optional<SphericalFamily> {
        if (g.e0 > -2) return std::nullopt;
        if (g.fiber_count() <= 1) return SphericalFamily::Cyclic;
        if (g.fiber_count() != 3) return std::nullopt;
        std::vector<Int> m;
        for (const auto& [a, b] : g.pairs) m.push_back(a);
        std::sort(m.begin(), m.end());
        if (m[0] != 2) return std::nullopt;
        if (m[1] == 2) return SphericalFamily::Dihedral;
        if (m[1] != 3) return std::nullopt;
        if (m[2] == 3) return SphericalFamily::Tetrahedral;
        if (m[2] == 4) return SphericalFamily::Octahedral;
        if (m[2] == 5) return SphericalFamily::Icosahedral;
        return std::nullopt;
    };
    if (auto fam = family_of(f)) return SphericalType{*fam, false};
    if (auto fam = family_of(reverse_orientation(f))) return SphericalType{*fam, true};
    return std::nullopt;
}

inline const char* family_name(SphericalFamily f) {
    switch (f) {
        case SphericalFamily::Cyclic: return "cyclic";
        case SphericalFamily::Dihedral: return "dihedral";
        case SphericalFamily::Tetrahedral: return "tetrahedral";
        case SphericalFamily::Octahedral: return "octahedral";
        default: return "icosahedral";
    }
}

// Normal form of the dihedral-type space D_{n,q} for coprime 1 < q < n:
// (-b; (2,1), (2,1), (q, bq-n)) where b is the leading expansion
// coefficient of n/q.
inline SeifertForm dihedral(const Int& n, const Int& q) {
    if (!(n > q && q > 1)) throw BadFraction("dihedral: need n > q > 1");
    if (boost::multiprecision::gcd(n, q) != 1)
        throw BadFraction("dihedral: need gcd(n, q) = 1");
    Int b = (n + q - 1) / q;
    SeifertForm f;
    f.e0 = -b;
    f.pairs = {{Int(2), Int(1)}, {Int(2), Int(1)}, {q, b * q - n}};
    return normalize(f);
}

// Sufficient condition for the space to bound negative definite forms with
// either orientation: e0 + k <= 0. Sharp: e0 + k = 1 can already fail.
inline bool both_definite_sufficient(const SeifertForm& f) {
    if (!f.is_normal()) throw NotNormal("both_definite_sufficient: input not in normal form");
    return f.e0 + Int(f.fiber_count()) <= 0;
}

enum class DonaldsonVerdict { Embeds, Obstructed, CapExceeded };

namespace detail {

// Rank beyond which growing the diagonal target cannot help: the image of
// basis vector i touches at most |q_ii| coordinates, and every nonzero
// pairing forces a shared coordinate, so walking a spanning forest of the
// nonzero-pairing graph bounds the union of supports by
// sum |q_ii| - (rank - #components). A failed search there is final.
inline Int diagonal_support_bound(const Lattice& L) {
    int n = L.rank();
    Int total = 0;
    for (int i = 0; i < n; ++i) total += abs_int(L.gram(i, i));
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int i = 0; i < n; ++i) {
        if (comp[i] != -1) continue;
        std::vector<int> stack{i};
        comp[i] = ncomp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w)
                if (comp[w] == -1 && L.gram(v, w) != 0) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }
    return std::max(total - Int(n - ncomp), Int(n));
}

} // namespace detail

// Whether a negative definite lattice embeds into some diagonal lattice
// <-1>^N. Embeddability is monotone in N and decided at the support bound,
// so a single search at min(rank + slack, bound) settles the sweep; when the
// slack cap is below the bound a failed search is only a cap verdict.
inline DonaldsonVerdict donaldson_positive_side(const Lattice& L, int slack = 4) {
    Int definitive = detail::diagonal_support_bound(L);
    Int cap = Int(L.rank()) + Int(slack);
    Int n_test = std::min(cap, definitive);
    if (embed_in_diagonal(L, n_test.convert_to<int>())) return DonaldsonVerdict::Embeds;
    return cap >= definitive ? DonaldsonVerdict::Obstructed : DonaldsonVerdict::CapExceeded;
}

// Correction-term values cited from the literature, keyed by normal form.
// Computing them is out of scope; anything else must be supplied by the
// caller.
inline std::optional<Rat> known_d_invariant(const SeifertForm& normal_form) {
    static const SeifertForm poincare{Int(-2), {{Int(2), Int(1)}, {Int(3), Int(2)}, {Int(5), Int(4)}}};
    if (normal_form == poincare) return Rat(2);
    return std::nullopt;
}

// Everything the bounding question needs about one Seifert form, computed
// from its negative definite plumbing.
struct ObstructionReport {
    SeifertForm normal_form;
    Rat euler;
    Int h1_order = 0; // |det| of the plumbing lattice
    Lattice gram;
    Rat delta; // delta invariant of the plumbing lattice
    std::optional<Rat> delta_bound_used; // externally supplied correction term
    DonaldsonVerdict donaldson_positive_side = DonaldsonVerdict::CapExceeded;
    bool both_definite_sufficient = false;
};

inline ObstructionReport obstruction_report(const SeifertForm& f,
                                            std::optional<Rat> d_invariant = std::nullopt,
                                            int slack = 4) {
    ObstructionReport r;
    r.normal_form = normalize(f);
    r.euler = euler_number(r.normal_form);
    r.gram = plumbing_gram(r.normal_form);
    if (!is_negative_definite(r.gram))
        throw NotDefinite("obstruction_report: plumbing is not negative definite");
    r.h1_order = abs_int(determinant(r.gram));
    r.delta = delta_invariant(r.gram);
    r.delta_bound_used = d_invariant ? d_invariant : known_d_invariant(r.normal_form);
    r.donaldson_positive_side = latbound::donaldson_positive_side(r.gram, slack);
    r.both_definite_sufficient = latbound::both_definite_sufficient(r.normal_form);
    return r;
}

} // namespace latbound
