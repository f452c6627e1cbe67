// Small tour of the finiteness machinery: class counts by determinant, the
// admissible determinants for a few H^2 orders, and one bounded-set query.

#include <latbound/enumeration.hpp>

#include <iostream>

using namespace latbound;

namespace {

void print_gram(const Lattice& L) {
    if (L.rank() == 0) {
        std::cout << "    (empty)\n";
        return;
    }
    for (int r = 0; r < L.rank(); ++r) {
        std::cout << "    ";
        for (int c = 0; c < L.rank(); ++c) std::cout << (c ? " " : "") << L.gram(r, c);
        std::cout << "\n";
    }
}

} // namespace

int main() {
    std::cout << "rank-2 negative definite classes by |det|\n";
    for (Int d = 1; d <= 8; ++d) {
        auto classes = enumerate_definite(2, d);
        std::cout << "  |det| = " << d << ": " << classes.size() << " class"
                  << (classes.size() == 1 ? "" : "es") << "\n";
    }

    std::cout << "\nadmissible lattice determinants for |H^2(Y)| = h\n";
    for (Int h : {Int(1), Int(4), Int(12), Int(36)}) {
        std::cout << "  h = " << h << ":";
        for (const Int& d : admissible_determinants(h)) std::cout << " " << d;
        std::cout << "\n";
    }

    // lattices with |det| = 2 and delta <= 1/4 whose sum with <-2> embeds
    // at matched rank: exactly the <-2> class itself
    BoundedSetQuery q;
    q.gamma1 = Lattice::diagonal({-2});
    q.C = Rat(1, 4);
    q.D = 2;
    q.rank_cap = 4;
    BoundedSetResult res = enumerate_bounded_set(q);
    std::cout << "\nbounded-set query (gamma1 = <-2>, C = 1/4, D = 2, cap 4)\n";
    std::cout << "  candidates audited: " << res.audits.size() << "\n";
    std::cout << "  classes surviving:  " << res.classes.size() << "\n";
    for (const Lattice& L : res.classes) print_gram(L);

    return 0;
}
