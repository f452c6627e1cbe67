#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "latbound/json_io.hpp"
#include "latbound/verify.hpp"

namespace lb = latbound;

namespace {

struct GlobalOpts {
    bool json = false;
    int cap = 0; // 0 = per-command default
    int threads = 1;
};

std::string rat_text(const lb::Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

lb::Rat parse_rat(const std::string& s) { return lb::rat_from_json(lb::Json(s)); }

lb::Lattice load_lattice(const std::string& path) {
    return lb::lattice_from_json(lb::load_json_file(path));
}

lb::SeifertForm load_seifert(const std::string& path) {
    return lb::seifert_from_json(lb::load_json_file(path));
}

void print_json(const lb::Json& j) { std::cout << j.dump() << "\n"; }

void print_gram(const lb::IntMat& m) {
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) std::cout << (j ? " " : "") << m(i, j);
        std::cout << "\n";
    }
    if (m.rows == 0) std::cout << "(empty)\n";
}

std::string seifert_text(const lb::SeifertForm& f) {
    std::ostringstream os;
    os << "M(" << f.e0;
    for (const auto& [a, b] : f.pairs) os << ";(" << a << "," << b << ")";
    os << ")";
    return os.str();
}

const char* status_name(lb::VerifyStatus s) {
    switch (s) {
        case lb::VerifyStatus::Pass: return "pass";
        case lb::VerifyStatus::Fail: return "fail";
        default: return "skipped(cap)";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"negative definite lattices smoothly bounded by rational homology spheres"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_flag("--json", g.json, "machine-readable output");
    app.add_option("--cap", g.cap, "search cap: enumeration rank cap, report sweep slack");
    app.add_option("--threads", g.threads, "worker threads for enumeration");

    struct Args {
        std::string file_a, file_b, target;
        long long bound = 4;
        std::string sfile, dy;
        int slack = 0;
        int rank = 0;
        long long det = 1;
        int rank_cap = 0;
        std::string delta_max;
        std::string g1path, g2path;
        std::string C = "0";
        long long D = 1;
        long long h = 1;
    } a;
    int rc = 0;

    // ---- lattice group ----
    CLI::App* lattice = app.add_subcommand("lattice", "operations on one or two Gram matrices");
    lattice->require_subcommand(1);

    CLI::App* l_det = lattice->add_subcommand("det", "determinant of the Gram matrix");
    l_det->add_option("file", a.file_a, "lattice JSON file")->required();
    l_det->callback([&] {
        lb::Int d = lb::determinant(load_lattice(a.file_a));
        if (g.json)
            print_json({{"det", lb::int_to_json(d)}});
        else
            std::cout << d << "\n";
    });

    CLI::App* l_def = lattice->add_subcommand("definite", "test negative definiteness");
    l_def->add_option("file", a.file_a, "lattice JSON file")->required();
    l_def->callback([&] {
        bool nd = lb::is_negative_definite(load_lattice(a.file_a));
        if (g.json)
            print_json({{"negative_definite", nd}});
        else
            std::cout << (nd ? "negative definite" : "not negative definite") << "\n";
    });

    CLI::App* l_delta = lattice->add_subcommand("delta", "delta invariant of a negative definite lattice");
    l_delta->add_option("file", a.file_a, "lattice JSON file")->required();
    l_delta->callback([&] {
        lb::Rat d = lb::delta_invariant(load_lattice(a.file_a));
        if (g.json)
            print_json({{"delta", lb::rat_to_json(d)}});
        else
            std::cout << rat_text(d) << "\n";
    });

    CLI::App* l_red = lattice->add_subcommand("reduce", "split off all <-1> summands");
    l_red->add_option("file", a.file_a, "lattice JSON file")->required();
    l_red->callback([&] {
        lb::StableReduction r = lb::reduce_stable(load_lattice(a.file_a));
        if (g.json) {
            print_json({{"core", lb::lattice_to_json(r.core)}, {"split_count", r.split_count}});
        } else {
            std::cout << "split <-1> summands: " << r.split_count << "\n";
            print_gram(r.core.gram);
        }
    });

    CLI::App* l_iso = lattice->add_subcommand("isometric", "test two lattices for isometry");
    l_iso->add_option("first", a.file_a, "lattice JSON file")->required();
    l_iso->add_option("second", a.file_b, "lattice JSON file")->required();
    l_iso->callback([&] {
        std::optional<lb::IntMat> iso = lb::is_isometric(load_lattice(a.file_a), load_lattice(a.file_b));
        if (g.json) {
            lb::Json j;
            j["isometric"] = (bool)iso;
            j["map"] = iso ? lb::matrix_to_json(*iso) : lb::Json(nullptr);
            print_json(j);
        } else if (iso) {
            std::cout << "isometric; basis map:\n";
            print_gram(*iso);
        } else {
            std::cout << "not isometric\n";
        }
    });

    CLI::App* l_emb = lattice->add_subcommand(
        "embed", "find an embedding into a target lattice; exits 1 when none exists");
    l_emb->add_option("file", a.file_a, "source lattice JSON file")->required();
    l_emb->add_option("--target", a.target, "diag:N or a lattice JSON file")->required();
    l_emb->callback([&] {
        lb::Lattice S = load_lattice(a.file_a);
        lb::Lattice T{lb::IntMat(0, 0)};
        std::optional<lb::IntMat> w;
        if (a.target.rfind("diag:", 0) == 0) {
            int N = 0;
            try {
                N = std::stoi(a.target.substr(5));
            } catch (const std::exception&) {
                throw lb::BadInput("embed: malformed --target " + a.target);
            }
            if (N < 0) throw lb::BadInput("embed: negative target rank");
            T = lb::Lattice::standard_diagonal(N);
            w = lb::embed_in_diagonal(S, N);
        } else {
            T = load_lattice(a.target);
            std::vector<lb::IntMat> v = lb::enumerate_embeddings(S, T, 1);
            if (!v.empty()) w = v[0];
        }
        if (w && !lb::verify_embedding(S, T, *w)) throw lb::Error("embed: witness failed Gram check");
        if (g.json) {
            lb::Json j;
            j["embeds"] = (bool)w;
            j["witness"] = w ? lb::matrix_to_json(*w) : lb::Json(nullptr);
            print_json(j);
        } else if (w) {
            std::cout << "embeds; witness columns are source images:\n";
            print_gram(*w);
        } else {
            std::cout << "no embedding\n";
        }
        rc = w ? 0 : 1;
    });

    CLI::App* l_sv = lattice->add_subcommand("shortvecs", "nonzero vectors up to sign with |norm| <= bound");
    l_sv->add_option("file", a.file_a, "lattice JSON file")->required();
    l_sv->add_option("--bound", a.bound, "norm bound (default 4)");
    l_sv->callback([&] {
        std::vector<lb::ShortVector> vs = lb::shortest_vectors(load_lattice(a.file_a), lb::Int(a.bound));
        if (g.json) {
            lb::Json arr = lb::Json::array();
            for (const auto& v : vs) {
                lb::Json coords = lb::Json::array();
                for (const lb::Int& c : v.coords) coords.push_back(lb::int_to_json(c));
                arr.push_back({{"coords", coords}, {"norm", lb::int_to_json(v.norm)}});
            }
            print_json({{"bound", a.bound}, {"vectors", arr}});
        } else {
            for (const auto& v : vs) {
                std::cout << v.norm << ":";
                for (const lb::Int& c : v.coords) std::cout << " " << c;
                std::cout << "\n";
            }
            std::cout << vs.size() << " vectors with |norm| <= " << a.bound << "\n";
        }
    });

    // ---- seifert group ----
    CLI::App* seifert = app.add_subcommand("seifert", "operations on Seifert fibered spaces over S^2");
    seifert->require_subcommand(1);

    CLI::App* s_norm = seifert->add_subcommand("normalize", "canonical form with a > b > 0");
    s_norm->add_option("file", a.sfile, "seifert JSON file")->required();
    s_norm->callback([&] {
        lb::SeifertForm nf = lb::normalize(load_seifert(a.sfile));
        if (g.json)
            print_json(lb::seifert_to_json(nf));
        else
            std::cout << seifert_text(nf) << "\n";
    });

    CLI::App* s_euler = seifert->add_subcommand("euler", "rational Euler number");
    s_euler->add_option("file", a.sfile, "seifert JSON file")->required();
    s_euler->callback([&] {
        lb::Rat e = lb::euler_number(load_seifert(a.sfile));
        if (g.json)
            print_json({{"euler", lb::rat_to_json(e)}});
        else
            std::cout << rat_text(e) << "\n";
    });

    CLI::App* s_gram = seifert->add_subcommand("gram", "Gram matrix of the star-shaped plumbing");
    s_gram->add_option("file", a.sfile, "seifert JSON file")->required();
    s_gram->callback([&] {
        lb::Lattice L = lb::plumbing_gram(lb::normalize(load_seifert(a.sfile)));
        if (g.json)
            print_json(lb::lattice_to_json(L));
        else
            print_gram(L.gram);
    });

    CLI::App* s_cls = seifert->add_subcommand("classify", "match against the spherical families");
    s_cls->add_option("file", a.sfile, "seifert JSON file")->required();
    s_cls->callback([&] {
        std::optional<lb::SphericalType> t = lb::classify_spherical(lb::normalize(load_seifert(a.sfile)));
        if (g.json) {
            lb::Json j;
            j["family"] = t ? lb::Json(lb::family_name(t->family)) : lb::Json(nullptr);
            j["reversed"] = t ? lb::Json(t->reversed) : lb::Json(nullptr);
            print_json(j);
        } else if (t) {
            std::cout << lb::family_name(t->family) << (t->reversed ? " (reversed orientation)" : "") << "\n";
        } else {
            std::cout << "none\n";
        }
    });

    CLI::App* s_rev = seifert->add_subcommand("reverse", "normal form of the orientation reversal");
    s_rev->add_option("file", a.sfile, "seifert JSON file")->required();
    s_rev->callback([&] {
        lb::SeifertForm r = lb::reverse_orientation(lb::normalize(load_seifert(a.sfile)));
        if (g.json)
            print_json(lb::seifert_to_json(r));
        else
            std::cout << seifert_text(r) << "\n";
    });

    CLI::App* s_rep = seifert->add_subcommand(
        "report", "bounding obstructions from the plumbing; exits 1 when the positive side is obstructed");
    s_rep->add_option("file", a.sfile, "seifert JSON file")->required();
    s_rep->add_option("--dy", a.dy, "correction-term bound d(Y) as p/q");
    s_rep->add_option("--slack", a.slack, "extra diagonal rank for the sweep (default 4)");
    s_rep->callback([&] {
        std::optional<lb::Rat> dy;
        if (!a.dy.empty()) dy = parse_rat(a.dy);
        int slack = a.slack > 0 ? a.slack : (g.cap > 0 ? g.cap : 4);
        lb::ObstructionReport r = lb::obstruction_report(load_seifert(a.sfile), dy, slack);
        if (g.json) {
            print_json(lb::report_to_json(r));
        } else {
            std::cout << "normal form:  " << seifert_text(r.normal_form) << "\n";
            std::cout << "euler:        " << rat_text(r.euler) << "\n";
            std::cout << "|H1|:         " << r.h1_order << "\n";
            std::cout << "delta:        " << rat_text(r.delta) << "\n";
            if (r.delta_bound_used)
                std::cout << "d(Y) bound:   " << rat_text(*r.delta_bound_used) << "\n";
            std::cout << "positive side: " << lb::verdict_name(r.donaldson_positive_side) << "\n";
            std::cout << "both-sides sufficient: " << (r.both_definite_sufficient ? "yes" : "no") << "\n";
        }
        rc = r.donaldson_positive_side == lb::DonaldsonVerdict::Obstructed ? 1 : 0;
    });

    // ---- enumerate group ----
    CLI::App* enumerate = app.add_subcommand("enumerate", "finite searches over definite lattices");
    enumerate->require_subcommand(1);

    CLI::App* e_lat = enumerate->add_subcommand("lattices", "isometry classes at fixed rank and |det|");
    e_lat->add_option("--rank", a.rank, "rank")->required();
    e_lat->add_option("--det", a.det, "|det|")->required();
    e_lat->callback([&] {
        lb::EnumerateOptions eo;
        eo.threads = g.threads;
        eo.rank_cap = std::max(g.cap > 0 ? g.cap : 8, a.rank);
        std::vector<lb::Lattice> cls = lb::enumerate_definite(a.rank, lb::Int(a.det), eo);
        if (g.json) {
            lb::Json arr = lb::Json::array();
            for (const auto& L : cls) arr.push_back(lb::lattice_to_json(L));
            print_json({{"count", cls.size()}, {"classes", arr}});
        } else {
            std::cout << cls.size() << " classes\n";
            for (const auto& L : cls) {
                print_gram(L.gram);
                std::cout << "\n";
            }
        }
    });

    CLI::App* e_uni = enumerate->add_subcommand("unimodular", "split-free stable classes of unimodular lattices");
    e_uni->add_option("--rank-cap", a.rank_cap, "largest rank to sweep");
    e_uni->add_option("--delta-max", a.delta_max, "discard classes with delta above this p/q");
    e_uni->callback([&] {
        int cap = a.rank_cap > 0 ? a.rank_cap : (g.cap > 0 ? g.cap : 6);
        std::optional<lb::Rat> C;
        if (!a.delta_max.empty()) C = parse_rat(a.delta_max);
        lb::EnumerateOptions eo;
        eo.threads = g.threads;
        eo.rank_cap = std::max(8, cap);
        std::vector<lb::Lattice> cls = lb::unimodular_stable_classes(cap, C, eo);
        if (g.json) {
            lb::Json arr = lb::Json::array();
            for (const auto& L : cls) arr.push_back(lb::lattice_to_json(L));
            print_json({{"count", cls.size()}, {"classes", arr}});
        } else {
            std::cout << cls.size() << " stable classes\n";
            for (const auto& L : cls) {
                print_gram(L.gram);
                std::cout << "\n";
            }
        }
    });

    CLI::App* e_dets = enumerate->add_subcommand("dets", "determinants admissible for a bounding manifold");
    e_dets->add_option("order", a.h, "order of H^2 of the bounding candidate")->required();
    e_dets->callback([&] {
        std::vector<lb::Int> ds = lb::admissible_determinants(lb::Int(a.h));
        if (g.json) {
            lb::Json arr = lb::Json::array();
            for (const lb::Int& d : ds) arr.push_back(lb::int_to_json(d));
            print_json({{"admissible", arr}});
        } else {
            for (size_t i = 0; i < ds.size(); ++i) std::cout << (i ? " " : "") << ds[i];
            std::cout << "\n";
        }
    });

    CLI::App* e_bnd = enumerate->add_subcommand(
        "bounded", "classes compatible with delta bound C and determinant divisor D");
    e_bnd->add_option("--gamma1", a.g1path, "required summand, lattice JSON file");
    e_bnd->add_option("--gamma2", a.g2path, "target summand, lattice JSON file");
    e_bnd->add_option("--C", a.C, "delta bound as p/q")->required();
    e_bnd->add_option("--D", a.D, "determinant divisor")->required();
    e_bnd->callback([&] {
        lb::BoundedSetQuery q;
        if (!a.g1path.empty()) q.gamma1 = load_lattice(a.g1path);
        if (!a.g2path.empty()) q.gamma2 = load_lattice(a.g2path);
        q.C = parse_rat(a.C);
        q.D = lb::Int(a.D);
        if (g.cap <= 0) throw lb::BadInput("enumerate bounded: --cap is required");
        q.rank_cap = g.cap;
        lb::EnumerateOptions eo;
        eo.threads = g.threads;
        eo.rank_cap = std::max(8, q.rank_cap);
        lb::BoundedSetResult res = lb::enumerate_bounded_set(q, eo);
        if (g.json) {
            lb::Json cls = lb::Json::array();
            for (const auto& L : res.classes) cls.push_back(lb::lattice_to_json(L));
            lb::Json audits = lb::Json::array();
            for (const auto& au : res.audits)
                audits.push_back({{"gram", lb::matrix_to_json(au.lattice.gram)},
                                  {"delta", lb::rat_to_json(au.delta)},
                                  {"delta_ok", au.delta_ok},
                                  {"embed_ok", au.embed_ok},
                                  {"cap_hit", au.cap_hit}});
            print_json({{"classes", cls}, {"audits", audits}});
        } else {
            std::cout << res.classes.size() << " classes\n";
            for (const auto& L : res.classes) {
                print_gram(L.gram);
                std::cout << "\n";
            }
            for (const auto& au : res.audits) {
                std::cout << "candidate rank " << au.lattice.rank() << ": delta=" << rat_text(au.delta)
                          << (au.delta_ok ? " delta-ok" : " delta-reject")
                          << (au.embed_ok ? " embeds" : " no-embed") << (au.cap_hit ? " cap-hit" : "")
                          << "\n";
            }
        }
    });

    // ---- verify ----
    CLI::App* verify = app.add_subcommand("verify", "run the built-in reference-value gauntlet");
    verify->callback([&] {
        lb::VerifyOptions vo;
        vo.threads = g.threads;
        std::vector<lb::VerificationRecord> recs = lb::run_verification(vo);
        int fails = 0;
        if (g.json) {
            lb::Json arr = lb::Json::array();
            for (const auto& r : recs) {
                arr.push_back({{"criterion", r.criterion},
                               {"case", r.case_name},
                               {"expected", r.expected},
                               {"observed", r.observed},
                               {"status", status_name(r.status)},
                               {"ms", r.ms}});
                fails += r.status == lb::VerifyStatus::Fail;
            }
            print_json(arr);
        } else {
            for (const auto& r : recs) {
                std::cout << "[" << r.criterion << "] " << r.case_name << ": " << status_name(r.status)
                          << " (" << r.ms << " ms)\n";
                if (r.status == lb::VerifyStatus::Fail) {
                    std::cout << "    expected: " << r.expected << "\n";
                    std::cout << "    observed: " << r.observed << "\n";
                    ++fails;
                }
            }
            std::cout << (fails ? "FAIL" : "PASS") << "\n";
        }
        rc = fails ? 1 : 0;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const lb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
