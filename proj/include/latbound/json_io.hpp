#pragma once

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"

#include "latbound/errors.hpp"
#include "latbound/lattice.hpp"
#include "latbound/matrix.hpp"
#include "latbound/seifert.hpp"
#include "latbound/types.hpp"

namespace latbound {

using Json = nlohmann::json;

// Integers ride as JSON numbers while they fit in 64 bits and as decimal
// strings beyond, so nothing is ever rounded.
inline Json int_to_json(const Int& a) {
    static const Int lo((std::numeric_limits<long long>::min)());
    static const Int hi((std::numeric_limits<long long>::max)());
    if (a >= lo && a <= hi) return Json(a.convert_to<long long>());
    return Json(a.str());
}

inline Int int_from_json(const Json& j) {
    if (j.is_number_unsigned()) return Int(j.get<unsigned long long>());
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw BadInput("json: malformed integer string");
        }
    }
    throw BadInput("json: expected an integer or an integer string");
}

// Rationals serialize as exact strings, "p" or "p/q".
inline Json rat_to_json(const Rat& r) {
    std::ostringstream os;
    os << r;
    return Json(os.str());
}

inline Rat rat_from_json(const Json& j) {
    if (j.is_number_unsigned()) return Rat(Int(j.get<unsigned long long>()));
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    if (!j.is_string()) throw BadInput("json: expected a rational as a \"p/q\" string");
    const std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int p(s.substr(0, slash));
        Int q(s.substr(slash + 1));
        if (q == 0) throw BadInput("json: rational with zero denominator");
        return Rat(p) / Rat(q);
    } catch (const BadInput&) {
        throw;
    } catch (const std::exception&) {
        throw BadInput("json: malformed rational string");
    }
}

inline Json matrix_to_json(const IntMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(int_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline IntMat matrix_from_json(const Json& j) {
    if (!j.is_array()) throw BadInput("json: matrix must be an array of rows");
    int rows = (int)j.size();
    if (rows == 0) return IntMat(0, 0);
    if (!j[0].is_array()) throw BadInput("json: matrix rows must be arrays");
    int cols = (int)j[0].size();
    IntMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || (int)j[i].size() != cols)
            throw BadInput("json: ragged matrix");
        for (int c = 0; c < cols; ++c) m(i, c) = int_from_json(j[i][c]);
    }
    return m;
}

// {"gram": [[...], ...]}; the empty lattice is {"gram": []}.
inline Json lattice_to_json(const Lattice& L) { return Json{{"gram", matrix_to_json(L.gram)}}; }

inline Lattice lattice_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("gram"))
        throw BadInput("json: lattice needs a \"gram\" key");
    IntMat m = matrix_from_json(j.at("gram"));
    if (m.rows != m.cols) throw BadInput("json: gram matrix must be square");
    for (int i = 0; i < m.rows; ++i)
        for (int c = i + 1; c < m.cols; ++c)
            if (m(i, c) != m(c, i)) throw BadInput("json: gram matrix must be symmetric");
    return Lattice{m};
}

// {"e0": -2, "pairs": [[2,1],[3,2],[5,4]]}
inline Json seifert_to_json(const SeifertForm& f) {
    Json pairs = Json::array();
    for (const auto& [a, b] : f.pairs)
        pairs.push_back(Json::array({int_to_json(a), int_to_json(b)}));
    return Json{{"e0", int_to_json(f.e0)}, {"pairs", pairs}};
}

inline SeifertForm seifert_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("e0") || !j.contains("pairs"))
        throw BadInput("json: seifert form needs \"e0\" and \"pairs\"");
    SeifertForm f;
    f.e0 = int_from_json(j.at("e0"));
    if (!j.at("pairs").is_array()) throw BadInput("json: \"pairs\" must be an array");
    for (const Json& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2) throw BadInput("json: each pair must be [a, b]");
        f.pairs.emplace_back(int_from_json(p[0]), int_from_json(p[1]));
    }
    return f;
}

inline const char* verdict_name(DonaldsonVerdict v) {
    switch (v) {
        case DonaldsonVerdict::Embeds: return "embeds";
        case DonaldsonVerdict::Obstructed: return "obstructed";
        default: return "cap_exceeded";
    }
}

inline Json report_to_json(const ObstructionReport& r) {
    Json j;
    j["normal_form"] = seifert_to_json(r.normal_form);
    j["euler"] = rat_to_json(r.euler);
    j["h1_order"] = int_to_json(r.h1_order);
    j["gram"] = matrix_to_json(r.gram.gram);
    j["delta"] = rat_to_json(r.delta);
    j["delta_bound_used"] = r.delta_bound_used ? rat_to_json(*r.delta_bound_used) : Json(nullptr);
    j["donaldson_positive_side"] = verdict_name(r.donaldson_positive_side);
    j["both_definite_sufficient"] = r.both_definite_sufficient;
    return j;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw BadInput("json parse error in " + path + ": " + e.what());
    }
    return j;
}

} // namespace latbound
