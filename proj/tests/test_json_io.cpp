#include <catch2/catch_amalgamated.hpp>

#include <latbound/json_io.hpp>
#include <latbound/seifert.hpp>

#include "fixtures.hpp"

#include <cstdio>
#include <fstream>

using namespace latbound;
using fixtures::lat;

TEST_CASE("integers round-trip through JSON") {
    CHECK(int_to_json(Int(-7)).is_number());
    CHECK(int_from_json(int_to_json(Int(-7))) == -7);

    Int big = Int(1) << 90;
    Json j = int_to_json(big);
    CHECK(j.is_string());
    CHECK(int_from_json(j) == big);
    CHECK(int_from_json(int_to_json(-big)) == -big);

    CHECK(int_from_json(Json(12)) == 12);
    CHECK(int_from_json(Json("-12")) == -12);
    CHECK_THROWS_AS(int_from_json(Json("zebra")), BadInput);
    CHECK_THROWS_AS(int_from_json(Json(1.5)), BadInput);
}

TEST_CASE("rationals serialize as fraction strings") {
    CHECK(rat_to_json(Rat(-1, 30)).get<std::string>() == "-1/30");
    CHECK(rat_to_json(Rat(2)).get<std::string>() == "2");

    CHECK(rat_from_json(Json("3/4")) == Rat(3, 4));
    CHECK(rat_from_json(Json("-5")) == -5);
    CHECK(rat_from_json(Json(7)) == 7);
    CHECK(rat_from_json(rat_to_json(Rat(22, 7))) == Rat(22, 7));

    CHECK_THROWS_AS(rat_from_json(Json("1/0")), BadInput);
    CHECK_THROWS_AS(rat_from_json(Json("a/b")), BadInput);
    CHECK_THROWS_AS(rat_from_json(Json("1/2/3")), BadInput);
}

TEST_CASE("lattices round-trip through JSON") {
    Lattice A = fixtures::a2();
    Lattice back = lattice_from_json(lattice_to_json(A));
    CHECK(back == A);

    Lattice empty = lattice_from_json(Json::parse(R"({"gram": []})"));
    CHECK(empty.rank() == 0);
    CHECK(lattice_to_json(Lattice::empty())["gram"].is_array());

    Lattice huge = Lattice::diagonal({-(Int(1) << 80)});
    CHECK(lattice_from_json(lattice_to_json(huge)) == huge);

    CHECK_THROWS_AS(lattice_from_json(Json::parse(R"({"gram": [[1,2],[2]]})")), BadInput);
    CHECK_THROWS_AS(lattice_from_json(Json::parse(R"({"gram": [[1,2]]})")), BadInput);
    CHECK_THROWS_AS(lattice_from_json(Json::parse(R"({"gram": [[-1,2],[1,-1]]})")), BadInput);
    CHECK_THROWS_AS(lattice_from_json(Json::parse(R"({"nogram": 3})")), BadInput);
}

TEST_CASE("seifert forms round-trip through JSON") {
    SeifertForm f;
    f.e0 = -2;
    f.pairs = {{2, 1}, {3, 2}, {5, 4}};
    CHECK(seifert_from_json(seifert_to_json(f)) == f);

    Json j = Json::parse(R"({"e0": -2, "pairs": [[2,1],[3,2],[5,4]]})");
    CHECK(seifert_from_json(j) == f);

    CHECK_THROWS_AS(seifert_from_json(Json::parse(R"({"e0": 1, "pairs": [[2]]})")), BadInput);
    CHECK_THROWS_AS(seifert_from_json(Json::parse(R"({"pairs": []})")), BadInput);
}

TEST_CASE("obstruction reports serialize every field") {
    SeifertForm f;
    f.e0 = -2;
    f.pairs = {{2, 1}, {3, 2}, {5, 4}};
    Json j = report_to_json(obstruction_report(f));

    CHECK(j["euler"].get<std::string>() == "-1/30");
    CHECK(j["h1_order"] == 1);
    CHECK(j["delta"].get<std::string>() == "2");
    CHECK(j["delta_bound_used"].get<std::string>() == "2");
    CHECK(j["donaldson_positive_side"] == "obstructed");
    CHECK(j["both_definite_sufficient"] == false);
    CHECK(j["gram"].is_array());
    CHECK(seifert_from_json(j["normal_form"]) == f);

    SeifertForm lens;
    lens.e0 = -2;
    lens.pairs = {{3, 1}};
    Json l = report_to_json(obstruction_report(lens));
    CHECK(l["delta_bound_used"].is_null());
    CHECK(l["donaldson_positive_side"] == "embeds");

    CHECK(std::string(verdict_name(DonaldsonVerdict::CapExceeded)) == "cap_exceeded");
}

TEST_CASE("JSON files load with clear failure modes") {
    const char* path = "latbound_test_tmp.json";
    {
        std::ofstream out(path);
        out << R"({"gram": [[-2]]})";
    }
    Json j = load_json_file(path);
    CHECK(lattice_from_json(j) == Lattice::diagonal({-2}));
    std::remove(path);

    CHECK_THROWS_AS(load_json_file("latbound_no_such_file.json"), BadInput);

    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(load_json_file(path), BadInput);
    std::remove(path);
}
