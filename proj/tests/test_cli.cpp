#include <sstream>

#include "cli.hpp"
#include "doctest.h"

using namespace fcrystal;
namespace cli = fcrystal::cli;

TEST_CASE("group spec parsing") {
    auto [b3, mu] = cli::parse_group_spec_text(
        R"({"family":"B","rank":3,"factors":1,"twist":1,"mu":{"l":1}})");
    CHECK(b3.family == Family::B);
    CHECK(b3.rank == 3);
    CHECK(mu.l == 1);

    auto [gsp, siegel] = cli::parse_group_spec_text(
        R"({"family":"GSp","rank":2,"mu":"siegel"})");
    CHECK(gsp.factors == 1);
    CHECK(gsp.twist == 1);
    CHECK(siegel.similitude == -1);

    CHECK_THROWS_AS(cli::parse_group_spec_text(
                        R"({"family":"A","rank":1,"twist":2,"mu":{"l":1}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_group_spec_text(R"({"family":"B","rank":2})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_group_spec_text(R"(not json)"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_group_spec_text(
                        R"({"family":"B","rank":2,"mu":{"l":1},"junk":1})"),
                    std::invalid_argument);
}

TEST_CASE("operator record parsing") {
    auto rec = cli::parse_monomial_operator_text(
        R"({"size":4,"permutation":[2,3,4,1],"exponents":[0,0,2,2]})");
    CHECK(rec.op.perm == std::vector<int>{1, 2, 3, 0});
    CHECK_FALSE(rec.pairing.has_value());

    auto paired = cli::parse_monomial_operator_text(
        R"({"size":4,"permutation":[1,2,3,4],"exponents":[0,0,1,1],
            "pairing":[3,4,1,2],"pairing_slope":"1"})");
    REQUIRE(paired.pairing.has_value());
    CHECK(paired.pairing->similitude_slope == Rat(1));

    CHECK_THROWS_AS(cli::parse_monomial_operator_text(
                        R"({"size":3,"permutation":[1,1,2],"exponents":[0,0,0]})"),
                    std::invalid_argument);
}

TEST_CASE("split problem parsing with p-adic strings") {
    auto pb = cli::parse_split_problem_text(R"({
        "p": 5, "precision": 6,
        "block_sizes": [1, 1], "block_slopes": [0, 1],
        "phi": [[1, 0], [0, "p^1*1"]],
        "u":   [[1, 0], ["5^0*1", 1]]
    })");
    CHECK(pb.phi.at(1, 1).valuation() == 1);
    CHECK(pb.u.at(1, 0).valuation() == 0);
    auto h = split_slopes(pb, 6);
    CHECK(verify_conjugation(h, pb.u, pb.phi, 6) >= 6);

    CHECK_THROWS_AS(cli::parse_padic_entry(5, 6, "7^1*1"), std::invalid_argument);
}

TEST_CASE("strata emission is byte stable") {
    auto [datum, mu] = cli::parse_group_spec_text(
        R"({"family":"B","rank":2,"mu":{"l":1}})");
    auto res = strata(datum, mu);

    cli::EmitOptions csv;
    csv.format = cli::Format::Csv;
    std::ostringstream a, b;
    cli::emit_strata(datum, res, csv, a);
    cli::emit_strata(datum, res, csv, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("nu,polygon,representative,count\n", 0) == 0);
    CHECK(a.str().find("1:0,-1:1;0:3;1:1,") != std::string::npos);

    cli::EmitOptions jsonl;
    jsonl.format = cli::Format::JsonLines;
    std::ostringstream j;
    cli::emit_strata(datum, res, jsonl, j);
    CHECK(j.str().find("\"nu\":\"1/2:1/2\"") != std::string::npos);

    // threaded scan emits identical bytes
    StrataOptions opt;
    opt.threads = 3;
    auto res3 = strata(datum, mu, opt);
    std::ostringstream c;
    cli::emit_strata(datum, res3, csv, c);
    CHECK(a.str() == c.str());
}

TEST_CASE("polygon emission") {
    auto rec = cli::parse_monomial_operator_text(
        R"({"size":4,"permutation":[2,1,3,4],"exponents":[1,0,0,2]})");
    cli::EmitOptions text;
    text.vertices = true;
    std::ostringstream out;
    cli::emit_polygon(rec, text, out);
    CHECK(out.str().find("polygon: 0:1;1/2:2;2:1") != std::string::npos);
    CHECK(out.str().find("vertices: 0:0;1:0;3:1;4:3") != std::string::npos);
}

TEST_CASE("named checks run and fail loudly on unknown names") {
    auto rep = cli::run_check("example-2.3.4", {});
    CHECK(rep.pass);
    CHECK(rep.elements_scanned == 24);

    cli::CheckParams small;
    small.max_rank = 2;
    CHECK(cli::run_check("prop-4.6.1a", small).pass);
    CHECK(cli::run_check("manin-gsp", small).pass);

    CHECK_THROWS_AS(cli::run_check("no-such-check", {}), std::invalid_argument);
}
