#include <random>
#include <set>

#include "doctest.h"
#include "fcrystal/errors.hpp"
#include "fcrystal/newton.hpp"

using namespace fcrystal;

namespace {

RationalCoweight cw(std::vector<std::vector<long long>> factors,
                    std::optional<long long> sim = std::nullopt) {
    RationalCoweight nu;
    for (auto& f : factors) {
        std::vector<Rat> row(f.begin(), f.end());
        nu.factors.push_back(std::move(row));
    }
    if (sim) nu.similitude = Rat(*sim);
    return nu;
}

} // namespace

TEST_CASE("Newton points of B_r one-weight data") {
    auto b2 = make_group_datum(Family::B, 2, 1, 1);
    auto mu = MinusculeSpec::from_l(b2, 1);
    CHECK(newton_point(b2, mu, identity_weyl(b2)) == cw({{1, 0}}));

    for (int r = 2; r <= 5; ++r) {
        auto br = make_group_datum(Family::B, r, 1, 1);
        auto mur = MinusculeSpec::from_l(br, 1);
        WeylElement cyc = identity_weyl(br);
        for (int q = 0; q < r; ++q) cyc.parts[0].image[q] = (q + 1) % r;
        auto nu = newton_point(br, mur, cyc);
        for (int i = 0; i < r; ++i) CHECK(nu.factors[0][i] == Rat(1, r));

        WeylElement flip = identity_weyl(br);
        flip.parts[0].sign[0] = -1;
        auto zero = newton_point(br, mur, flip);
        for (int i = 0; i < r; ++i) CHECK(zero.factors[0][i] == Rat(0));
    }
}

TEST_CASE("Newton polygons match the stated patterns") {
    auto b2 = make_group_datum(Family::B, 2, 1, 1);
    auto mu = MinusculeSpec::from_l(b2, 1);
    auto id_poly = newton_polygon_of(b2, mu, identity_weyl(b2));
    CHECK(id_poly.slopes == std::vector<std::pair<Rat, long long>>{
                                {Rat(-1), 1}, {Rat(0), 3}, {Rat(1), 1}});

    WeylElement two = identity_weyl(b2);
    two.parts[0].image = {1, 0};
    auto two_poly = newton_polygon_of(b2, mu, two);
    CHECK(two_poly.slopes == std::vector<std::pair<Rat, long long>>{
                                 {Rat(-1, 2), 2}, {Rat(0), 1}, {Rat(1, 2), 2}});

    auto gsp = make_group_datum(Family::GSp, 2, 1, 1);
    auto siegel = MinusculeSpec::siegel(gsp);
    auto ord = newton_polygon_of(gsp, siegel, identity_weyl(gsp));
    CHECK(ord.slopes ==
          std::vector<std::pair<Rat, long long>>{{Rat(0), 2}, {Rat(1), 2}});
}

TEST_CASE("basic detection") {
    auto b3 = make_group_datum(Family::B, 3, 1, 1);
    auto mu = MinusculeSpec::from_l(b3, 1);
    WeylElement all_flip = identity_weyl(b3);
    all_flip.parts[0].sign.assign(3, -1);
    CHECK(is_basic(b3, mu, all_flip));
    CHECK_FALSE(is_basic(b3, mu, identity_weyl(b3)));

    auto b2 = make_group_datum(Family::B, 2, 1, 1);
    CHECK_FALSE(is_basic(b2, MinusculeSpec::from_l(b2, 1), identity_weyl(b2)));
}

TEST_CASE("constructed basic elements") {
    auto b3 = make_group_datum(Family::B, 3, 1, 1);
    auto wb = construct_basic_element(b3);
    for (int q = 0; q < 3; ++q) CHECK(wb.parts[0].sign[q] == -1);
    CHECK(is_basic(b3, MinusculeSpec::from_l(b3, 1), wb));

    auto gl4 = make_group_datum(Family::GL, 4, 1, 1);
    auto wg = construct_basic_element(gl4);
    CHECK(wg.parts[0].image == std::vector<int>{1, 2, 3, 0});
    CHECK(is_basic(gl4, MinusculeSpec::from_l(gl4, 1), wg));

    auto d3 = make_group_datum(Family::D, 3, 1, 1);
    auto wd = construct_basic_element(d3);
    CHECK(is_basic(d3, MinusculeSpec::from_l(d3, 1), wd));
    CHECK(is_elliptic(d3, wd));
}

TEST_CASE("strata of small data") {
    for (int n = 1; n <= 3; ++n) {
        auto b2 = make_group_datum(Family::B, 2, n, 1);
        auto res = strata(b2, MinusculeSpec::from_l(b2, 1));
        CHECK(res.strata.size() == 3);
        std::set<RationalCoweight> nus;
        for (const auto& st : res.strata) nus.insert(st.nu);
        RationalCoweight top, mid, bot;
        top.factors.assign(n, {Rat(1, n), Rat(0)});
        mid.factors.assign(n, {Rat(1, 2 * n), Rat(1, 2 * n)});
        bot.factors.assign(n, {Rat(0), Rat(0)});
        CHECK(nus.count(top) == 1);
        CHECK(nus.count(mid) == 1);
        CHECK(nus.count(bot) == 1);
        unsigned long long total = 0;
        for (const auto& st : res.strata) total += st.count;
        CHECK(total == res.elements);
        CHECK(res.strata.size() <= res.elements); // P <= enumerated count
    }

    auto b3x2 = make_group_datum(Family::B, 3, 2, 1);
    CHECK(strata(b3x2, MinusculeSpec::from_l(b3x2, 2)).strata.size() == 7);

    auto gsp2 = make_group_datum(Family::GSp, 2, 1, 1);
    auto sres = strata(gsp2, MinusculeSpec::siegel(gsp2));
    CHECK(sres.strata.size() == 3);
}

TEST_CASE("reduced and full enumeration agree on strata") {
    for (int r = 2; r <= 3; ++r)
        for (int n = 1; n <= 2; ++n)
            for (int l = 1; l <= n; ++l) {
                auto datum = make_group_datum(Family::B, r, n, 1);
                auto mu = MinusculeSpec::from_l(datum, l);
                StrataOptions full;
                full.composite = false;
                auto a = strata(datum, mu);
                auto b = strata(datum, mu, full);
                REQUIRE(a.strata.size() == b.strata.size());
                for (size_t i = 0; i < a.strata.size(); ++i) {
                    CHECK(a.strata[i].nu == b.strata[i].nu);
                    CHECK(a.strata[i].polygon == b.strata[i].polygon);
                }
            }

    // twisted data and explicit multi-factor weights
    for (auto [fam, twist] : std::vector<std::pair<Family, int>>{{Family::D, 2},
                                                                 {Family::A, 2},
                                                                 {Family::GSp, 1}}) {
        auto datum = make_group_datum(fam, fam == Family::A ? 2 : 2, 2, twist);
        std::vector<std::vector<long long>> w(2, std::vector<long long>(datum.torus_dim(), 0));
        w[0][0] = 1;
        w[1][0] = -1;
        std::optional<long long> sim;
        if (datum.has_similitude()) sim = -1;
        auto mu = MinusculeSpec::explicit_weights(datum, std::move(w), sim);
        StrataOptions full;
        full.composite = false;
        auto a = strata(datum, mu);
        auto b = strata(datum, mu, full);
        REQUIRE(a.strata.size() == b.strata.size());
        for (size_t i = 0; i < a.strata.size(); ++i)
            CHECK(a.strata[i].nu == b.strata[i].nu);
    }
}

TEST_CASE("threaded strata scan is deterministic") {
    auto b4 = make_group_datum(Family::B, 4, 1, 1);
    auto mu = MinusculeSpec::from_l(b4, 1);
    StrataOptions threaded;
    threaded.threads = 4;
    auto a = strata(b4, mu);
    auto b = strata(b4, mu, threaded);
    REQUIRE(a.strata.size() == b.strata.size());
    for (size_t i = 0; i < a.strata.size(); ++i) {
        CHECK(a.strata[i].nu == b.strata[i].nu);
        CHECK(a.strata[i].count == b.strata[i].count);
        CHECK(a.strata[i].representative.str() == b.strata[i].representative.str());
    }
}

TEST_CASE("strata respect the element cap") {
    auto b4 = make_group_datum(Family::B, 4, 1, 1);
    StrataOptions opt;
    opt.max_elements = 10;
    CHECK_THROWS_AS(strata(b4, MinusculeSpec::from_l(b4, 1), opt), resource_limit_error);
}

TEST_CASE("exactly one basic stratum") {
    for (auto fam : {Family::B, Family::C, Family::D}) {
        auto datum = make_group_datum(fam, 3, 1, 1);
        auto mu = MinusculeSpec::from_l(datum, 1);
        auto res = strata(datum, mu);
        auto roots = positive_roots(datum);
        int basic = 0;
        for (const auto& st : res.strata) {
            bool central = true;
            for (const auto& a : roots)
                if (!pair_factor(st.nu, 0, a).is_zero()) central = false;
            basic += central;
        }
        CHECK(basic == 1);
    }
}

TEST_CASE("kottwitz classes") {
    auto b2 = make_group_datum(Family::B, 2, 1, 1);
    auto zero = MinusculeSpec::explicit_weights(b2, {{0, 0}}, std::nullopt);
    auto zc = kottwitz_class(b2, zero);
    for (long long r : zc.residues) CHECK(r == 0);
    for (long long f : zc.free_coords) CHECK(f == 0);

    auto one = MinusculeSpec::from_l(b2, 1);
    auto kc = kottwitz_class(b2, one);
    REQUIRE(kc.moduli == std::vector<long long>{2});
    CHECK(kc.residues == std::vector<long long>{1}); // the order-2 class

    auto gl3 = make_group_datum(Family::GL, 3, 1, 1);
    auto mu = MinusculeSpec::explicit_weights(gl3, {{2, 1, 0}}, std::nullopt);
    auto gc = kottwitz_class(gl3, mu);
    REQUIRE(gc.free_coords.size() == 1);
    CHECK((gc.free_coords[0] == 3 || gc.free_coords[0] == -3)); // total degree up to basis sign

    // the Newton point's free image matches the class invariant
    auto res = strata(gl3, mu);
    for (const auto& st : res.strata) {
        auto fp = newton_free_part(gl3, st.nu);
        REQUIRE(fp.size() == 1);
        CHECK(fp[0] == Rat(gc.free_coords[0]));
    }
}

TEST_CASE("admissibility bound") {
    auto b3 = make_group_datum(Family::B, 3, 1, 1);
    auto mu = MinusculeSpec::from_l(b3, 1);
    auto bound = minus_mu_bar(b3, mu);
    CHECK(newton_point(b3, mu, identity_weyl(b3)) == bound); // equality at n=1, o=1
    WeylEnumeration en(b3, true);
    en.for_each([&](const WeylElement& w) { CHECK(admissible_check(b3, mu, w)); });

    // basic nu is the unique minimal admissible point
    for (int r = 2; r <= 4; ++r) {
        auto br = make_group_datum(Family::B, r, 1, 1);
        auto mur = MinusculeSpec::from_l(br, 1);
        auto wb = construct_basic_element(br);
        auto nub = newton_point(br, mur, wb);
        for (const auto& st : strata(br, mur).strata)
            CHECK(dominance_leq(nub, st.nu, br.ctx()));
    }
}

TEST_CASE("parabolic profiles") {
    auto b2 = make_group_datum(Family::B, 2, 1, 1);
    auto mu = MinusculeSpec::from_l(b2, 1);

    WeylElement all_flip = identity_weyl(b2);
    all_flip.parts[0].sign.assign(2, -1);
    auto basic_prof = parabolic_profile(b2, mu, all_flip);
    CHECK(basic_prof.zero.size() == 8); // all roots
    CHECK(basic_prof.positive.empty());
    CHECK(basic_prof.negative.empty());

    auto id_prof = parabolic_profile(b2, mu, identity_weyl(b2));
    CHECK(id_prof.nu == cw({{1, 0}}));
    CHECK(id_prof.zero.size() == 2);     // +-e_2
    CHECK(id_prof.positive.size() == 3); // e1-e2, e1+e2, e1
    CHECK(id_prof.negative.size() == 3);
    CHECK(id_prof.levi_simple.size() == 1);
    for (const auto& fr : id_prof.zero) {
        CHECK(fr.root.coords[0] == 0);
        CHECK((fr.root.coords[1] == 1 || fr.root.coords[1] == -1));
    }

    // nu = (1/2, 1/2): the Levi keeps only +-(e1 - e2)
    WeylElement two = identity_weyl(b2);
    two.parts[0].image = {1, 0};
    auto half_prof = parabolic_profile(b2, mu, two);
    CHECK(half_prof.zero.size() == 2);
    for (const auto& fr : half_prof.zero)
        CHECK(fr.root.coords[0] + fr.root.coords[1] == 0);
}

TEST_CASE("dual oracle on a deterministic sample") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 200; ++trial) {
        Family fams[] = {Family::A, Family::B, Family::C, Family::D, Family::GL,
                         Family::GSp};
        Family fam = fams[gen() % 6];
        int r = fam == Family::D ? 2 + int(gen() % 3) : 1 + int(gen() % 4);
        int n = 1 + int(gen() % 2);
        int twist = (fam == Family::D && gen() % 2) ? 2 : 1;
        auto datum = make_group_datum(fam, r, n, twist);
        std::vector<std::vector<long long>> w(n, std::vector<long long>(datum.torus_dim()));
        for (auto& row : w)
            for (auto& x : row) x = (long long)(gen() % 5) - 2;
        std::optional<long long> sim;
        if (datum.has_similitude()) sim = (long long)(gen() % 5) - 2;
        auto mu = MinusculeSpec::explicit_weights(datum, std::move(w), sim);
        WeylEnumeration en(datum, false);
        auto elt = en.element(gen() % en.size());
        CHECK(newton_polygon_of(datum, mu, elt) ==
              slope_polygon(weyl_to_monomial(datum, elt, mu)));
    }
}
