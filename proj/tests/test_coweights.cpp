#include <random>

#include "doctest.h"
#include "fcrystal/coweights.hpp"
#include "fcrystal/rootdata.hpp"

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

WeightFunctional fun(std::vector<std::vector<long long>> factors, long long sim = 0) {
    return WeightFunctional{std::move(factors), sim};
}

} // namespace

TEST_CASE("pairing") {
    CHECK(pair_with(cw({{1, 0}}), fun({{1, -1}})) == Rat(1));
    CHECK(pair_with(cw({{1, 1}}) , fun({{2, -2}})) == Rat(0));
    RationalCoweight half = cw({{1, 1}});
    for (auto& x : half.factors[0]) x = x / Rat(2);
    CHECK(pair_with(half, fun({{1, -1}})) == Rat(0));
    CHECK(pair_with(half, fun({{0, 1}})) == Rat(1, 2));
    CHECK_THROWS_AS(pair_with(cw({{1, 0}}), fun({{1, 2, 3}})), std::invalid_argument);
}

TEST_CASE("dominantize per family") {
    CHECK(dominantize(cw({{-1, 0}}), {Family::B, 2}) == cw({{1, 0}}));
    CHECK(dominantize(cw({{0, 2, 0}}), {Family::A, 2}) == cw({{2, 0, 0}}));
    // even sign flips only
    auto d3 = dominantize(cw({{-1, -1, -1}}), {Family::D, 3});
    CHECK(d3 == cw({{1, 1, -1}}));
    auto datum = make_group_datum(Family::D, 3, 1, 1);
    for (const auto& alpha : simple_roots(datum))
        CHECK(pair_factor(d3, 0, alpha) >= Rat(0));
}

TEST_CASE("dominance order on B2") {
    DominanceContext ctx{Family::B, 2};
    RationalCoweight half = cw({{1, 1}});
    for (auto& x : half.factors[0]) x = x / Rat(2);
    CHECK(dominance_leq(half, cw({{1, 0}}), ctx));
    CHECK_FALSE(dominance_leq(cw({{1, 0}}), half, ctx));
    CHECK(dominance_leq(half, half, ctx));
    CHECK_THROWS_AS(dominance_leq(cw({{0, 1}}), cw({{1, 0}}), ctx), std::invalid_argument);
}

TEST_CASE("orbit average") {
    auto ident = [](const RationalCoweight& v) { return v; };
    auto [a0, d0] = orbit_average(cw({{1, 0}}), ident);
    CHECK(a0 == cw({{-1, 0}}));
    CHECK(d0 == 1);

    auto swap2 = [](const RationalCoweight& v) {
        RationalCoweight o = v;
        std::swap(o.factors[0][0], o.factors[0][1]);
        return o;
    };
    auto [a1, d1] = orbit_average(cw({{1, 0}}), swap2);
    CHECK(d1 == 2);
    CHECK(a1.factors[0][0] == Rat(-1, 2));
    CHECK(a1.factors[0][1] == Rat(-1, 2));

    auto flip1 = [](const RationalCoweight& v) {
        RationalCoweight o = v;
        o.factors[0][0] = -o.factors[0][0];
        return o;
    };
    auto [a2, d2] = orbit_average(cw({{1, 0}}), flip1);
    CHECK(d2 == 2);
    CHECK(a2 == cw({{0, 0}}));

    auto grow = [](const RationalCoweight& v) {
        RationalCoweight o = v;
        o.factors[0][0] += Rat(1);
        return o;
    };
    CHECK_THROWS_AS(orbit_average(cw({{1, 0}}), grow, 64), std::runtime_error);
}

namespace {

RationalCoweight random_coweight(std::mt19937_64& gen, Family fam, int rank, int n,
                                 bool sim) {
    int t = fam == Family::A ? rank + 1 : rank;
    RationalCoweight nu;
    for (int s = 0; s < n; ++s) {
        std::vector<Rat> row;
        for (int i = 0; i < t; ++i)
            row.push_back(Rat((long long)(gen() % 13) - 6, 1 + (long long)(gen() % 4)));
        nu.factors.push_back(std::move(row));
    }
    if (sim) nu.similitude = Rat((long long)(gen() % 9) - 4);
    return nu;
}

} // namespace

TEST_CASE("dominantize is idempotent and lands in the chamber") {
    std::mt19937_64 gen(42);
    for (Family fam : {Family::A, Family::B, Family::C, Family::D, Family::GL,
                       Family::GSp}) {
        for (int rank = fam == Family::D ? 2 : 1; rank <= 8; ++rank) {
            auto datum = make_group_datum(fam, rank, 1, 1);
            auto roots = simple_roots(datum);
            for (int trial = 0; trial < 25; ++trial) {
                auto nu = random_coweight(gen, fam, rank, 1, fam == Family::GSp);
                auto dom = dominantize(nu, datum.ctx());
                CHECK(is_dominant(dom, datum.ctx()));
                CHECK(dominantize(dom, datum.ctx()) == dom);
                for (const auto& alpha : roots)
                    CHECK(pair_factor(dom, 0, alpha) >= Rat(0));
            }
        }
    }
}

TEST_CASE("dominance_leq is a partial order on dominant points") {
    std::mt19937_64 gen(7);
    for (Family fam : {Family::A, Family::B, Family::D, Family::GSp}) {
        int rank = 4;
        DominanceContext ctx{fam, rank};
        std::vector<RationalCoweight> pts;
        for (int i = 0; i < 12; ++i)
            pts.push_back(
                dominantize(random_coweight(gen, fam, rank, 1, fam == Family::GSp), ctx));
        if (fam == Family::GSp) {
            // the order requires equal similitude; normalize it
            for (auto& nu : pts) nu.similitude = Rat(2);
            for (auto& nu : pts) nu = dominantize(nu, ctx);
        }
        for (const auto& a : pts) CHECK(dominance_leq(a, a, ctx));
        for (const auto& a : pts)
            for (const auto& b : pts) {
                if (dominance_leq(a, b, ctx) && dominance_leq(b, a, ctx)) CHECK(a == b);
                for (const auto& c : pts)
                    if (dominance_leq(a, b, ctx) && dominance_leq(b, c, ctx))
                        CHECK(dominance_leq(a, c, ctx));
            }
    }
}
