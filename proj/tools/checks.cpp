#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "cli.hpp"

namespace fcrystal::cli {

namespace {

using Clock = std::chrono::steady_clock;

long long expected_strata_l1(int r) { return r + 1; }
long long expected_strata_l2(int r) { return r + (long long)(r - r / 2) * (r / 2 + 1); }

std::string fail_case(const WeylElement& w, const RationalCoweight& nu) {
    return "w=" + w.str() + " nu=" + nu_string(nu);
}

// --- prop-4.6.1a -----------------------------------------------------------

CheckReport check_prop_461a(const CheckParams& p) {
    CheckReport rep;
    int rmax = p.max_rank ? p.max_rank : 8;
    for (int r = 1; r <= rmax && rep.pass; ++r)
        for (int n = 1; n <= 3 && rep.pass; ++n) {
            auto datum = make_group_datum(Family::B, r, n, 1);
            auto mu = MinusculeSpec::from_l(datum, 1);
            StrataOptions opt;
            opt.threads = p.threads;
            opt.max_elements = p.max_elements;
            auto res = strata(datum, mu, opt);
            rep.elements_scanned += res.elements;
            rep.strata_found += res.strata.size();
            long long want = expected_strata_l1(r);
            std::ostringstream line;
            line << "B" << r << " n=" << n << " l=1: strata=" << res.strata.size()
                 << " expected=" << want;
            rep.lines.push_back(line.str());
            if ((long long)res.strata.size() != want) {
                rep.pass = false;
                rep.expected = std::to_string(want);
                rep.actual = std::to_string(res.strata.size());
            }
        }
    return rep;
}

// --- prop-4.6.1b -----------------------------------------------------------

CheckReport check_prop_461b(const CheckParams& p) {
    CheckReport rep;
    int rmax = p.max_rank ? p.max_rank : 8;
    for (int r = 2; r <= rmax && rep.pass; ++r)
        for (int n = 1; n <= 2 && rep.pass; ++n) {
            if (n < 2) {
                rep.lines.push_back("B" + std::to_string(r) +
                                    " n=1 l=2: ill-formed (l exceeds factor count), skipped");
                continue;
            }
            auto datum = make_group_datum(Family::B, r, n, 1);
            auto mu = MinusculeSpec::from_l(datum, 2);
            StrataOptions opt;
            opt.threads = p.threads;
            opt.max_elements = p.max_elements;
            auto res = strata(datum, mu, opt);
            rep.elements_scanned += res.elements;
            rep.strata_found += res.strata.size();
            long long want = expected_strata_l2(r);
            std::ostringstream line;
            line << "B" << r << " n=" << n << " l=2: strata=" << res.strata.size()
                 << " expected=" << want;
            rep.lines.push_back(line.str());
            if ((long long)res.strata.size() != want) {
                rep.pass = false;
                rep.expected = std::to_string(want);
                rep.actual = std::to_string(res.strata.size());
            }
        }
    return rep;
}

// --- example-2.3.4 ---------------------------------------------------------

CheckReport check_example_234(const CheckParams&) {
    CheckReport rep;
    NewtonPolygon forbidden;
    forbidden.slopes = {{Rat(1, 2), 2}, {Rat(3, 2), 2}};
    std::vector<int> perm = {0, 1, 2, 3};
    int witnesses = 0;
    do {
        MonomialOperator op;
        op.size = 4;
        op.perm = perm;
        op.exp = {0, 0, 2, 2};
        ++rep.elements_scanned;
        bool has_integer = integer_slope_witness(op).has_value();
        bool hits_forbidden = slope_polygon(op) == forbidden;
        if (has_integer && !hits_forbidden) {
            ++witnesses;
        } else {
            rep.pass = false;
            std::string ce = "perm=";
            for (int i : perm) ce += std::to_string(i + 1) + ":";
            rep.counterexample = ce + " polygon=" + slope_polygon(op).str();
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    rep.expected = "24/24 integer-slope witnesses, forbidden polygon unrealized";
    rep.actual = std::to_string(witnesses) + "/24";
    if (witnesses != 24) rep.pass = false;
    return rep;
}

// --- manin-gsp -------------------------------------------------------------

CheckReport check_manin_gsp(const CheckParams& p) {
    CheckReport rep;
    int rmax = p.max_rank ? p.max_rank : 4;
    for (int r = 1; r <= rmax && rep.pass; ++r) {
        auto report = manin_achievability(r);
        rep.elements_scanned += (1ULL << r) * [&] {
            unsigned long long f = 1;
            for (int i = 2; i <= r; ++i) f *= i;
            return f;
        }();
        bool all_sharp = true;
        for (const auto& poly : report.achieved)
            if (!sharp_check(poly, r) || !integral_breakpoints(poly)) all_sharp = false;
        std::ostringstream line;
        line << "GSp" << 2 * r << ": achieved=" << report.achieved.size()
             << " admissible=" << report.admissible.size()
             << (report.equal ? " equal" : " DIFFER") << (all_sharp ? "" : " NOT-SHARP");
        rep.lines.push_back(line.str());
        if (!report.equal || !all_sharp) {
            rep.pass = false;
            rep.expected = "achieved set == admissible set, all sharp";
            rep.actual = line.str();
        }
    }
    return rep;
}

// --- basic-elements --------------------------------------------------------

CheckReport check_basic_elements(const CheckParams& p) {
    CheckReport rep;
    int rmax = p.max_rank ? p.max_rank : 8;
    struct Case {
        Family fam;
        int r;
        int twist;
    };
    std::vector<Case> grid;
    for (int r = 1; r <= rmax; ++r) {
        grid.push_back({Family::A, r, 1});
        if (r >= 2) grid.push_back({Family::A, r, 2});
        grid.push_back({Family::GL, r, 1});
        grid.push_back({Family::B, r, 1});
        grid.push_back({Family::C, r, 1});
        grid.push_back({Family::GSp, r, 1});
    }
    for (int r = 2; r <= std::min(rmax, 6); ++r) {
        grid.push_back({Family::D, r, 1});
        grid.push_back({Family::D, r, 2});
    }
    for (const auto& c : grid) {
        for (int n = 1; n <= 2 && rep.pass; ++n) {
            auto datum = make_group_datum(c.fam, c.r, n, c.twist);
            auto w = construct_basic_element(datum);
            auto mu = datum.has_similitude() ? MinusculeSpec::siegel(datum)
                                             : MinusculeSpec::from_l(datum, 1);
            ++rep.elements_scanned;
            if (!is_basic(datum, mu, w)) {
                rep.pass = false;
                rep.expected = "is_basic(construct_basic_element)";
                rep.actual = "false for " + datum.str();
                rep.counterexample = fail_case(w, newton_point(datum, mu, w));
            }
        }
        if (!rep.pass) break;
        rep.lines.push_back(std::string(family_name(c.fam)) + std::to_string(c.r) +
                            (c.twist == 2 ? " twisted" : "") + ": basic element verified");
    }
    return rep;
}

// --- mazur-eq10 ------------------------------------------------------------

CheckReport check_mazur_eq10(const CheckParams& p) {
    CheckReport rep;
    int rmax = p.max_rank ? p.max_rank : 6;
    struct Leg {
        int l, n;
    };
    for (int r = 1; r <= rmax && rep.pass; ++r) {
        for (Leg leg : {Leg{1, 1}, Leg{1, 2}, Leg{2, 2}}) {
            if (leg.l > leg.n && leg.n == 1) continue;
            if (leg.l == 2 && r < 2) continue;
            auto datum = make_group_datum(Family::B, r, leg.n, 1);
            auto mu = MinusculeSpec::from_l(datum, leg.l);
            auto bound = minus_mu_bar(datum, mu);
            auto kappa = kottwitz_class(datum, mu);
            StrataOptions opt;
            opt.threads = p.threads;
            opt.max_elements = p.max_elements;
            auto res = strata(datum, mu, opt);
            rep.elements_scanned += res.elements;
            rep.strata_found += res.strata.size();
            for (const auto& st : res.strata) {
                if (!dominance_leq(st.nu, bound, datum.ctx())) {
                    rep.pass = false;
                    rep.expected = "nu <= " + nu_string(bound);
                    rep.actual = nu_string(st.nu);
                    rep.counterexample = fail_case(st.representative, st.nu);
                    break;
                }
                // abelianized invariant: the Newton point's free image is
                // the class invariant
                auto free_part = newton_free_part(datum, st.nu);
                bool kappa_ok = free_part.size() == kappa.free_coords.size();
                for (size_t i = 0; kappa_ok && i < free_part.size(); ++i)
                    if (free_part[i] != Rat(kappa.free_coords[i])) kappa_ok = false;
                if (!kappa_ok) {
                    rep.pass = false;
                    rep.expected = "free part of kappa class";
                    rep.actual = "mismatch";
                    rep.counterexample = fail_case(st.representative, st.nu);
                    break;
                }
            }
            if (leg.n == 1 && rep.pass) {
                auto nu_id = newton_point(datum, mu, identity_weyl(datum));
                if (!(nu_id == bound)) {
                    rep.pass = false;
                    rep.expected = "nu(identity) == -mu_bar == " + nu_string(bound);
                    rep.actual = nu_string(nu_id);
                }
            }
            if (!rep.pass) break;
            rep.lines.push_back("B" + std::to_string(r) + " n=" + std::to_string(leg.n) +
                                " l=" + std::to_string(leg.l) + ": all " +
                                std::to_string(res.strata.size()) +
                                " strata dominated by -mu_bar");
        }
    }
    return rep;
}

// --- dual-oracle -----------------------------------------------------------

struct RandomSample {
    GroupDatum datum;
    MinusculeSpec mu;
    WeylElement w;
};

RandomSample random_sample(std::mt19937_64& gen, bool operators_required) {
    static const Family fams[] = {Family::A,  Family::B,  Family::C,
                                  Family::D,  Family::GL, Family::GSp};
    Family fam = fams[gen() % 6];
    int r = (fam == Family::D) ? 2 + int(gen() % 4) : 1 + int(gen() % 5);
    int n = 1 + int(gen() % 3);
    int twist = 1;
    if (fam == Family::D && gen() % 2) twist = 2;
    if (fam == Family::A && r >= 2 && !operators_required && gen() % 2) twist = 2;
    auto datum = make_group_datum(fam, r, n, twist);

    std::vector<std::vector<long long>> weights(n,
                                                std::vector<long long>(datum.torus_dim()));
    for (auto& row : weights)
        for (auto& x : row) x = (long long)(gen() % 5) - 2;
    std::optional<long long> sim;
    if (datum.has_similitude()) sim = (long long)(gen() % 5) - 2;
    auto mu = MinusculeSpec::explicit_weights(datum, std::move(weights), sim);

    WeylEnumeration en(datum, false);
    WeylElement w = en.element(gen() % en.size());
    return {datum, mu, w};
}

CheckReport check_dual_oracle(const CheckParams& p) {
    CheckReport rep;
    long long samples = p.samples ? p.samples : 1000;
    std::mt19937_64 gen(p.seed);
    for (long long i = 0; i < samples; ++i) {
        auto s = random_sample(gen, true);
        ++rep.elements_scanned;
        auto from_point = newton_polygon_of(s.datum, s.mu, s.w);
        auto from_cycles = slope_polygon(weyl_to_monomial(s.datum, s.w, s.mu));
        if (!(from_point == from_cycles)) {
            rep.pass = false;
            rep.expected = from_cycles.str();
            rep.actual = from_point.str();
            rep.counterexample = s.datum.str() + " mu{" + s.mu.str() + "} " +
                                 fail_case(s.w, newton_point(s.datum, s.mu, s.w));
            break;
        }
    }
    rep.lines.push_back(std::to_string(rep.elements_scanned) +
                        " random (datum, mu, w) samples agree exactly");
    return rep;
}

// --- split-padic -----------------------------------------------------------

SplitProblem random_split_problem(long long prime, int precision, std::mt19937_64& gen) {
    SplitProblem pb;
    pb.p = prime;
    pb.precision = precision;
    int blocks = 2 + int(gen() % 2);
    long long slope = (long long)(gen() % 2);
    for (int b = 0; b < blocks; ++b) {
        pb.block_sizes.push_back(1 + int(gen() % 2));
        pb.block_slopes.push_back(slope);
        slope += 1 + (long long)(gen() % 2);
    }
    int d = pb.dimension();
    pb.phi = PadicMatrix::zero_matrix(prime, precision, d);
    pb.u = PadicMatrix::identity(prime, precision, d);
    for (int i = 0; i < d; ++i) {
        long long unit = 1 + (long long)(gen() % (prime == 2 ? 1 : (prime - 1)));
        pb.phi.at(i, i) = PadicApprox::from_integer(prime, unit, precision)
                              .shifted(int(pb.block_slopes[pb.block_of(i)]));
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (pb.relative_slope(i, j) > 0 && gen() % 4 != 0)
                pb.u.at(i, j) = PadicApprox::from_integer(
                    prime, (long long)(gen() % 125) - 62, precision);
    pb.validate();
    return pb;
}

CheckReport check_split_padic(const CheckParams& p) {
    CheckReport rep;

    // closed-form 2x2 case
    {
        SplitProblem pb;
        pb.p = 5;
        pb.precision = 3;
        pb.block_sizes = {1, 1};
        pb.block_slopes = {0, 1};
        pb.phi = PadicMatrix::zero_matrix(5, 3, 2);
        pb.phi.at(0, 0) = PadicApprox::from_integer(5, 1, 3);
        pb.phi.at(1, 1) = PadicApprox::from_integer(5, 5, 3);
        pb.u = PadicMatrix::identity(5, 3, 2);
        pb.u.at(1, 0) = PadicApprox::from_integer(5, 1, 3);
        auto h = split_slopes(pb, 3);
        ++rep.elements_scanned;
        auto want = PadicApprox::from_integer(5, 94, 3);
        if (!h.at(1, 0).congruent(want)) {
            rep.pass = false;
            rep.expected = "h[2,1] == 94 mod 125";
            rep.actual = h.at(1, 0).str();
            return rep;
        }
        if (verify_conjugation(h, pb.u, pb.phi, 3) < 3) {
            rep.pass = false;
            rep.expected = "residual valuation >= 3";
            rep.actual = std::to_string(verify_conjugation(h, pb.u, pb.phi, 3));
            return rep;
        }
        rep.lines.push_back("closed form: h[2,1] = " + h.at(1, 0).str() +
                            " (94 mod 125), residual >= 3");
    }

    // randomized problems, three primes
    long long per_prime = p.samples ? p.samples : 100;
    std::mt19937_64 gen(p.seed);
    for (long long prime : {2, 3, 5}) {
        int worst = 1 << 20;
        for (long long i = 0; i < per_prime; ++i) {
            auto pb = random_split_problem(prime, 20, gen);
            auto h = split_slopes(pb, 20);
            int got = verify_conjugation(h, pb.u, pb.phi, 20);
            worst = std::min(worst, got);
            ++rep.elements_scanned;
            if (got < 20) {
                rep.pass = false;
                rep.expected = "residual valuation >= 20";
                rep.actual = std::to_string(got) + " at p=" + std::to_string(prime);
                return rep;
            }
        }
        rep.lines.push_back("p=" + std::to_string(prime) + ": " +
                            std::to_string(per_prime) +
                            " random problems, residual >= 20");
    }

    // precision honesty: N=20 vs N'=10
    {
        std::mt19937_64 gen2(p.seed + 1);
        for (int i = 0; i < 10; ++i) {
            auto pb = random_split_problem(5, 20, gen2);
            auto h20 = split_slopes(pb, 20);
            SplitProblem pb10 = pb;
            pb10.precision = 10;
            pb10.phi = pb.phi.reduce_precision(10);
            pb10.u = pb.u.reduce_precision(10);
            auto h10 = split_slopes(pb10, 10);
            ++rep.elements_scanned;
            if ((h20 - h10).reduce_precision(10).min_valuation() < 10) {
                rep.pass = false;
                rep.expected = "h(N=20) == h(N=10) mod p^10";
                rep.actual = "congruence failed";
                return rep;
            }
        }
        rep.lines.push_back("precision honesty: h(N=20) congruent to h(N=10) mod 5^10");
    }
    return rep;
}

} // namespace

std::vector<std::string> check_names() {
    return {"prop-4.6.1a", "prop-4.6.1b",   "example-2.3.4", "manin-gsp",
            "basic-elements", "mazur-eq10", "dual-oracle",   "split-padic"};
}

CheckReport run_check(const std::string& name, const CheckParams& params) {
    using Runner = std::function<CheckReport(const CheckParams&)>;
    static const std::map<std::string, Runner> registry = {
        {"prop-4.6.1a", check_prop_461a},   {"prop-4.6.1b", check_prop_461b},
        {"example-2.3.4", check_example_234}, {"manin-gsp", check_manin_gsp},
        {"basic-elements", check_basic_elements}, {"mazur-eq10", check_mazur_eq10},
        {"dual-oracle", check_dual_oracle}, {"split-padic", check_split_padic},
    };
    auto it = registry.find(name);
    if (it == registry.end()) throw std::invalid_argument("unknown check '" + name + "'");
    auto start = Clock::now();
    CheckReport rep = it->second(params);
    rep.name = name;
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return rep;
}

} // namespace fcrystal::cli
