#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bregkit/entropies.hpp"
#include "bregkit/rng.hpp"

using namespace bregkit;

namespace {
NormSpec l2(std::size_t dim) { return NormSpec::lp(2.0, dim); }
}

TEST_CASE("metadata flags") {
    const auto bgs = make_bgs(2, l2(2));
    CHECK(metadata(*bgs).legendre);
    CHECK(metadata(*bgs).dom_closed);
    CHECK(metadata(*bgs).essentially_smooth);

    const auto hct3 = make_hct(3.0, 2, l2(2));
    CHECK_FALSE(metadata(*hct3).essentially_smooth);
    CHECK(metadata(*hct3).dom_closed);

    const auto hctn = make_hct(-1.0, 2, l2(2));
    CHECK(metadata(*hctn).essentially_smooth);
    CHECK_FALSE(metadata(*hctn).dom_closed);

    const auto burg = make_burg(2, l2(2));
    CHECK_FALSE(metadata(*burg).dom_closed);
    CHECK(metadata(*burg).legendre);

    const auto beta0 = make_beta(0.0, 2, l2(2));
    CHECK_FALSE(metadata(*beta0).dom_closed);
    const auto beta2 = make_beta(2.0, 2, l2(2));
    CHECK(metadata(*beta2).dom_closed);
    CHECK_FALSE(metadata(*beta2).essentially_smooth);

    const auto iterlog = make_iterated_log(3, l2(3));
    CHECK(metadata(*iterlog).zone_lower == Vector{1.0, 1.0, 1.0});
}

TEST_CASE("documented strong convexity parameters") {
    // Euclidean norm: c2 = c_inf = 1
    CHECK(documented_strong_convexity(*make_bgs(2, l2(2)), 10.0).mu == doctest::Approx(0.1));
    CHECK(documented_strong_convexity(*make_l2lp(1.5, 3, l2(3)), 7.0).mu == doctest::Approx(0.5));
    CHECK(documented_strong_convexity(*make_burg(1, l2(1)), 2.0).mu == doctest::Approx(0.25));
    CHECK(documented_strong_convexity(*make_hct(2.0, 2, l2(2)), 5.0).mu == doctest::Approx(2.0));
    CHECK(documented_strong_convexity(*make_hct(0.5, 1, l2(1)), 4.0).mu ==
          doctest::Approx(0.5 * std::pow(4.0, -1.5)));
    CHECK(documented_strong_convexity(*make_hct(3.0, 1, l2(1)), 4.0, 0.5).mu ==
          doctest::Approx(3.0 * std::pow(0.5, 1.0)));
    CHECK_THROWS_AS(documented_strong_convexity(*make_hct(3.0, 1, l2(1)), 4.0),
                    NoDocumentedParameter);

    // the ell2-type entropy under its canonical mixed norm: 4 and 1/n_split
    CHECK(documented_strong_convexity(*make_ell2_type(0, 4), 3.0).mu == doctest::Approx(4.0));
    CHECK(documented_strong_convexity(*make_ell2_type(2, 4), 3.0).mu == doctest::Approx(0.5));

    // l1 ambient norm rescales through c2
    const auto bgs_l1 = make_bgs(4, NormSpec::lp(1.0, 4));
    CHECK(documented_strong_convexity(*bgs_l1, 10.0).mu == doctest::Approx(0.25 * 0.1));
}

TEST_CASE("documented gauges") {
    const auto bgs = make_bgs(2, l2(2));
    const Vector x{std::sqrt(0.5), std::sqrt(0.5)};  // unit Euclidean norm
    const auto [g, pd] = documented_gauge(*bgs, x);
    CHECK(g.family() == GaugeSpec::Family::Linear);
    CHECK(g.a() == doctest::Approx(0.25));
    CHECK(std::get<ZoneAnnulus>(pd.s2.region).r == doctest::Approx(2.0));

    const auto hct = make_hct(0.5, 1, l2(1));
    const auto [gh, pdh] = documented_gauge(*hct, {1.0});
    CHECK(gh.family() == GaugeSpec::Family::Power);
    CHECK(gh.e() == doctest::Approx(0.5));
    CHECK(gh.a() == doctest::Approx(0.5 / std::pow(2.0, 2.5)));

    const auto burg = make_burg(1, l2(1));
    const auto [gb, pdb] = documented_gauge(*burg, {1.0});
    CHECK(gb.family() == GaugeSpec::Family::Log);
    CHECK(std::get<ZoneAnnulus>(pdb.s2.region).r == doctest::Approx(burg_rx({1.0}, l2(1))));

    CHECK_THROWS_AS(documented_gauge(*make_iterated_log(1, l2(1)), {2.0}), NoDocumentedGauge);
    CHECK_THROWS_AS(documented_gauge(*make_hct(3.0, 1, l2(1)), {1.0}), NoDocumentedGauge);

    const auto hct2 = make_hct(2.0, 2, l2(2));
    const auto [g2, pd2] = documented_gauge(*hct2, {1.0, 1.0});
    CHECK(g2.family() == GaugeSpec::Family::Quadratic);
    CHECK(g2.mu() == doctest::Approx(2.0));
}

TEST_CASE("gauge inverse round trip") {
    Rng rng(4);
    const GaugeSpec gauges[] = {GaugeSpec::linear(0.25), GaugeSpec::power(0.3, 0.5),
                                GaugeSpec::power(2.0, 1.5), GaugeSpec::quadratic(0.8),
                                GaugeSpec::log_gauge(), GaugeSpec::iterlog_conjectured(0.5)};
    for (const auto& g : gauges) {
        for (int it = 0; it < 2000; ++it) {
            const double t = rng.log_uniform(1e-6, 1e3);
            const double rt = g.inverse(g.eval(t));
            CHECK(std::fabs(rt - t) <= 1e-9 * std::max(1.0, t));
        }
    }
    // decreasing power branch (q < 0) still inverts on (0, inf)
    const GaugeSpec dec = GaugeSpec::power(0.0625, -1.0);
    CHECK_FALSE(dec.increasing());
    CHECK(dec.inverse(dec.eval(3.0)) == doctest::Approx(3.0));
    CHECK(dec.eval(0.0) == 0.0);
}

TEST_CASE("burg r_x construction") {
    const NormSpec n1 = l2(1);
    const BurgRadius r = burg_rx_details({1.0}, n1);
    CHECK(r.gamma == doctest::Approx(1.0));
    CHECK(r.t1 == doctest::Approx(65536.0));

    // independent bisection oracle for t2: root of 0.5 log(t/2) - 4 = 0.25 log(1+t)
    const auto f = [](double t) {
        return 0.5 * std::log(t / 2.0) - 4.0 - 0.25 * std::log1p(t);
    };
    double lo = 1.0, hi = 1e30;
    REQUIRE(f(lo) < 0.0);
    REQUIRE(f(hi) > 0.0);
    for (int it = 0; it < 500 && hi - lo > 1e-7; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    CHECK(r.t2 == doctest::Approx(hi).epsilon(1e-6));
    CHECK(r.rx == doctest::Approx(std::max({65536.0, 2.0 * r.t2, 2.0})));

    // the threshold property holds strictly beyond t2
    Rng rng(8);
    for (int it = 0; it < 2000; ++it) {
        const double t = r.t2 * rng.log_uniform(1.0 + 1e-9, 1e6);
        CHECK(0.5 * std::log(t / 2.0) - 4.0 > 0.25 * std::log1p(t));
    }

    CHECK_THROWS_AS(burg_rx({0.0}, n1), NotInZone);
}

TEST_CASE("burg r_x is monotone in the coordinates of x") {
    const NormSpec n2 = l2(2);
    Rng rng(12);
    for (int it = 0; it < 500; ++it) {
        Vector x{rng.log_uniform(0.01, 50.0), rng.log_uniform(0.01, 50.0)};
        Vector bigger = x;
        bigger[it % 2] += rng.log_uniform(1e-3, 10.0);
        CHECK(burg_rx(bigger, n2) >= burg_rx(x, n2));
    }
}

TEST_CASE("wrapper certificates stay valid") {
    const auto bgs = make_bgs(2, l2(2));
    const auto burg = make_burg(2, l2(2));

    const auto summed = sum_of({{0.5, bgs}, {2.0, burg}});
    const auto sc = documented_strong_convexity(*summed, 10.0);
    CHECK(sc.mu == doctest::Approx(0.5 * 0.1 + 2.0 * 0.01));

    const auto scaled = scale_plus_linear(burg, 3.0, {1.0, -1.0});
    CHECK(documented_strong_convexity(*scaled, 10.0).mu == doctest::Approx(3.0 * 0.01));

    const auto shifted = translate(burg, {1.0, 1.0});
    // the inner parameter is taken on the enlarged ball M_S + ||z0||
    const double enlarged = 10.0 + std::sqrt(2.0);
    CHECK(documented_strong_convexity(*shifted, 10.0).mu ==
          doctest::Approx(1.0 / (enlarged * enlarged)));

    // a sum whose only documented member carries the certificate
    const auto with_hct3 = sum_of({{1.0, bgs}, {1.0, make_hct(3.0, 2, l2(2))}});
    CHECK(documented_strong_convexity(*with_hct3, 10.0).mu == doctest::Approx(0.1));
}

TEST_CASE("the conjectured iterated-log gauge is exposed but flagged") {
    const auto iterlog = make_iterated_log(2, l2(2));
    const auto [g, pd] = conjectured_iterlog_gauge(*iterlog, {2.0, 2.0}, 0.5);
    CHECK(g.conjectured());
    CHECK(g.describe().find("conjectured") != std::string::npos);
    CHECK(g.eval(0.0) == 0.0);
    CHECK(g.eval(10.0) > 0.0);
    // the documented route keeps refusing
    CHECK_THROWS_AS(documented_gauge(*iterlog, {2.0, 2.0}), NoDocumentedGauge);
}

TEST_CASE("certificate sets reject nonsense") {
    CHECK_THROWS_AS(documented_strong_convexity(*make_bgs(1, l2(1)), -1.0), InvalidSpec);
    // a ball of radius below the zone offset cannot meet the iterated-log domain
    CHECK_THROWS_AS(documented_strong_convexity(*make_iterated_log(1, l2(1)), 0.5),
                    NoDocumentedParameter);
}
