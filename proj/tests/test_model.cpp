#include <doctest.h>

#include "ofwpep/schedule.hpp"

using namespace ofwpep;

TEST_CASE("preset_ofw_new: closed-form values") {
    SUBCASE("T=3, L=D=1: eta 0.5, sigma 1") {
        auto s = preset_ofw_new(3, 1.0, 1.0);
        CHECK(s.eta(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(s.gamma(2, 1) == 1.0);
        CHECK(s.gamma(3, 1) == 0.0);
        CHECK(s.gamma(3, 2) == 1.0);
        CHECK(s.hull_safe);
    }
    SUBCASE("T=48: power-of-two algebra") {
        auto s = preset_ofw_new(48, 1.0, 1.0);
        CHECK(s.eta(1, 1) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
        CHECK(s.gamma(2, 1) == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("T=12, L=2, D=4") {
        auto s = preset_ofw_new(12, 2.0, 4.0);
        CHECK(s.eta(3, 2) == doctest::Approx(std::pow(4.0, -0.75)).epsilon(1e-14));
        CHECK(s.gamma(2, 1) == doctest::Approx(0.5).epsilon(1e-15));
    }
    CHECK_THROWS_AS(preset_ofw_new(0, 1, 1), std::invalid_argument);
}

TEST_CASE("preset_ofw_new: recursion holds entrywise") {
    auto s = preset_ofw_new(9, 1.0, 1.0);
    double sigma = std::sqrt(3.0 / 9.0);
    for (int t = 2; t <= 8; ++t)
        for (int u = 1; u <= t - 1; ++u)
            CHECK(s.gamma(t + 1, u) ==
                  doctest::Approx(u == t ? sigma : (1 - sigma) * s.gamma(t, u)).epsilon(1e-15));
    for (int t = 2; t <= 9; ++t) CHECK(s.gamma(t, t - 1) == sigma);
}

TEST_CASE("preset_hazan: both variants") {
    SUBCASE("alg27, T=4: min clamps to 1") {
        auto s = preset_hazan(4, 1.0, 1.0, HazanVariant::alg27);
        CHECK(s.gamma(2, 1) == 1.0);
        CHECK(s.gamma(3, 2) == 1.0);
        CHECK(s.gamma(3, 1) == 0.0);
    }
    SUBCASE("thm44, T=4") {
        auto s = preset_hazan(4, 1.0, 1.0, HazanVariant::thm44);
        CHECK(s.gamma(2, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
        CHECK(s.gamma(3, 2) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
        CHECK(s.gamma(3, 1) ==
              doctest::Approx((1.0 / std::sqrt(2.0)) * (1.0 - 1.0 / std::sqrt(3.0))).epsilon(1e-14));
        CHECK(s.gamma(3, 1) == doctest::Approx(0.2989).epsilon(1e-3));
    }
    SUBCASE("T=16: eta = D/(16 L)") {
        for (auto v : {HazanVariant::thm44, HazanVariant::alg27}) {
            auto s = preset_hazan(16, 2.0, 3.0, v);
            CHECK(s.eta(5, 3) == doctest::Approx(3.0 / (2.0 * 2.0 * 8.0)).epsilon(1e-14));
        }
    }
}

TEST_CASE("preset_anytime: per-step substitution") {
    SUBCASE("ofw_new, T=5: sigma_t sequence") {
        auto s = preset_anytime(AnytimeBase::ofw_new, 5, 1.0, 1.0);
        CHECK(s.gamma(2, 1) == 1.0);                                       // sigma_1 = 1
        CHECK(s.gamma(4, 3) == 1.0);                                       // sigma_3 = 1
        CHECK(s.gamma(5, 4) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));  // sigma_4
    }
    SUBCASE("ofw_new, T=3: gamma row 3 matches the fixed preset, eta rows differ") {
        auto a = preset_anytime(AnytimeBase::ofw_new, 3, 1.0, 1.0);
        auto f = preset_ofw_new(3, 1.0, 1.0);
        CHECK(a.gamma(3, 1) == f.gamma(3, 1));
        CHECK(a.gamma(3, 2) == f.gamma(3, 2));
        CHECK(a.eta(1, 1) != f.eta(1, 1));
        CHECK(a.eta(2, 1) != f.eta(2, 1));
    }
    SUBCASE("hazan_alg27, T=4: eta row 2 uses t = 2") {
        auto s = preset_anytime(AnytimeBase::hazan_alg27, 4, 1.0, 2.0);
        CHECK(s.eta(2, 1) == doctest::Approx(2.0 / (2.0 * std::pow(2.0, 0.75))).epsilon(1e-14));
        CHECK(s.eta(2, 2) == s.eta(2, 1));
    }
    SUBCASE("at t = T the substituted scalars equal the fixed preset's") {
        for (int T : {4, 7, 12}) {
            auto a = preset_anytime(AnytimeBase::ofw_new, T + 1, 1.5, 2.5);
            auto f = preset_ofw_new(T, 1.5, 2.5);
            CHECK(a.eta(T, 1) == doctest::Approx(f.eta(T - 1, 1)).epsilon(1e-15));
            CHECK(a.gamma(T + 1, T) == doctest::Approx(f.gamma(2, 1)).epsilon(1e-15));
        }
    }
}

TEST_CASE("validate: hull_safe findings") {
    auto ok = validate(preset_ofw_new(5, 1.0, 1.0));
    CHECK(ok.ok());
    CHECK(ok.hull_safe);

    auto s = ParamSchedule::zeros(3);
    s.gamma(2, 1) = 1.5;
    auto r1 = validate(s);
    CHECK_FALSE(r1.hull_safe);
    CHECK(r1.max_row_sum_excess == doctest::Approx(0.5));

    s.gamma(2, 1) = 0.0;
    s.gamma(3, 1) = -0.1;
    auto r2 = validate(s);
    CHECK_FALSE(r2.hull_safe);
    CHECK(r2.max_negative_gamma == doctest::Approx(0.1));

    s.gamma(3, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(validate(s).ok());
}

TEST_CASE("presets satisfy the sub-probability property") {
    for (int T : {1, 2, 3, 7, 20}) {
        for (auto mk : {+[](int T_) { return preset_ofw_new(T_, 1.0, 1.0); },
                        +[](int T_) { return preset_hazan(T_, 1.0, 1.0, HazanVariant::thm44); },
                        +[](int T_) { return preset_hazan(T_, 1.0, 1.0, HazanVariant::alg27); },
                        +[](int T_) { return preset_anytime(AnytimeBase::ofw_new, T_, 1.0, 1.0); },
                        +[](int T_) { return preset_anytime(AnytimeBase::hazan_alg27, T_, 1.0, 1.0); }}) {
            auto s = mk(T);
            for (int t = 2; t <= T; ++t) {
                double sum = 0.0;
                for (int u = 1; u <= t - 1; ++u) {
                    CHECK(s.gamma(t, u) >= -1e-12);
                    sum += s.gamma(t, u);
                }
                CHECK(std::abs(sum) <= 1.0 + 1e-12);
            }
            CHECK(validate(s).hull_safe);
        }
    }
}

TEST_CASE("dimensional homogeneity of preset_ofw_new") {
    auto base = preset_ofw_new(8, 1.0, 1.0);
    double cL = 3.0, cD = 0.7;
    auto scaled = preset_ofw_new(8, cL, cD);
    for (int t = 1; t <= 7; ++t)
        for (int u = 1; u <= t; ++u)
            CHECK(scaled.eta(t, u) == doctest::Approx((cD / cL) * base.eta(t, u)).epsilon(1e-14));
    for (int t = 2; t <= 8; ++t)
        for (int u = 1; u <= t - 1; ++u) {
            CHECK(scaled.gamma(t, u) == base.gamma(t, u));
            if (t <= 7 && u <= t - 1) CHECK(scaled.beta(t, u) == base.beta(t, u));
        }
}

TEST_CASE("schedule JSON round trip") {
    auto s = preset_hazan(6, 2.0, 5.0, HazanVariant::thm44);
    auto j = schedule_to_json(s);
    auto back = schedule_from_json(j);
    CHECK(back.T == s.T);
    CHECK(back.hull_safe == s.hull_safe);
    for (int t = 1; t <= 5; ++t)
        for (int u = 1; u <= t; ++u) CHECK(back.eta(t, u) == s.eta(t, u));
    for (int t = 2; t <= 6; ++t)
        for (int u = 1; u <= t - 1; ++u) CHECK(back.gamma(t, u) == s.gamma(t, u));
    CHECK(back.meta.at("preset") == "hazan-thm44");

    auto bad = j;
    bad["gamma"][0] = std::vector<double>{0.5, 0.5};  // wrong row length
    CHECK_THROWS_AS(schedule_from_json(bad), std::invalid_argument);
}
