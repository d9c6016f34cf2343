#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <vector>

#include "affine/closed_form.hpp"
#include "affine/engine.hpp"
#include "affine/mc.hpp"
#include "affine/mc_reference.hpp"

using namespace affine;

namespace {

MCConfig quick(std::size_t paths = 100'000) {
    MCConfig c;
    c.paths = paths;
    return c;
}

// Sample moments of (r_T, I) from many fine-step Euler paths.
struct SampleMoments {
    double mean_r = 0, mean_i = 0, var_r = 0, var_i = 0, cov = 0;
};

SampleMoments euler_moments(const ModelParams& model, const MarketState& state, double horizon) {
    MCConfig c;
    c.paths = 40'000;
    c.steps = 400;
    c.seed = 17;
    c.antithetic = false;
    const auto paths = euler_paths(to_generic(model), state, horizon, c);
    SampleMoments m;
    const double n = static_cast<double>(paths.size());
    for (const auto& p : paths) {
        m.mean_r += p.rate / n;
        m.mean_i += p.integral / n;
    }
    for (const auto& p : paths) {
        m.var_r += (p.rate - m.mean_r) * (p.rate - m.mean_r) / (n - 1);
        m.var_i += (p.integral - m.mean_i) * (p.integral - m.mean_i) / (n - 1);
        m.cov += (p.rate - m.mean_r) * (p.integral - m.mean_i) / (n - 1);
    }
    return m;
}

}  // namespace

TEST(GaussianTransitionTest, ZeroVolatilityIsDeterministic) {
    const auto tr = gaussian_transition(Vasicek{0.4, 0.05, 0.0}, {0.0, 0.03}, 2.0);
    EXPECT_NEAR(tr.mean_rate, 0.05 - 0.02 * std::exp(-0.8), 1e-15);
    EXPECT_EQ(tr.var_rate, 0.0);
    EXPECT_EQ(tr.var_integral, 0.0);
    EXPECT_EQ(tr.covariance, 0.0);

    const auto s = sample_rate_and_integral(Vasicek{0.4, 0.05, 0.0}, {0.0, 0.03}, 2.0, 1, 0);
    EXPECT_DOUBLE_EQ(s.rate, tr.mean_rate);
    EXPECT_DOUBLE_EQ(s.integral, tr.mean_integral);
}

TEST(GaussianTransitionTest, MertonMoments) {
    const auto tr = gaussian_transition(Merton{0.02, 0.03}, {0.0, 0.05}, 5.0);
    EXPECT_DOUBLE_EQ(tr.mean_rate, 0.15);
    EXPECT_DOUBLE_EQ(tr.mean_integral, 0.25 + 0.25);
    EXPECT_DOUBLE_EQ(tr.var_rate, 0.0045);
    EXPECT_NEAR(tr.var_integral, 0.0009 * 125.0 / 3.0, 1e-15);
    EXPECT_NEAR(tr.covariance, 0.0009 * 12.5, 1e-15);
}

TEST(GaussianTransitionTest, SmallReversionSeriesIsContinuous) {
    const auto below = gaussian_transition(Vasicek{0.999e-3, 0.0, 0.03}, {0.0, 0.0}, 1.0);
    const auto above = gaussian_transition(Vasicek{1.001e-3, 0.0, 0.03}, {0.0, 0.0}, 1.0);
    EXPECT_NEAR(below.var_integral, above.var_integral, 1e-9);
    EXPECT_NEAR(below.var_integral, 0.0009 / 3.0, 1e-6);
}

TEST(GaussianTransitionTest, AgreesWithFineEuler) {
    for (const ModelParams& model : {ModelParams{Merton{0.02, 0.03}}, ModelParams{Vasicek{0.4, 0.05, 0.03}}}) {
        const MarketState state{0.0, 0.03};
        const auto tr = gaussian_transition(model, state, 3.0);
        const auto m = euler_moments(model, state, 3.0);
        EXPECT_NEAR(m.mean_r, tr.mean_rate, 5.0 * std::sqrt(tr.var_rate / 40'000));
        EXPECT_NEAR(m.mean_i, tr.mean_integral, 5.0 * std::sqrt(tr.var_integral / 40'000));
        EXPECT_NEAR(m.var_r / tr.var_rate, 1.0, 0.05);
        EXPECT_NEAR(m.var_i / tr.var_integral, 1.0, 0.05);
        EXPECT_NEAR(m.cov / tr.covariance, 1.0, 0.05);
    }
}

TEST(GaussianTransitionTest, RejectsSquareRoot) {
    EXPECT_THROW(gaussian_transition(GenericAffine{0.02, 0.4, 0.0009, 0.05}, {0.0, 0.03}, 1.0),
                 InvalidInput);
}

TEST(MCBond, ZeroVolatilityHasNoError) {
    const auto r = mc_bond_price(Vasicek{0.4, 0.05, 0.0}, {0.0, 0.03}, 5.0, quick(1000));
    EXPECT_NEAR(r.estimate, bond_price_closed(Vasicek{0.4, 0.05, 0.0}, {0.0, 0.03}, 5.0), 1e-15);
    EXPECT_NEAR(r.std_error, 0.0, 1e-15);
}

TEST(MCBond, MatchesClosedForm) {
    for (const auto& [model, state] :
         std::vector<std::pair<ModelParams, MarketState>>{{Merton{0.02, 0.03}, {0.0, 0.05}},
                                                          {Vasicek{0.4, 0.05, 0.03}, {0.0, 0.03}}}) {
        const auto r = mc_bond_price(model, state, 5.0, quick());
        const double closed = bond_price_closed(model, state, 5.0);
        EXPECT_LT(std::abs(r.estimate - closed), 4.0 * r.std_error) << model_name(model);
        EXPECT_GT(r.std_error, 0.0);
    }
}

TEST(MCBond, EulerSquareRootMatchesEngine) {
    const GenericAffine g{0.02, 0.4, 0.0009, 0.05};
    MCConfig c = quick(50'000);
    c.scheme = Scheme::Euler;
    c.steps = 200;
    const auto r = mc_bond_price(g, {0.0, 0.03}, 5.0, c);
    const double engine = bond_price(g, {0.0, 0.03}, 5.0);
    // Discretisation bias is O(dt); allow it on top of the statistical error.
    EXPECT_LT(std::abs(r.estimate - engine), 4.0 * r.std_error + 1e-4);
}

TEST(MCOption, MatchesClosedFormAtFigurePoint) {
    const OptionSpec call{OptionKind::Call, 0.8, 3.0, 5.0};
    for (const ModelParams& model : {ModelParams{Merton{0.008, 0.03}}, ModelParams{Vasicek{0.4, 0.02, 0.03}}}) {
        const auto r = mc_option_price(model, {0.0, 0.0}, call, quick());
        EXPECT_LT(std::abs(r.estimate - call_price(model, {0.0, 0.0}, call)), 4.0 * r.std_error)
            << model_name(model);
    }
}

TEST(MCOption, PutMatchesClosedForm) {
    const OptionSpec put{OptionKind::Put, 0.95, 2.0, 5.0};
    const Vasicek v{0.4, 0.05, 0.03};
    const auto r = mc_option_price(v, {0.0, 0.03}, put, quick());
    EXPECT_LT(std::abs(r.estimate - put_price(v, {0.0, 0.03}, put)), 4.0 * r.std_error);
}

TEST(MCForward, ZeroVolatilityMomentsVanish) {
    const auto m = mc_forward_moments(Vasicek{0.4, 0.05, 0.0}, {0.0, 0.03}, 3.0, 5.0, quick(1000));
    EXPECT_NEAR(m.mean_log.estimate, 0.0, 1e-14);
    EXPECT_NEAR(m.var_log.estimate, 0.0, 1e-14);
    EXPECT_NEAR(m.forward.estimate, m.forward_today, 1e-14);
}

TEST(MCForward, VarianceIsIntegratedVol) {
    const Vasicek v{0.4, 0.02, 0.03};
    const auto m = mc_forward_moments(v, {0.0, 0.0}, 3.0, 5.0, quick(200'000));
    const double v2 = std::pow(integrated_vol(v, 0.0, 3.0, 5.0), 2);
    EXPECT_LT(std::abs(m.var_log.estimate - v2), 4.0 * m.var_log.std_error);
    EXPECT_LT(std::abs(m.mean_log.estimate + 0.5 * v2), 4.0 * m.mean_log.std_error);
    EXPECT_LT(std::abs(m.forward.estimate - m.forward_today), 4.0 * m.forward.std_error);
}

TEST(MCDeterminism, SameSeedSameResult) {
    const auto a = mc_bond_price(Vasicek{0.4, 0.05, 0.03}, {0.0, 0.03}, 5.0, quick(20'000));
    const auto b = mc_bond_price(Vasicek{0.4, 0.05, 0.03}, {0.0, 0.03}, 5.0, quick(20'000));
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(MCDeterminism, ThreadCountInvariant) {
    const OptionSpec call{OptionKind::Call, 0.8, 3.0, 5.0};
    const Vasicek v{0.4, 0.02, 0.03};
    MCConfig c = quick(50'001);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = mc_option_price(v, {0.0, 0.0}, call, c);
    omp_set_num_threads(3);
    const auto three = mc_option_price(v, {0.0, 0.0}, call, c);
    c.scheme = Scheme::Euler;
    c.steps = 20;
    const auto euler3 = mc_option_price(v, {0.0, 0.0}, call, c);
    omp_set_num_threads(1);
    const auto euler1 = mc_option_price(v, {0.0, 0.0}, call, c);
    omp_set_num_threads(saved);
    EXPECT_EQ(one.estimate, three.estimate);
    EXPECT_EQ(one.std_error, three.std_error);
    EXPECT_EQ(euler1.estimate, euler3.estimate);
}

TEST(MCReference, ParallelKernelAgreesWithSerialReference) {
    const OptionSpec call{OptionKind::Call, 0.8, 3.0, 5.0};
    const Vasicek v{0.4, 0.02, 0.03};
    for (bool antithetic : {true, false}) {
        MCConfig c = quick(30'000);
        c.antithetic = antithetic;
        const auto par = mc_option_price(v, {0.0, 0.0}, call, c);
        const auto ser = reference::mc_option_price(v, {0.0, 0.0}, call, c);
        EXPECT_NEAR(par.estimate, ser.estimate, 1e-13);
        EXPECT_NEAR(par.std_error, ser.std_error, 1e-12);
        EXPECT_EQ(par.paths_used, ser.paths_used);

        const auto pb = mc_bond_price(v, {0.0, 0.0}, 5.0, c);
        const auto sb = reference::mc_bond_price(v, {0.0, 0.0}, 5.0, c);
        EXPECT_NEAR(pb.estimate, sb.estimate, 1e-13);
    }
    MCConfig e = quick(2000);
    e.scheme = Scheme::Euler;
    e.steps = 50;
    EXPECT_NEAR(mc_bond_price(v, {0.0, 0.0}, 5.0, e).estimate,
                reference::mc_bond_price(v, {0.0, 0.0}, 5.0, e).estimate, 1e-13);
}

TEST(MCVarianceReduction, AntitheticReducesSpread) {
    // Spread of the estimate over independent seeds, with and without pairing.
    const Vasicek v{0.4, 0.05, 0.03};
    auto spread = [&](bool antithetic) {
        std::vector<double> estimates;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            MCConfig c = quick(4000);
            c.seed = seed;
            c.antithetic = antithetic;
            estimates.push_back(mc_bond_price(v, {0.0, 0.03}, 5.0, c).estimate);
        }
        double mean = 0.0;
        for (double e : estimates) mean += e / 20.0;
        double var = 0.0;
        for (double e : estimates) var += (e - mean) * (e - mean) / 19.0;
        return var;
    };
    EXPECT_LT(spread(true), spread(false));
}

TEST(MCSchemes, ExactAndEulerAgree) {
    const Vasicek v{0.4, 0.05, 0.03};
    MCConfig exact = quick();
    MCConfig euler = quick();
    euler.scheme = Scheme::Euler;
    euler.steps = 2000;
    const auto a = mc_bond_price(v, {0.0, 0.03}, 5.0, exact);
    const auto b = mc_bond_price(v, {0.0, 0.03}, 5.0, euler);
    EXPECT_LT(std::abs(a.estimate - b.estimate),
              4.0 * std::hypot(a.std_error, b.std_error));
}

TEST(MCSchemes, FullTruncationKeepsPathsFinite) {
    // Large beta2 relative to beta1 pushes paths against the radicand boundary.
    const GenericAffine g{0.001, 0.1, 1e-6, 0.5};
    MCConfig c = quick(2000);
    c.scheme = Scheme::Euler;
    c.steps = 50;
    for (const auto& p : euler_paths(g, {0.0, 0.0}, 5.0, c)) {
        ASSERT_TRUE(std::isfinite(p.rate));
        ASSERT_TRUE(std::isfinite(p.integral));
    }
}

TEST(MCConfigErrors, Rejected) {
    const Vasicek v{0.4, 0.05, 0.03};
    MCConfig c = quick(99);
    EXPECT_THROW(mc_bond_price(v, {0.0, 0.03}, 5.0, c), InvalidInput);
    c = quick(1000);
    c.steps = 0;
    EXPECT_THROW(mc_bond_price(v, {0.0, 0.03}, 5.0, c), InvalidInput);
    try {
        mc_bond_price(GenericAffine{0.02, 0.4, 0.0009, 0.05}, {0.0, 0.03}, 5.0, quick(1000));
        FAIL() << "exact scheme accepted a square-root model";
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("use euler scheme"), std::string::npos);
    }
}

TEST(MCPaths, AntitheticUsesEvenCount) {
    const auto r = mc_bond_price(Vasicek{0.4, 0.05, 0.03}, {0.0, 0.03}, 1.0, quick(1001));
    EXPECT_EQ(r.paths_used, 1002u);
    EXPECT_EQ(r.paths_used % 2, 0u);
}
