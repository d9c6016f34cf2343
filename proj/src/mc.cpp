#include "affine/mc.hpp"

#include <array>
#include <cmath>
#include <variant>

#include "affine/closed_form.hpp"
#include "affine/engine.hpp"
#include "affine/philox.hpp"

namespace affine {

namespace {

constexpr std::size_t kBlockSize = 4096;

// Running mean and co-moment matrix of an N-vector (Welford, merged with Chan's rule).
template <std::size_t N>
struct Moments {
    double count = 0.0;
    std::array<double, N> mean{};
    std::array<std::array<double, N>, N> comoment{};

    void add(const std::array<double, N>& x) noexcept {
        count += 1.0;
        std::array<double, N> before{};
        for (std::size_t i = 0; i < N; ++i) {
            before[i] = x[i] - mean[i];
            mean[i] += before[i] / count;
        }
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) comoment[i][j] += before[i] * (x[j] - mean[j]);
        }
    }

    void merge(const Moments& other) noexcept {
        if (other.count == 0.0) return;
        if (count == 0.0) {
            *this = other;
            return;
        }
        const double total = count + other.count;
        std::array<double, N> delta{};
        for (std::size_t i = 0; i < N; ++i) delta[i] = other.mean[i] - mean[i];
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                comoment[i][j] +=
                    other.comoment[i][j] + delta[i] * delta[j] * count * other.count / total;
            }
        }
        for (std::size_t i = 0; i < N; ++i) mean[i] += delta[i] * other.count / total;
        count = total;
    }

    double covariance(std::size_t i, std::size_t j) const noexcept {
        return count > 1.0 ? comoment[i][j] / (count - 1.0) : 0.0;
    }

    MCResult result(std::size_t i, std::size_t paths_used) const noexcept {
        const double se = count > 1.0 ? std::sqrt(std::max(covariance(i, i), 0.0) / count) : 0.0;
        return {mean[i], se, paths_used};
    }
};

template <std::size_t N>
Moments<N> merge_pairwise(const std::vector<Moments<N>>& parts, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    auto left = merge_pairwise(parts, lo, mid);
    left.merge(merge_pairwise(parts, mid, hi));
    return left;
}

// Draws the i-th independent sample. The partition into blocks is fixed by
// kBlockSize, so the reduction tree does not depend on the thread count.
template <std::size_t N, class Sampler>
Moments<N> simulate(std::size_t samples, const Sampler& sampler) {
    const std::size_t blocks = (samples + kBlockSize - 1) / kBlockSize;
    std::vector<Moments<N>> parts(blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(blocks); ++blk) {
        const std::size_t begin = static_cast<std::size_t>(blk) * kBlockSize;
        const std::size_t end = std::min(begin + kBlockSize, samples);
        Moments<N> local;
        for (std::size_t i = begin; i < end; ++i) local.add(sampler(i));
        parts[static_cast<std::size_t>(blk)] = local;
    }
    return merge_pairwise(parts, 0, blocks);
}

double one_minus_exp(double x) { return -std::expm1(-x); }

// x - (1 - e^{-x}) - (1 - e^{-x})^2 / 2, which is x^3/3 + O(x^4) near zero.
double integrated_ou_bracket(double x) {
    if (x < 1e-3) return x * x * x * (1.0 / 3.0 - x / 4.0 + 7.0 * x * x / 60.0);
    const double q = one_minus_exp(x);
    return x - q - 0.5 * q * q;
}

// Produces (r_T, I) for a path index under either scheme.
class PathSource {
public:
    PathSource(const ModelParams& params, const MarketState& state, double horizon,
               const MCConfig& config)
        : generic_(to_generic(params)),
          state_(state),
          horizon_(horizon),
          steps_(config.steps),
          seed_(config.seed),
          exact_(config.scheme == Scheme::Exact) {
        if (exact_) {
            const auto tr = gaussian_transition(params, state, horizon);
            mean_r_ = tr.mean_rate;
            mean_i_ = tr.mean_integral;
            l11_ = std::sqrt(std::max(tr.var_rate, 0.0));
            l21_ = l11_ > 0.0 ? tr.covariance / l11_ : 0.0;
            l22_ = std::sqrt(std::max(tr.var_integral - l21_ * l21_, 0.0));
        }
    }

    RateSample operator()(std::uint64_t path, bool negate) const noexcept {
        if (!exact_) return euler_path(generic_, state_, horizon_, steps_, seed_, path, negate);
        auto [z1, z2] = PathNormals(seed_, path).block(0);
        if (negate) {
            z1 = -z1;
            z2 = -z2;
        }
        return {mean_r_ + l11_ * z1, mean_i_ + l21_ * z1 + l22_ * z2};
    }

private:
    GenericAffine generic_;
    MarketState state_;
    double horizon_;
    std::size_t steps_;
    std::uint64_t seed_;
    bool exact_;
    double mean_r_ = 0.0, mean_i_ = 0.0, l11_ = 0.0, l21_ = 0.0, l22_ = 0.0;
};

// Runs `payoff(RateSample) -> array<double, N>` over the configured paths,
// averaging antithetic pairs into one sample.
template <std::size_t N, class Payoff>
std::pair<Moments<N>, std::size_t> run(const PathSource& source, const MCConfig& config,
                                       const Payoff& payoff) {
    if (!config.antithetic) {
        auto m = simulate<N>(config.paths, [&](std::size_t i) { return payoff(source(i, false)); });
        return {m, config.paths};
    }
    const std::size_t pairs = (config.paths + 1) / 2;
    auto m = simulate<N>(pairs, [&](std::size_t i) {
        auto up = payoff(source(i, false));
        const auto down = payoff(source(i, true));
        for (std::size_t k = 0; k < N; ++k) up[k] = 0.5 * (up[k] + down[k]);
        return up;
    });
    return {m, 2 * pairs};
}

void require_horizon(const MarketState& state, double horizon) {
    if (!(horizon >= state.t)) throw InvalidInput("horizon must not precede valuation time");
}

}  // namespace

GaussianTransition gaussian_transition(const ModelParams& params, const MarketState& state,
                                       double horizon) {
    require_horizon(state, horizon);
    const auto named = as_closed_form_model(params);
    if (!named) throw InvalidInput("exact scheme needs beta2 = 0: use euler scheme");
    const double tau = horizon - state.t;
    const double r = state.r;

    if (const auto* m = std::get_if<Merton>(&*named)) {
        const double s2 = m->sigma * m->sigma;
        return {r + m->phi * tau, r * tau + 0.5 * m->phi * tau * tau, s2 * tau,
                s2 * tau * tau * tau / 3.0, 0.5 * s2 * tau * tau};
    }
    const auto& v = std::get<Vasicek>(*named);
    const double k = v.kappa;
    const double s2 = v.sigma * v.sigma;
    const double b = one_minus_exp(k * tau) / k;
    const double decay = std::exp(-k * tau);
    return {v.theta + (r - v.theta) * decay,
            v.theta * tau + (r - v.theta) * b,
            s2 * one_minus_exp(2.0 * k * tau) / (2.0 * k),
            s2 / (k * k * k) * integrated_ou_bracket(k * tau),
            0.5 * s2 * b * b};
}

RateSample sample_rate_and_integral(const ModelParams& params, const MarketState& state,
                                    double horizon, std::uint64_t seed, std::uint64_t path_index,
                                    bool negate) {
    MCConfig config;
    config.seed = seed;
    config.scheme = Scheme::Exact;
    return PathSource(params, state, horizon, config)(path_index, negate);
}

RateSample euler_path(const GenericAffine& params, const MarketState& state, double horizon,
                      std::size_t steps, std::uint64_t seed, std::uint64_t path_index,
                      bool negate) {
    const double dt = (horizon - state.t) / static_cast<double>(steps);
    const double sqrt_dt = std::sqrt(dt);
    const double sign = negate ? -1.0 : 1.0;
    PathNormals normals(seed, path_index);
    double r = state.r;
    double integral = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double diffusion = std::sqrt(std::max(params.beta1 + params.beta2 * r, 0.0));
        const double next = r + (params.alpha1 - params.alpha2 * r) * dt +
                            diffusion * sqrt_dt * sign * normals.next();
        integral += 0.5 * (r + next) * dt;
        r = next;
    }
    return {r, integral};
}

std::vector<RateSample> euler_paths(const GenericAffine& params, const MarketState& state,
                                    double horizon, const MCConfig& config) {
    require_horizon(state, horizon);
    if (config.steps < 1) throw InvalidInput("steps must be at least 1");
    const std::size_t count = config.antithetic ? 2 * ((config.paths + 1) / 2) : config.paths;
    std::vector<RateSample> out(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        out[static_cast<std::size_t>(i)] =
            config.antithetic
                ? euler_path(params, state, horizon, config.steps, config.seed, idx / 2, idx % 2 == 1)
                : euler_path(params, state, horizon, config.steps, config.seed, idx, false);
    }
    return out;
}

void check_config(const MCConfig& config, const ModelParams& params) {
    if (config.paths < 100) throw InvalidInput("paths must be at least 100");
    if (config.steps < 1) throw InvalidInput("steps must be at least 1");
    if (config.scheme == Scheme::Exact && !as_closed_form_model(params)) {
        throw InvalidInput("exact scheme needs beta2 = 0: use euler scheme");
    }
}

MCResult mc_bond_price(const ModelParams& params, const MarketState& state, double maturity,
                       const MCConfig& config) {
    check_config(config, params);
    require_horizon(state, maturity);
    const PathSource source(params, state, maturity, config);
    const auto [m, used] =
        run<1>(source, config, [](const RateSample& s) { return std::array{std::exp(-s.integral)}; });
    return m.result(0, used);
}

MCResult mc_option_price(const ModelParams& params, const MarketState& state,
                         const OptionSpec& spec, const MCConfig& config) {
    check_config(config, params);
    require_valid(validate(spec, state));
    const auto ab = affine_pair(params, spec.bond_maturity - spec.expiry);
    const double strike = spec.strike;
    const bool call = spec.kind == OptionKind::Call;
    const PathSource source(params, state, spec.expiry, config);
    const auto [m, used] = run<1>(source, config, [&](const RateSample& s) {
        const double bond = std::exp(-ab.a - s.rate * ab.b);
        const double intrinsic = call ? bond - strike : strike - bond;
        return std::array{std::exp(-s.integral) * std::max(intrinsic, 0.0)};
    });
    return m.result(0, used);
}

ForwardMoments mc_forward_moments(const ModelParams& params, const MarketState& state,
                                  double expiry, double maturity, const MCConfig& config) {
    check_config(config, params);
    if (!as_closed_form_model(params)) {
        throw InvalidInput("forward moments need a Merton or Vasicek model");
    }
    require_horizon(state, expiry);
    if (!(maturity >= expiry)) throw InvalidInput("bond maturity must not precede expiry");

    const double bond_T = bond_price_closed(params, state, expiry);
    const double bond_S = bond_price_closed(params, state, maturity);
    const double forward_today = forward_price(bond_S, bond_T);
    const double log_forward_today = std::log(forward_today);
    const auto ab = affine_pair(params, maturity - expiry);

    const PathSource source(params, state, expiry, config);
    // Components: w X, w X^2, w F_T with w = exp(-I) / B(t, T), X = ln(F_T / F_t).
    const auto [m, used] = run<3>(source, config, [&](const RateSample& s) {
        const double weight = std::exp(-s.integral) / bond_T;
        const double log_forward = -ab.a - s.rate * ab.b;
        const double x = log_forward - log_forward_today;
        return std::array{weight * x, weight * x * x, weight * std::exp(log_forward)};
    });

    ForwardMoments out;
    out.forward_today = forward_today;
    out.mean_log = m.result(0, used);
    out.forward = m.result(2, used);

    const double mu = m.mean[0];
    const double var_influence =
        m.covariance(1, 1) - 4.0 * mu * m.covariance(0, 1) + 4.0 * mu * mu * m.covariance(0, 0);
    out.var_log.estimate = m.mean[1] - mu * mu;
    out.var_log.std_error =
        m.count > 1.0 ? std::sqrt(std::max(var_influence, 0.0) / m.count) : 0.0;
    out.var_log.paths_used = used;
    return out;
}

}  // namespace affine
