#pragma once

#include "gravent/config.hpp"
#include "gravent/rng.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gravent {

/// A uniform sphere: centre, radius and total mass.
struct SphereSource {
    Vec3 center = Vec3::Zero();
    double R = 0.0;
    double M = 0.0;

    double volume() const { return ball_volume(R); }
};

inline SphereSource sphere_of(const ExperimentConfig& cfg, int kappa, Branch b) {
    return {cfg.center(kappa, b), cfg.R, cfg.M};
}

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class QuadratureMethod { MonteCarlo, NestedProductRule };

inline const char* to_string(QuadratureMethod m) {
    return m == QuadratureMethod::MonteCarlo ? "monte_carlo" : "nested_product_rule";
}

template <class T = double>
struct QuadratureResult {
    T value{};
    double std_error = 0.0;
    std::size_t n_samples = 0;
    QuadratureMethod method = QuadratureMethod::MonteCarlo;
};

using ComplexQuadratureResult = QuadratureResult<std::complex<double>>;

struct MonteCarloOptions {
    std::size_t n_samples = 1'000'000;
    std::uint64_t seed = 20250101;
    unsigned threads = 0; // 0: hardware concurrency
};

struct ProductRuleOptions {
    // Gauss-Legendre order along r and cos(theta); the azimuth uses 2*order
    // equally spaced points.
    static constexpr int order = 24;
};

struct QuadratureOptions {
    QuadratureMethod method = QuadratureMethod::MonteCarlo;
    MonteCarloOptions mc{};
};

namespace detail {

inline constexpr std::size_t mc_block_size = 8192;

inline Vec3 sample_ball(const SphereSource& ball, KeyedStream& rng) {
    const double r = ball.R * std::cbrt(rng.uniform_pos());
    const double cos_t = 2.0 * rng.uniform() - 1.0;
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    const double ph = 2.0 * std::numbers::pi * rng.uniform();
    return ball.center + r * Vec3(sin_t * std::cos(ph), sin_t * std::sin(ph), cos_t);
}

struct BlockStats {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    bool failed = false;
    std::string error;
};

inline void merge(BlockStats& acc, const BlockStats& b) {
    if (b.n == 0) return;
    if (acc.n == 0) {
        acc = b;
        return;
    }
    const double n = static_cast<double>(acc.n + b.n);
    const double delta = b.mean - acc.mean;
    acc.mean += delta * static_cast<double>(b.n) / n;
    acc.m2 += b.m2 + delta * delta * static_cast<double>(acc.n) * static_cast<double>(b.n) / n;
    acc.n += b.n;
}

inline std::string format_point(const Vec3& p) {
    std::ostringstream os;
    os.precision(10);
    os << '(' << p.x() << ", " << p.y() << ", " << p.z() << ')';
    return os.str();
}

/// Runs `block_fn(block_index, stats)` over all blocks on a thread pool and merges
/// the per-block statistics in block order, so the result is independent of the
/// number of workers.
template <class BlockFn>
BlockStats run_blocks(std::size_t n, unsigned threads, BlockFn&& block_fn) {
    const std::size_t n_blocks = (n + mc_block_size - 1) / mc_block_size;
    std::vector<BlockStats> stats(n_blocks);
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n_blocks)));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) {
            const std::size_t begin = b * mc_block_size;
            const std::size_t count = std::min(mc_block_size, n - begin);
            block_fn(b, count, stats[b]);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    BlockStats total;
    for (const auto& s : stats) {
        if (s.failed) throw QuadratureError(s.error);
        merge(total, s);
    }
    return total;
}

template <class Sample>
void accumulate(BlockStats& s, double v, Sample&& describe) {
    if (!std::isfinite(v)) {
        s.failed = true;
        s.error = "integrand returned a non-finite value at " + describe();
        return;
    }
    ++s.n;
    const double delta = v - s.mean;
    s.mean += delta / static_cast<double>(s.n);
    s.m2 += delta * (v - s.mean);
}

template <int N>
struct GaussRule {
    std::array<double, N> x{};
    std::array<double, N> w{};
    GaussRule() {
        using rule = boost::math::quadrature::gauss<double, N>;
        const auto& a = rule::abscissa();
        const auto& wt = rule::weights();
        int k = 0;
        const std::size_t start = (N % 2 == 1) ? 1 : 0;
        if (N % 2 == 1) {
            x[k] = 0.0;
            w[k++] = wt[0];
        }
        for (std::size_t m = start; m < a.size(); ++m) {
            x[k] = a[m];
            w[k++] = wt[m];
            x[k] = -a[m];
            w[k++] = wt[m];
        }
    }
};

template <int N>
const GaussRule<N>& gauss_rule() {
    static const GaussRule<N> rule;
    return rule;
}

/// Tensor-product Gauss rule over a ball; all weights include the Jacobian.
template <int N, class F>
double product_ball(F&& f, const SphereSource& ball) {
    const auto& g = gauss_rule<N>();
    const int n_phi = 2 * N;
    double total = 0.0;
    for (int a = 0; a < N; ++a) {
        const double r = 0.5 * ball.R * (g.x[a] + 1.0);
        const double wr = 0.5 * ball.R * g.w[a] * r * r;
        for (int b = 0; b < N; ++b) {
            const double ct = g.x[b];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            double ring = 0.0;
            for (int c = 0; c < n_phi; ++c) {
                const double ph = 2.0 * std::numbers::pi * (c + 0.5) / n_phi;
                ring += f(Vec3(ball.center + r * Vec3(st * std::cos(ph), st * std::sin(ph), ct)));
            }
            total += wr * g.w[b] * ring * (2.0 * std::numbers::pi / n_phi);
        }
    }
    return total;
}

} // namespace detail

/// Uniform Monte Carlo over ball1 x ball2. Estimate = mean * V1 * V2.
template <class F>
QuadratureResult<double> mc_integrate_two_balls(F&& f, const SphereSource& ball1, const SphereSource& ball2,
                                                const MonteCarloOptions& opt = {}) {
    if (opt.n_samples < 10'000) throw std::invalid_argument("mc_integrate_two_balls: need n >= 1e4 samples");
    if (!(ball1.R > 0.0) || !(ball2.R > 0.0)) throw std::invalid_argument("ball radius must be > 0");

    auto stats = detail::run_blocks(opt.n_samples, opt.threads,
                                    [&](std::size_t block, std::size_t count, detail::BlockStats& s) {
        KeyedStream rng(opt.seed, block);
        for (std::size_t k = 0; k < count && !s.failed; ++k) {
            const Vec3 x = detail::sample_ball(ball1, rng);
            const Vec3 y = detail::sample_ball(ball2, rng);
            detail::accumulate(s, f(x, y), [&] {
                return "x = " + detail::format_point(x) + ", y = " + detail::format_point(y);
            });
        }
    });

    const double vol = ball1.volume() * ball2.volume();
    const double n = static_cast<double>(stats.n);
    const double var = stats.n > 1 ? stats.m2 / (n - 1.0) : 0.0;
    return {stats.mean * vol, std::sqrt(var / n) * vol, stats.n, QuadratureMethod::MonteCarlo};
}

/// Uniform Monte Carlo over a single ball. Estimate = mean * V.
template <class F>
QuadratureResult<double> mc_integrate_ball(F&& f, const SphereSource& ball, const MonteCarloOptions& opt = {}) {
    if (opt.n_samples < 10'000) throw std::invalid_argument("mc_integrate_ball: need n >= 1e4 samples");
    if (!(ball.R > 0.0)) throw std::invalid_argument("ball radius must be > 0");

    auto stats = detail::run_blocks(opt.n_samples, opt.threads,
                                    [&](std::size_t block, std::size_t count, detail::BlockStats& s) {
        KeyedStream rng(opt.seed, block);
        for (std::size_t k = 0; k < count && !s.failed; ++k) {
            const Vec3 x = detail::sample_ball(ball, rng);
            detail::accumulate(s, f(x), [&] { return "x = " + detail::format_point(x); });
        }
    });
    const double vol = ball.volume();
    const double n = static_cast<double>(stats.n);
    const double var = stats.n > 1 ? stats.m2 / (n - 1.0) : 0.0;
    return {stats.mean * vol, std::sqrt(var / n) * vol, stats.n, QuadratureMethod::MonteCarlo};
}

/// Nested Gauss-Legendre rule in spherical coordinates over one ball, for
/// integrands that are smooth inside it. The error estimate is the difference to
/// the rule of half the order.
template <class F>
QuadratureResult<double> product_integrate_ball(F&& f, const SphereSource& ball) {
    if (!(ball.R > 0.0)) throw std::invalid_argument("ball radius must be > 0");
    constexpr int N = ProductRuleOptions::order;
    const double fine = detail::product_ball<N>(f, ball);
    const double coarse = detail::product_ball<N / 2>(f, ball);
    if (!std::isfinite(fine)) throw QuadratureError("product rule produced a non-finite value");
    const std::size_t evals = static_cast<std::size_t>(N) * N * 2 * N;
    return {fine, std::abs(fine - coarse), evals, QuadratureMethod::NestedProductRule};
}

/// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity.
template <class F>
double adaptive_integrate(F&& f, double a, double b, double rel_tol, const char* what) {
    double err = 0.0;
    double l1 = 0.0;
    const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &err, &l1);
    if (!std::isfinite(val) || err > std::max(1e3 * rel_tol * l1, 1e-300)) {
        std::ostringstream os;
        os << what << ": quadrature on [" << a << ", " << b << "] did not converge (value " << val
           << ", error estimate " << err << ", L1 norm " << l1 << ')';
        throw QuadratureError(os.str());
    }
    return val;
}

} // namespace gravent
