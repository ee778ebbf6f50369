#include "qdc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include "qdc/error.hpp"

namespace qdc {

namespace {

constexpr double kPi = std::numbers::pi;

double checked(double v) {
    if (!std::isfinite(v)) throw Error(ErrorCode::Internal, "objective returned a non-finite value");
    return v;
}

bool past(const StopCriteria& stop) { return stop.deadline && Clock::now() >= *stop.deadline; }

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void project(std::vector<double>& x, std::span<const ParamBound> bounds) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], bounds[i].lower, bounds[i].upper);
}

// Gradient components that can still move x inside the box.
std::vector<double> projected_gradient(std::span<const double> x, std::span<const double> g,
                                       std::span<const ParamBound> bounds) {
    std::vector<double> pg(g.begin(), g.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= bounds[i].lower && g[i] > 0.0) pg[i] = 0.0;
        if (x[i] >= bounds[i].upper && g[i] < 0.0) pg[i] = 0.0;
    }
    return pg;
}

struct CorrectionPair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

// Two-loop recursion restricted to the free variables (mask == 1).
std::vector<double> lbfgs_direction(std::span<const double> g, const std::deque<CorrectionPair>& mem,
                                    const std::vector<char>& free) {
    const std::size_t n = g.size();
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = free[i] ? g[i] : 0.0;
    auto masked_dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (free[i]) s += a[i] * b[i];
        return s;
    };
    std::vector<double> alpha(mem.size());
    for (std::size_t k = mem.size(); k-- > 0;) {
        alpha[k] = mem[k].rho * masked_dot(mem[k].s, q);
        for (std::size_t i = 0; i < n; ++i)
            if (free[i]) q[i] -= alpha[k] * mem[k].y[i];
    }
    if (!mem.empty()) {
        const auto& last = mem.back();
        const double yy = masked_dot(last.y, last.y);
        const double sy = masked_dot(last.s, last.y);
        if (yy > 0.0 && sy > 0.0)
            for (double& v : q) v *= sy / yy;
    }
    for (std::size_t k = 0; k < mem.size(); ++k) {
        const double beta = mem[k].rho * masked_dot(mem[k].y, q);
        for (std::size_t i = 0; i < n; ++i)
            if (free[i]) q[i] += mem[k].s[i] * (alpha[k] - beta);
    }
    for (double& v : q) v = -v;
    return q;
}

// Tsallis-Stariolo visiting distribution with wrap-around into the box.
class VisitingDistribution {
public:
    VisitingDistribution(std::span<const ParamBound> bounds, double visiting, std::mt19937_64& rng)
        : bounds_(bounds), q_(visiting), rng_(rng) {
        factor2_ = std::exp((4.0 - q_) * std::log(q_ - 1.0));
        factor3_ = std::exp((2.0 - q_) * std::log(2.0) / (q_ - 1.0));
        factor4p_ = std::sqrt(kPi) * factor2_ / (factor3_ * (3.0 - q_));
        const double factor5 = 1.0 / (q_ - 1.0) - 0.5;
        const double d1 = 2.0 - factor5;
        factor6_ = kPi * (1.0 - factor5) / std::sin(kPi * (1.0 - factor5)) / std::exp(std::lgamma(d1));
    }

    std::vector<double> visit(std::span<const double> x, std::size_t step, double temperature) {
        const std::size_t dim = x.size();
        std::vector<double> out(x.begin(), x.end());
        if (step < dim) {
            auto jumps = sample(temperature, dim);
            const double upper_sample = uniform_(rng_);
            const double lower_sample = uniform_(rng_);
            for (std::size_t i = 0; i < dim; ++i) {
                double v = jumps[i];
                if (v > kTailLimit) v = kTailLimit * upper_sample;
                if (v < -kTailLimit) v = -kTailLimit * lower_sample;
                out[i] = wrap(x[i] + v, i);
            }
        } else {
            const std::size_t i = step - dim;
            double v = sample(temperature, 1)[0];
            if (v > kTailLimit) v = kTailLimit * uniform_(rng_);
            else if (v < -kTailLimit) v = -kTailLimit * uniform_(rng_);
            out[i] = wrap(x[i] + v, i);
        }
        return out;
    }

private:
    static constexpr double kTailLimit = 1e8;
    static constexpr double kMinVisitBound = 1e-10;

    std::vector<double> sample(double temperature, std::size_t dim) {
        const double factor1 = std::exp(std::log(temperature) / (q_ - 1.0));
        const double factor4 = factor4p_ * factor1;
        const double sigma = std::exp(-(q_ - 1.0) * std::log(factor6_ / factor4) / (3.0 - q_));
        std::vector<double> out(dim);
        for (auto& v : out) {
            const double x = normal_(rng_);
            const double y = normal_(rng_);
            const double den = std::exp((q_ - 1.0) * std::log(std::fabs(y)) / (3.0 - q_));
            v = x * sigma / den;
        }
        return out;
    }

    double wrap(double v, std::size_t i) const {
        const double lo = bounds_[i].lower;
        const double range = bounds_[i].upper - lo;
        if (range <= 0.0) return lo;
        const double b = std::fmod(v - lo, range) + range;
        double w = std::fmod(b, range) + lo;
        if (std::fabs(w - lo) < kMinVisitBound) w += kMinVisitBound;
        return w;
    }

    std::span<const ParamBound> bounds_;
    double q_;
    std::mt19937_64& rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    double factor2_, factor3_, factor4p_, factor6_;
};

}  // namespace

std::vector<double> fd_gradient(const ObjectiveFn& f, std::span<const double> x, double step,
                                long* evaluations) {
    std::vector<double> probe(x.begin(), x.end());
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = probe[i];
        probe[i] = xi + step;
        const double fp = checked(f(probe));
        probe[i] = xi - step;
        const double fm = checked(f(probe));
        probe[i] = xi;
        g[i] = (fp - fm) / (2.0 * step);
    }
    if (evaluations) *evaluations += 2 * static_cast<long>(x.size());
    return g;
}

LocalResult minimize_bounded_lbfgs(const ObjectiveFn& f, std::vector<double> x0,
                                   std::span<const ParamBound> bounds, const LocalSearchConfig& cfg,
                                   const StopCriteria& stop) {
    if (bounds.size() != x0.size()) throw Error(ErrorCode::InvalidArgument, "bounds size mismatch");
    const std::size_t n = x0.size();
    const int max_iter = cfg.max_iterations > 0
                             ? cfg.max_iterations
                             : std::clamp(static_cast<int>(6 * n), 100, 1000);

    LocalResult res;
    res.x = std::move(x0);
    project(res.x, bounds);
    res.f = checked(f(res.x));
    res.evaluations = 1;
    auto g = fd_gradient(f, res.x, cfg.fd_step, &res.evaluations);
    std::deque<CorrectionPair> memory;

    for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
        if (past(stop)) {
            res.hit_deadline = true;
            break;
        }
        const auto pg = projected_gradient(res.x, g, bounds);
        double pg_norm = 0.0;
        for (double v : pg) pg_norm = std::max(pg_norm, std::fabs(v));
        if (pg_norm < cfg.gradient_tolerance) break;

        std::vector<char> free(n);
        for (std::size_t i = 0; i < n; ++i) free[i] = pg[i] != 0.0;
        auto dir = lbfgs_direction(g, memory, free);
        if (dot(dir, g) >= 0.0) {
            memory.clear();
            dir = pg;
            for (double& v : dir) v = -v;
        }

        double step = memory.empty() ? std::min(1.0, 1.0 / pg_norm) : 1.0;
        std::vector<double> trial(n);
        double f_trial = res.f;
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = res.x[i] + step * dir[i];
            project(trial, bounds);
            double descent = 0.0;
            for (std::size_t i = 0; i < n; ++i) descent += g[i] * (trial[i] - res.x[i]);
            f_trial = checked(f(trial));
            ++res.evaluations;
            if (descent < 0.0 && f_trial <= res.f + 1e-4 * descent) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (memory.empty()) break;
            memory.clear();
            continue;
        }

        auto g_new = fd_gradient(f, trial, cfg.fd_step, &res.evaluations);
        CorrectionPair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            pair.s[i] = trial[i] - res.x[i];
            pair.y[i] = g_new[i] - g[i];
        }
        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-12 * dot(pair.y, pair.y)) {
            pair.rho = 1.0 / sy;
            memory.push_back(std::move(pair));
            if (static_cast<int>(memory.size()) > cfg.memory) memory.pop_front();
        }

        const double decrease = res.f - f_trial;
        res.x = trial;
        res.f = f_trial;
        g = std::move(g_new);
        if (decrease <= cfg.function_tolerance * std::max(std::fabs(res.f), std::fabs(res.f + decrease)))
            break;
        if (stop.target && res.f <= *stop.target * 1e-6) break;
    }
    return res;
}

AnnealResult dual_annealing(const ObjectiveFn& f, std::span<const ParamBound> bounds, std::uint64_t seed,
                            const AnnealConfig& anneal, const LocalSearchConfig& local,
                            const StopCriteria& stop) {
    const std::size_t dim = bounds.size();
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dual_annealing needs at least one parameter");
    if (!(anneal.visiting > 1.0 && anneal.visiting < 3.0))
        throw Error(ErrorCode::InvalidArgument, "visiting parameter must lie in (1, 3)");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    VisitingDistribution visitor(bounds, anneal.visiting, rng);

    AnnealResult res;
    auto eval = [&](std::span<const double> x) {
        ++res.evaluations;
        return checked(f(x));
    };
    auto random_point = [&] {
        std::vector<double> x(dim);
        for (std::size_t i = 0; i < dim; ++i)
            x[i] = bounds[i].lower + uniform(rng) * (bounds[i].upper - bounds[i].lower);
        return x;
    };
    auto local_search = [&](const std::vector<double>& x, double e) {
        auto lr = minimize_bounded_lbfgs(f, x, bounds, local, stop);
        res.evaluations += lr.evaluations;
        ++res.local_searches;
        if (lr.f < e) return std::pair{lr.f, std::move(lr.x)};
        return std::pair{e, x};
    };

    std::vector<double> current = random_point();
    double e_current = eval(current);
    res.x = current;
    res.f = e_current;

    auto done = [&] {
        if (stop.target && res.f <= *stop.target) {
            res.reached_target = true;
            return true;
        }
        if (past(stop)) {
            res.timed_out = true;
            return true;
        }
        return false;
    };

    const double q = anneal.visiting;
    const double t1 = std::exp((q - 1.0) * std::log(2.0)) - 1.0;
    const double restart_temperature = anneal.initial_temperature * anneal.restart_temperature_ratio;
    const double k_ls = 100.0 * static_cast<double>(dim);
    const double acceptance = anneal.acceptance;

    std::vector<double> xmin = current;
    double emin = e_current;
    int not_improved = 0;
    int not_improved_max = 1000;
    bool stopped = false;

    while (!stopped && res.iterations < anneal.max_iterations) {
        for (int i = 0; i < anneal.max_iterations; ++i) {
            if (res.iterations >= anneal.max_iterations) break;
            const double s = static_cast<double>(i) + 2.0;
            const double t2 = std::exp((q - 1.0) * std::log(s)) - 1.0;
            const double temperature = anneal.initial_temperature * t1 / t2;
            if (temperature < restart_temperature) {
                current = random_point();
                e_current = eval(current);
                break;
            }

            // Markov chain at this temperature.
            const double temperature_step = temperature / static_cast<double>(i + 1);
            ++not_improved;
            bool improved = false;
            for (std::size_t j = 0; j < 2 * dim; ++j) {
                if (j == 0) improved = (i == 0);
                auto visit = visitor.visit(current, j, temperature);
                const double e = eval(visit);
                if (e < e_current) {
                    current = std::move(visit);
                    e_current = e;
                    if (e < res.f) {
                        res.f = e;
                        res.x = current;
                        improved = true;
                        not_improved = 0;
                    }
                } else {
                    const double r = uniform(rng);
                    const double pqv_temp = 1.0 - (1.0 - acceptance) * (e - e_current) / temperature_step;
                    const double pqv = pqv_temp <= 0.0 ? 0.0 : std::exp(std::log(pqv_temp) / (1.0 - acceptance));
                    if (r <= pqv) {
                        current = std::move(visit);
                        e_current = e;
                        xmin = current;
                    }
                    if (not_improved >= not_improved_max && (j == 0 || e_current < emin)) {
                        emin = e_current;
                        xmin = current;
                    }
                }
                if (past(stop)) break;
            }

            // Local refinement.
            if (improved && !past(stop)) {
                auto [e, x] = local_search(res.x, res.f);
                if (e < res.f) {
                    not_improved = 0;
                    res.f = e;
                    res.x = x;
                    current = std::move(x);
                    e_current = e;
                }
            }
            bool do_ls = false;
            if (k_ls < 90.0 * static_cast<double>(dim)) {
                const double pls = std::exp(k_ls * (res.f - e_current) / temperature_step);
                if (pls >= uniform(rng)) do_ls = true;
            }
            if (not_improved >= not_improved_max) do_ls = true;
            if (do_ls && !past(stop)) {
                auto [e, x] = local_search(xmin, emin);
                xmin = x;
                emin = e;
                not_improved = 0;
                not_improved_max = static_cast<int>(dim);
                if (e < res.f) {
                    res.f = e;
                    res.x = x;
                    current = std::move(x);
                    e_current = e;
                }
            }

            ++res.iterations;
            res.best_trace.push_back(res.f);
            if (done()) {
                stopped = true;
                break;
            }
        }
    }
    if (!stopped) done();
    return res;
}

}  // namespace qdc
