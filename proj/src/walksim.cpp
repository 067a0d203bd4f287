#include "walkmax/walksim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "walkmax/errors.hpp"
#include "walkmax/normalize.hpp"
#include "walkmax/parallel.hpp"
#include "walkmax/quadrature.hpp"

namespace walkmax::walksim {

PerturbationSpec PerturbationSpec::uniform(double b, double gamma) {
    if (!(b > 0.0)) throw std::invalid_argument("perturbation amplitude must be positive");
    if (!(gamma > 2.0)) throw std::invalid_argument("gamma_moment must exceed 2");
    return {Law::Uniform, b, gamma};
}

PerturbationSpec PerturbationSpec::rademacher(double b, double gamma) {
    if (!(b > 0.0)) throw std::invalid_argument("perturbation amplitude must be positive");
    if (!(gamma > 2.0)) throw std::invalid_argument("gamma_moment must exceed 2");
    return {Law::Rademacher, b, gamma};
}

double PerturbationSpec::variance() const {
    return law == Law::Uniform ? amplitude * amplitude / 3.0 : amplitude * amplitude;
}

double PerturbationSpec::sample(Rng& rng) const {
    if (law == Law::Uniform) return amplitude * (2.0 * rng.uniform01() - 1.0);
    return rng.uniform01() < 0.5 ? -amplitude : amplitude;
}

namespace {

// E((X+y)^2; |X+y| <= x) through the closed partial moments of X.
double shifted_truncated_m2(const jumps::JumpSpec& spec, double x, double y) {
    const auto pm = jumps::partial_moments(spec, -x - y, x - y);
    return pm.m2 + 2.0 * y * pm.m1 + y * y * pm.m0;
}

std::uint64_t checked_horizon(const WalkConfig& cfg, std::uint64_t n_a) {
    std::uint64_t K;
    if (cfg.horizon_override > 0) {
        K = cfg.horizon_override;
    } else {
        if (cfg.a <= 0.0)
            throw std::invalid_argument(
                "driftless walks need an explicit horizon_override");
        K = static_cast<std::uint64_t>(
            std::ceil(cfg.T * static_cast<double>(n_a)));
    }
    if (K == 0) throw std::invalid_argument("horizon must be positive");
    return K;
}

void check_budget(std::uint64_t K, std::uint64_t trials, std::uint64_t max_steps) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    const long double total =
        static_cast<long double>(K) * static_cast<long double>(trials);
    if (total > static_cast<long double>(max_steps)) {
        std::ostringstream os;
        os << "step budget exceeded: horizon " << K << " x trials " << trials
           << " > " << max_steps
           << "; reduce trials or T, or raise max_steps";
        throw BudgetError(os.str());
    }
}

} // namespace

double effective_truncated_second_moment(
    const jumps::JumpSpec& spec, const std::optional<PerturbationSpec>& pert,
    double x) {
    if (!pert) return jumps::truncated_second_moment(spec, x);
    if (x <= 0.0) return 0.0;
    const double b = pert->amplitude;
    if (pert->law == PerturbationSpec::Law::Rademacher) {
        return 0.5 * (shifted_truncated_m2(spec, x, -b) +
                      shifted_truncated_m2(spec, x, b));
    }
    const auto f = [&](double y) { return shifted_truncated_m2(spec, x, y) / (2.0 * b); };
    return quad::integrate(f, -b, b, 1e-9, "perturbed truncated moment");
}

double effective_support_radius_min(const jumps::JumpSpec& spec,
                                    const std::optional<PerturbationSpec>& pert) {
    const double base = spec.support_radius_min();
    if (!pert) return base;
    return std::max(0.0, base - pert->amplitude);
}

std::uint64_t effective_n_of_a(const WalkConfig& cfg) {
    if (!(cfg.a > 0.0)) throw std::invalid_argument("n(a) needs a > 0");
    if (!cfg.perturbation) return normalize::n_of_a(cfg.spec, cfg.a);
    return normalize::n_of_a_fn(
        [&](double u) {
            return effective_truncated_second_moment(cfg.spec, cfg.perturbation, u);
        },
        effective_support_radius_min(cfg.spec, cfg.perturbation), cfg.a);
}

double effective_c_scale(const WalkConfig& cfg) {
    const auto n = effective_n_of_a(cfg);
    if (!cfg.perturbation)
        return normalize::c_of_n(cfg.spec, static_cast<double>(n));
    return normalize::c_of_n_fn(
        [&](double u) {
            return effective_truncated_second_moment(cfg.spec, cfg.perturbation, u);
        },
        effective_support_radius_min(cfg.spec, cfg.perturbation),
        static_cast<double>(n));
}

MaxSampleBatch simulate_max_batch(const WalkConfig& cfg) {
    if (!(cfg.T >= 1.0) && cfg.horizon_override == 0)
        throw std::invalid_argument("horizon multiplier T must be >= 1");
    const std::uint64_t n_a = (cfg.a > 0.0) ? effective_n_of_a(cfg) : 0;
    const std::uint64_t K = checked_horizon(cfg, n_a);
    check_budget(K, cfg.trials, cfg.max_steps);

    MaxSampleBatch batch;
    batch.samples.resize(cfg.trials);
    batch.argmax_ratios.resize(cfg.trials);
    batch.horizon = K;
    batch.n_a = n_a;
    batch.a = cfg.a;
    batch.seed = cfg.seed;
    batch.c_scale = (cfg.a > 0.0) ? effective_c_scale(cfg) : 0.0;
    batch.certificate = (cfg.a > 0.0) ? truncation_certificate(cfg) : 0.0;

    const double ratio_denom =
        n_a > 0 ? static_cast<double>(n_a) : static_cast<double>(K);
    const auto chunks = make_chunks(cfg.trials, (cfg.trials + 255) / 256);
    for_each_trial(chunks, cfg.seed, cfg.workers,
                   [&](const ChunkRange&, std::uint64_t p, Rng& rng) {
        Kahan s;
        double best = 0.0;
        std::uint64_t best_k = 0;
        for (std::uint64_t k = 1; k <= K; ++k) {
            double inc = jumps::sample(cfg.spec, rng) - cfg.a;
            if (cfg.perturbation) inc += cfg.perturbation->sample(rng);
            s.add(inc);
            if (s.sum > best) {
                best = s.sum;
                best_k = k;
            }
        }
        batch.samples[p] = best;
        batch.argmax_ratios[p] = static_cast<double>(best_k) / ratio_denom;
    });
    return batch;
}

double truncation_certificate(const WalkConfig& cfg) {
    if (!(cfg.a > 0.0))
        throw std::invalid_argument("truncation_certificate needs a > 0");
    const double n = static_cast<double>(effective_n_of_a(cfg));
    const double base = cfg.a * n * cfg.T;
    double sum = 0.0;
    double prev_term = std::numeric_limits<double>::infinity();
    int rising = 0;
    for (int j = 0; j < 4000; ++j) {
        const double x = std::ldexp(base, j); // 2^j a n T
        const double v =
            effective_truncated_second_moment(cfg.spec, cfg.perturbation, x);
        const double term = std::ldexp(n * cfg.T, j + 1) * v / (x * x);
        sum += term;
        if (term < 1e-12) return sum;
        if (term > prev_term) {
            if (++rising > 8)
                throw NumericError(
                    "truncation certificate diverges; V is inconsistent with "
                    "a stable index above 1");
        } else {
            rising = 0;
        }
        prev_term = term;
    }
    throw NumericError("truncation certificate did not converge");
}

std::vector<ProbeResult> truncation_tail_sweep(const WalkConfig& cfg,
                                               const std::vector<double>& T_lo_list,
                                               double T_hi) {
    if (T_lo_list.empty()) throw std::invalid_argument("empty T_lo grid");
    for (double t : T_lo_list)
        if (!(t >= 1.0 && t < T_hi))
            throw std::invalid_argument("need 1 <= T_lo < T_hi");
    const std::uint64_t n_a = effective_n_of_a(cfg);
    const std::uint64_t K =
        static_cast<std::uint64_t>(std::ceil(T_hi * static_cast<double>(n_a)));
    check_budget(K, cfg.trials, cfg.max_steps);

    std::vector<std::uint64_t> starts;
    starts.reserve(T_lo_list.size());
    for (double t : T_lo_list)
        starts.push_back(static_cast<std::uint64_t>(
            std::ceil(t * static_cast<double>(n_a))));

    const auto chunks = make_chunks(cfg.trials, 64);
    std::vector<std::vector<std::uint64_t>> hits(
        chunks.size(), std::vector<std::uint64_t>(starts.size(), 0));
    for_each_trial(chunks, cfg.seed, cfg.workers,
                   [&](const ChunkRange& ch, std::uint64_t, Rng& rng) {
        auto& local = hits[ch.index];
        Kahan s;
        // window maximum for each lower cut, filled as the path streams
        std::vector<double> wmax(starts.size(),
                                 -std::numeric_limits<double>::infinity());
        for (std::uint64_t k = 1; k <= K; ++k) {
            double inc = jumps::sample(cfg.spec, rng) - cfg.a;
            if (cfg.perturbation) inc += cfg.perturbation->sample(rng);
            s.add(inc);
            for (std::size_t i = 0; i < starts.size(); ++i)
                if (k >= starts[i] && s.sum > wmax[i]) wmax[i] = s.sum;
        }
        for (std::size_t i = 0; i < starts.size(); ++i)
            if (wmax[i] >= 0.0) ++local[i];
    });

    std::vector<ProbeResult> out(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        std::uint64_t total = 0;
        for (const auto& h : hits) total += h[i];
        const double n = static_cast<double>(cfg.trials);
        const double p = static_cast<double>(total) / n;
        out[i] = {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / n), cfg.trials};
    }
    return out;
}

ProbeResult truncation_tail_probe(const WalkConfig& cfg, double T_lo, double T_hi) {
    return truncation_tail_sweep(cfg, {T_lo}, T_hi).front();
}

double gim1_sigma_star(double beta, double shift) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (!(shift > 0.0))
        throw std::invalid_argument(
            "shift must be positive: at shift = 0 the maximum is infinite");
    const double c = shift * beta;
    double sigma = 0.5;
    for (int i = 0; i < 200000; ++i) {
        const double next = std::exp(-c * (1.0 - sigma)) / (2.0 - sigma);
        if (std::fabs(next - sigma) < 1e-14) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    const double residual = sigma * (2.0 - sigma) - std::exp(-c * (1.0 - sigma));
    if (std::fabs(residual) > 1e-12)
        throw NumericError("gim1_sigma_star: fixed point did not converge");
    return sigma;
}

double exact_gim1_tail(double beta, double shift, double x) {
    if (x < 0.0) throw std::invalid_argument("x must be >= 0");
    const double sigma = gim1_sigma_star(beta, shift);
    return sigma * std::exp(-beta * (1.0 - sigma) * x);
}

} // namespace walkmax::walksim
