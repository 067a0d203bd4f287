#include "walkmax/spitzer.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "walkmax/errors.hpp"
#include "walkmax/limit_laws.hpp"
#include "walkmax/normalize.hpp"
#include "walkmax/parallel.hpp"
#include "walkmax/quadrature.hpp"
#include "walkmax/stats.hpp"
#include "walkmax/walksim.hpp"

namespace walkmax::spitzer {

namespace {

struct ChunkAcc {
    std::vector<double> tsum;   // [mu*K + (k-1)], contribution 1 - e^{-mu s/c}
    std::vector<double> tsumsq;
    std::vector<double> possum; // undrifted positive part per k
    std::vector<double> ps1, ps2;   // per-mu path-sum moments
};

limits::SkewTag skew_of(const jumps::JumpSpec& spec) {
    switch (spec.kind) {
        case jumps::JumpKind::OneSidedParetoCentered:
            return limits::SkewTag::SpectrallyPositive;
        default:
            return limits::SkewTag::Symmetric;
    }
}

void validate(const SpitzerConfig& cfg) {
    if (cfg.mu_grid.empty()) throw std::invalid_argument("mu grid must be nonempty");
    for (double mu : cfg.mu_grid)
        if (mu < 0.0) throw std::invalid_argument("mu must be >= 0");
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0 && cfg.T > 1.0))
        throw std::invalid_argument("split parameters must satisfy 0 < eps < 1 < T");
    if (!(cfg.a > 0.0)) throw std::invalid_argument("drift a must be positive");
    if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
}

} // namespace

SpitzerResult estimate_terms(const SpitzerConfig& cfg) {
    validate(cfg);
    const std::uint64_t n_a = normalize::n_of_a(cfg.spec, cfg.a);
    const double c_na = normalize::c_of_n(cfg.spec, static_cast<double>(n_a));
    const std::uint64_t K = static_cast<std::uint64_t>(
        std::ceil(cfg.T * static_cast<double>(n_a)));
    const long double total =
        static_cast<long double>(K) * static_cast<long double>(cfg.trials);
    if (total > static_cast<long double>(cfg.max_steps)) {
        std::ostringstream os;
        os << "step budget exceeded: horizon " << K << " x trials " << cfg.trials
           << " > " << cfg.max_steps << "; reduce trials or T, or raise max_steps";
        throw BudgetError(os.str());
    }

    const std::size_t M = cfg.mu_grid.size();
    const auto chunks = make_chunks(cfg.trials, 32);
    std::vector<ChunkAcc> acc(chunks.size());
    for (auto& a : acc) {
        a.tsum.assign(M * K, 0.0);
        a.tsumsq.assign(M * K, 0.0);
        a.possum.assign(K, 0.0);
        a.ps1.assign(M, 0.0);
        a.ps2.assign(M, 0.0);
    }

    for_each_trial(chunks, cfg.seed, cfg.workers,
                   [&](const ChunkRange& ch, std::uint64_t, Rng& rng) {
        auto& a = acc[ch.index];
        std::vector<double> path_sum(M, 0.0);
        Kahan s;
        for (std::uint64_t k = 1; k <= K; ++k) {
            s.add(jumps::sample(cfg.spec, rng) - cfg.a);
            const double drifted = s.sum;
            if (drifted > 0.0) {
                const double z = drifted / c_na;
                for (std::size_t m = 0; m < M; ++m) {
                    const double w = 1.0 - std::exp(-cfg.mu_grid[m] * z);
                    a.tsum[m * K + (k - 1)] += w;
                    a.tsumsq[m * K + (k - 1)] += w * w;
                    path_sum[m] += w / static_cast<double>(k);
                }
            }
            const double undrifted = drifted + static_cast<double>(k) * cfg.a;
            if (undrifted > 0.0) a.possum[k - 1] += undrifted;
        }
        for (std::size_t m = 0; m < M; ++m) {
            a.ps1[m] += path_sum[m];
            a.ps2[m] += path_sum[m] * path_sum[m];
        }
    });

    SpitzerResult res;
    res.horizon = K;
    res.n_a = n_a;
    res.a = cfg.a;
    res.c_na = c_na;
    res.eps = cfg.eps;
    res.T = cfg.T;
    res.trials = cfg.trials;
    res.mu_grid = cfg.mu_grid;
    res.t_k.assign(M, std::vector<double>(K, 0.0));
    res.t_k_se.assign(M, std::vector<double>(K, 0.0));
    res.pos_part.assign(K, 0.0);

    const double N = static_cast<double>(cfg.trials);
    for (std::size_t m = 0; m < M; ++m) {
        for (std::uint64_t k = 1; k <= K; ++k) {
            double sum = 0.0, sumsq = 0.0;
            for (const auto& a : acc) {
                sum += a.tsum[m * K + (k - 1)];
                sumsq += a.tsumsq[m * K + (k - 1)];
            }
            const double mean_w = sum / N;
            const double var_w =
                cfg.trials > 1
                    ? std::max(0.0, sumsq / N - mean_w * mean_w) / (N - 1.0)
                    : 0.0;
            res.t_k[m][k - 1] = mean_w / static_cast<double>(k);
            res.t_k_se[m][k - 1] = std::sqrt(var_w) / static_cast<double>(k);
        }
    }
    for (std::uint64_t k = 1; k <= K; ++k) {
        double sum = 0.0;
        for (const auto& a : acc) sum += a.possum[k - 1];
        res.pos_part[k - 1] = sum / N;
    }

    res.sum_t.assign(M, 0.0);
    res.sum_se.assign(M, 0.0);
    res.laplace.assign(M, 0.0);
    res.laplace_se.assign(M, 0.0);
    res.sigma1.assign(M, 0.0);
    res.sigma2.assign(M, 0.0);
    const std::uint64_t k_eps = static_cast<std::uint64_t>(
        std::floor(cfg.eps * static_cast<double>(n_a)));
    for (std::size_t m = 0; m < M; ++m) {
        double s1 = 0.0, s2 = 0.0;
        for (const auto& a : acc) {
            s1 += a.ps1[m];
            s2 += a.ps2[m];
        }
        const double mean = s1 / N;
        const double var =
            cfg.trials > 1 ? std::max(0.0, s2 / N - mean * mean) / (N - 1.0) : 0.0;
        res.sum_t[m] = mean;
        res.sum_se[m] = std::sqrt(var);
        res.laplace[m] = std::exp(-mean);
        res.laplace_se[m] = res.laplace[m] * res.sum_se[m];
        for (std::uint64_t k = 1; k <= K; ++k) {
            if (k <= k_eps)
                res.sigma1[m] += res.t_k[m][k - 1];
            else
                res.sigma2[m] += res.t_k[m][k - 1];
        }
    }
    res.sigma3_bound = sigma3_bound(cfg.spec, cfg.a, n_a, cfg.T);
    return res;
}

double sigma1_at(const SpitzerResult& result, std::size_t mu_index, double eps) {
    if (mu_index >= result.mu_grid.size())
        throw std::invalid_argument("mu index out of range");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    const std::uint64_t k_eps = static_cast<std::uint64_t>(
        std::floor(eps * static_cast<double>(result.n_a)));
    double sum = 0.0;
    for (std::uint64_t k = 1; k <= std::min(k_eps, result.horizon); ++k)
        sum += result.t_k[mu_index][k - 1];
    return sum;
}

std::vector<SigmaSplit> sigma_split_report(const SpitzerResult& result) {
    std::vector<SigmaSplit> out;
    for (std::size_t m = 0; m < result.mu_grid.size(); ++m)
        out.push_back({result.mu_grid[m], result.sigma1[m], result.sigma2[m],
                       result.sigma3_bound});
    return out;
}

double sigma3_bound(const jumps::JumpSpec& spec, double a, std::uint64_t n_a,
                    double T) {
    const double lo = T * a * static_cast<double>(n_a);
    const auto f = [&](double x) {
        return jumps::truncated_second_moment(spec, x) / (x * x);
    };
    return quad::integrate_to_infinity(f, lo, 1e-10, "sigma3 tail integral") / a;
}

std::vector<IntegrandComparePoint> integrand_limit_compare(
    const SpitzerConfig& cfg, const std::vector<double>& v_points,
    std::uint64_t limit_trials) {
    const auto result = estimate_terms(cfg);
    const double alpha = cfg.spec.alpha();
    const auto skew = skew_of(cfg.spec);

    std::vector<IntegrandComparePoint> rows;
    Rng rng(cfg.seed ^ 0x1b5a6e3c9f2d4781ULL);
    for (std::size_t m = 0; m < cfg.mu_grid.size(); ++m) {
        const double mu = cfg.mu_grid[m];
        for (double v : v_points) {
            const std::uint64_t k = static_cast<std::uint64_t>(
                std::llround(v * static_cast<double>(result.n_a)));
            if (k < 1 || k > result.horizon)
                throw std::invalid_argument("v point falls outside the horizon");
            IntegrandComparePoint row;
            row.mu = mu;
            row.v = v;
            row.k = k;
            const double n = static_cast<double>(result.n_a);
            row.scaled_term = n * result.t_k[m][k - 1];
            row.scaled_term_se = n * result.t_k_se[m][k - 1];

            const double scale = std::pow(v, 1.0 / alpha);
            double sum = 0.0, sumsq = 0.0;
            for (std::uint64_t s = 0; s < limit_trials; ++s) {
                const double excur =
                    scale * limits::stable_increment(alpha, skew, rng) - v;
                const double val = excur > 0.0 ? 1.0 - std::exp(-mu * excur) : 0.0;
                sum += val;
                sumsq += val * val;
            }
            const double nn = static_cast<double>(limit_trials);
            const double mean = sum / nn;
            const double var = std::max(0.0, sumsq / nn - mean * mean) / (nn - 1.0);
            row.limit_integrand = mean / v;
            row.limit_se = std::sqrt(var) / v;
            row.diff = row.scaled_term - row.limit_integrand;
            row.joint_se = std::sqrt(row.scaled_term_se * row.scaled_term_se +
                                     row.limit_se * row.limit_se);
            rows.push_back(row);
        }
    }
    return rows;
}

WhReport wiener_hopf_consistency(const SpitzerConfig& cfg) {
    const auto result = estimate_terms(cfg);

    walksim::WalkConfig wc;
    wc.spec = cfg.spec;
    wc.a = cfg.a;
    wc.T = cfg.T;
    wc.trials = cfg.trials;
    wc.seed = cfg.seed ^ 0x9e3779b97f4a7c15ULL; // independent stream, same horizon
    wc.max_steps = cfg.max_steps;
    wc.workers = cfg.workers;
    const auto batch = walksim::simulate_max_batch(wc);
    const stats::EmpiricalDistribution direct(batch.samples, "wh_direct");

    WhReport report;
    report.sigma3 = result.sigma3_bound;
    report.certificate = batch.certificate;
    report.pass = true;
    for (std::size_t m = 0; m < cfg.mu_grid.size(); ++m) {
        WhMuRow row;
        row.mu = cfg.mu_grid[m];
        row.series_side = result.laplace[m];
        row.series_se = result.laplace_se[m];
        const auto [est, se] =
            stats::empirical_laplace(direct, row.mu / result.c_na);
        row.direct_side = est;
        row.direct_se = se;
        row.diff = row.series_side - row.direct_side;
        row.budget = 3.0 * std::sqrt(row.series_se * row.series_se +
                                     row.direct_se * row.direct_se) +
                     report.sigma3 + report.certificate;
        row.pass = std::fabs(row.diff) <= row.budget;
        report.pass = report.pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace walkmax::spitzer
