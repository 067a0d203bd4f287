#include "walkmax/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "walkmax/normalize.hpp"
#include "walkmax/parallel.hpp"

namespace walkmax::inequality {

namespace {
constexpr double kRareBound = 1e-4;
}

InequalityReport maximal_ratio_sweep(const jumps::JumpSpec& spec,
                                     const std::vector<std::uint64_t>& n_grid,
                                     const std::vector<double>& x_grid,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned workers) {
    if (n_grid.empty() || x_grid.empty())
        throw std::invalid_argument("maximal_ratio_sweep: grids must be nonempty");
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    for (double x : x_grid)
        if (!(x > 0.0)) throw std::invalid_argument("x grid must be positive");

    std::vector<std::uint64_t> ns(n_grid);
    std::sort(ns.begin(), ns.end());
    const std::uint64_t n_max = ns.back();

    // one pass per path; record the running max at each checkpoint n
    const auto chunks = make_chunks(trials, 64);
    std::vector<std::vector<std::uint64_t>> counts(
        chunks.size(), std::vector<std::uint64_t>(ns.size() * x_grid.size(), 0));
    for_each_trial(chunks, seed, workers,
                   [&](const ChunkRange& ch, std::uint64_t, Rng& rng) {
        auto& local = counts[ch.index];
        std::vector<double> checkpoint_max(ns.size());
        Kahan s;
        double running = 0.0;
        std::size_t next = 0;
        for (std::uint64_t k = 1; k <= n_max; ++k) {
            s.add(jumps::sample(spec, rng));
            if (s.sum > running) running = s.sum;
            if (next < ns.size() && k == ns[next]) checkpoint_max[next++] = running;
        }
        for (std::size_t i = 0; i < ns.size(); ++i)
            for (std::size_t j = 0; j < x_grid.size(); ++j)
                if (checkpoint_max[i] >= x_grid[j]) ++local[i * x_grid.size() + j];
    });

    InequalityReport report;
    report.spec = spec;
    const double N = static_cast<double>(trials);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        for (std::size_t j = 0; j < x_grid.size(); ++j) {
            std::uint64_t hits = 0;
            for (const auto& c : counts) hits += c[i * x_grid.size() + j];
            SweepCell cell;
            cell.n = ns[i];
            cell.x = x_grid[j];
            cell.p_hat = static_cast<double>(hits) / N;
            cell.stderr_ = std::sqrt(std::max(cell.p_hat * (1.0 - cell.p_hat), 0.0) / N);
            cell.bound = static_cast<double>(ns[i]) *
                         jumps::truncated_second_moment(spec, cell.x) /
                         (cell.x * cell.x);
            cell.rare = cell.bound < kRareBound;
            cell.ratio = (!cell.rare && cell.bound > 0.0) ? cell.p_hat / cell.bound : 0.0;
            if (!cell.rare) report.c_hat = std::max(report.c_hat, cell.ratio);
            report.cells.push_back(cell);
        }
    }
    return report;
}

InequalityReport maximal_ratio_sweep_rel(const jumps::JumpSpec& spec,
                                         const std::vector<std::uint64_t>& n_grid,
                                         const std::vector<double>& theta_grid,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned workers) {
    // the absolute x grid is the union over n of theta * c_n; cells outside
    // their own n are still estimated but only (n, theta c_n) rows survive
    InequalityReport merged;
    merged.spec = spec;
    for (std::uint64_t n : n_grid) {
        const double cn = normalize::c_of_n(spec, static_cast<double>(n));
        std::vector<double> xs;
        xs.reserve(theta_grid.size());
        for (double t : theta_grid) {
            if (!(t > 0.0)) throw std::invalid_argument("theta grid must be positive");
            xs.push_back(t * cn);
        }
        auto rep = maximal_ratio_sweep(spec, {n}, xs, trials, seed, workers);
        for (auto& cell : rep.cells) merged.cells.push_back(cell);
        merged.c_hat = std::max(merged.c_hat, rep.c_hat);
    }
    return merged;
}

KaramataResult karamata_check(const jumps::JumpSpec& spec, double gamma,
                              const std::vector<std::pair<double, double>>& pairs) {
    const double alpha = spec.alpha();
    if (!(gamma > 0.0 && gamma < alpha))
        throw std::invalid_argument("karamata_check: need 0 < gamma < alpha");
    KaramataResult res;
    for (const auto& [x, y] : pairs) {
        if (!(y >= x && x > 0.0))
            throw std::invalid_argument("karamata_check: pairs need y >= x > 0");
        const double vx = jumps::truncated_second_moment(spec, x);
        const double vy = jumps::truncated_second_moment(spec, y);
        if (vx <= 0.0) continue;
        const double ratio = (vy / vx) / std::pow(y / x, 2.0 - alpha + gamma);
        if (ratio > res.max_ratio) {
            res.max_ratio = ratio;
            res.attained_at = {x, y};
        }
    }
    return res;
}

std::vector<PruittComponents> pruitt_component_check(const jumps::JumpSpec& spec,
                                                     const std::vector<double>& x_grid) {
    if (!spec.centered)
        throw std::invalid_argument("pruitt_component_check: centered spec required");
    std::vector<PruittComponents> out;
    for (double x : x_grid) {
        if (!(x > 0.0)) throw std::invalid_argument("x grid must be positive");
        PruittComponents row;
        row.x = x;
        const double v = jumps::truncated_second_moment(spec, x);
        if (v <= 0.0) {
            row.degenerate = true;
        } else {
            row.tail_ratio = jumps::tail_probability(spec, x) * x * x / v;
            row.mean_ratio = jumps::truncated_mean_abs(spec, x) * x / v;
        }
        out.push_back(row);
    }
    return out;
}

} // namespace walkmax::inequality
