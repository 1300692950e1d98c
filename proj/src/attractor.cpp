#include "fractaldim/attractor.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fractaldim/errors.hpp"

namespace fractaldim {

namespace {

constexpr long long kLeafBudget = 1LL << 24;  // deterministic enumeration
constexpr int kChaosBurnIn = 100;

void emit_point(std::vector<double>& coords, const Vec& p) {
    coords.insert(coords.end(), p.data(), p.data() + p.size());
}

// Depth-first enumeration of branch words; (acc_lin, acc_off) carries the
// composition of the branches chosen so far (outermost first).
void enumerate_cylinders(const SystemSpec& spec, int depth, const Mat& acc_lin, const Vec& acc_off,
                         const Vec& center, std::vector<double>& coords) {
    if (depth == 0) {
        emit_point(coords, acc_lin * center + acc_off);
        return;
    }
    for (const auto& br : spec.branches) {
        enumerate_cylinders(spec, depth - 1, Mat(acc_lin * br.linear),
                            Vec(acc_lin * br.translation + acc_off), center, coords);
    }
}

// Occupied-cell count of the origin-anchored half-open grid with cell side r.
// Cell keys are packed positionally into 128 bits and counted by sorting, so
// the result is deterministic and collision-free.
long long count_cells(const PointCloud& cloud, double r) {
    const int d = cloud.dim;
    const long long cells = static_cast<long long>(std::ceil(1.0 / r));
    if (d * std::log2(static_cast<double>(cells)) > 120.0)
        throw Error(errc::invalid_params, "scale too fine for the cell-key encoding");

    std::vector<unsigned __int128> keys;
    keys.reserve(static_cast<size_t>(cloud.sample_count));
    for (long long i = 0; i < cloud.sample_count; ++i) {
        unsigned __int128 key = 0;
        for (int k = 0; k < d; ++k) {
            long long idx = static_cast<long long>(std::floor(cloud.at(i, k) / r));
            idx = std::clamp(idx, 0LL, cells - 1);  // points at 1.0 belong to the last cell
            key = key * static_cast<unsigned __int128>(cells) + static_cast<unsigned __int128>(idx);
        }
        keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    return static_cast<long long>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

}  // namespace

PointCloud generate(const SystemSpec& spec, CloudMode mode, long long depth_or_samples,
                    std::uint64_t seed) {
    derivative_stats(spec);  // shape/contractivity gate
    const int d = spec.ambient_dim;
    const Vec center = Vec::Constant(d, 0.5);

    PointCloud cloud;
    cloud.dim = d;
    cloud.mode = mode;
    cloud.seed = seed;

    if (mode == CloudMode::deterministic_cylinders) {
        const int depth = static_cast<int>(depth_or_samples);
        if (depth < 0) throw Error(errc::invalid_params, "depth must be non-negative");
        long long leaves = 1;
        for (int k = 0; k < depth; ++k) {
            leaves *= spec.branch_count();
            if (leaves > kLeafBudget)
                throw Error(errc::budget_exceeded, "word enumeration at depth " +
                                                       std::to_string(depth) +
                                                       " exceeds the leaf budget");
        }
        cloud.depth = depth;
        cloud.coords.reserve(static_cast<size_t>(leaves * d));
        enumerate_cylinders(spec, depth, Mat::Identity(d, d), Vec::Zero(d), center, cloud.coords);
        cloud.sample_count = leaves;
        return cloud;
    }

    const long long samples = depth_or_samples;
    if (samples < 1) throw Error(errc::invalid_params, "sample count must be positive");
    cloud.coords.reserve(static_cast<size_t>(samples * d));
    std::mt19937_64 rng(seed);
    const auto s = static_cast<std::uint64_t>(spec.branch_count());
    Vec x = center;
    for (long long i = 0; i < kChaosBurnIn + samples; ++i) {
        const auto& br = spec.branches[static_cast<size_t>(rng() % s)];
        x = br.linear * x + br.translation;
        if (i >= kChaosBurnIn) emit_point(cloud.coords, x);
    }
    cloud.sample_count = samples;
    return cloud;
}

GridEstimate box_count(const PointCloud& cloud, const std::vector<double>& scales,
                       bool drop_two_coarsest) {
    if (scales.size() < 3 || (drop_two_coarsest && scales.size() < 5))
        throw Error(errc::degenerate_scales, "need at least 3 scales (5 when dropping two)");
    for (size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0 && scales[i] <= 1.0))
            throw Error(errc::invalid_params, "scales must lie in (0, 1]");
        if (i > 0 && !(scales[i] < scales[i - 1]))
            throw Error(errc::invalid_params, "scales must be strictly descending");
    }
    if (cloud.sample_count < 1) throw Error(errc::invalid_params, "empty point cloud");

    GridEstimate est;
    est.scales = scales;
    est.counts.reserve(scales.size());
    for (double r : scales) est.counts.push_back(count_cells(cloud, r));

    std::vector<double> xs, ys;
    for (size_t i = drop_two_coarsest ? 2 : 0; i < scales.size(); ++i) {
        xs.push_back(std::log(1.0 / scales[i]));
        ys.push_back(std::log(static_cast<double>(est.counts[i])));
    }
    const LineFit fit = fit_line(xs, ys);
    est.slope = fit.slope;
    est.slope_stderr = fit.slope_stderr;
    est.r_squared = fit.r_squared;
    return est;
}

SigmaEstimate estimate_sigma(const SystemSpec& spec, double epsilon,
                             const std::vector<int>& track_word, const std::vector<int>& depths,
                             long long cloud_samples, std::uint64_t seed) {
    const auto stats = derivative_stats(spec);
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw Error(errc::invalid_params, "epsilon must lie in (0, 1)");
    if (depths.size() < 2)
        throw Error(errc::degenerate_scales, "need at least two depths for the decay fit");
    for (int n : depths)
        if (n < 1) throw Error(errc::invalid_params, "depths must be positive");
    if (track_word.empty()) throw Error(errc::invalid_params, "track word must be non-empty");
    for (int b : track_word)
        if (b < 0 || b >= spec.branch_count())
            throw Error(errc::invalid_params, "track word references a missing branch");

    const int d = spec.ambient_dim;
    const PointCloud cloud = generate(spec, CloudMode::chaos_game, cloud_samples, seed);
    const double omega = unit_ball_volume(d);

    SigmaEstimate est;
    std::vector<double> xs, ys;
    for (int n : depths) {
        const double r = std::pow(epsilon, n);

        // Cylinder of the (cyclically extended) tracked word at depth n.
        Mat lin = Mat::Identity(d, d);
        Vec off = Vec::Zero(d);
        double log_jf_prod = 0.0;  // log prod 1/Jg along the word
        for (int k = 0; k < n; ++k) {
            const int b = track_word[static_cast<size_t>(k) % track_word.size()];
            const auto& br = spec.branches[static_cast<size_t>(b)];
            off += lin * br.translation;
            lin = lin * br.linear;
            log_jf_prod += std::log(1.0 / stats.per_branch_jacobian[static_cast<size_t>(b)]);
        }

        const Eigen::PartialPivLU<Mat> lu(lin);
        bool hit = false;
        Vec p(d), u(d);
        for (long long i = 0; i < cloud.sample_count && !hit; ++i) {
            for (int k = 0; k < d; ++k) p[k] = cloud.at(i, k);
            u = lu.solve(p - off);
            hit = (u.array() >= -1e-9).all() && (u.array() <= 1.0 + 1e-9).all();
        }
        if (!hit)
            throw Error(errc::empty_intersection,
                        "no sample point lands in the tracked cylinder at depth " +
                            std::to_string(n));

        const long long occupied = count_cells(cloud, r);
        const double log_fraction = std::log(static_cast<double>(occupied)) + std::log(omega) +
                                    d * std::log(r / 2.0) - log_jf_prod;
        const double fraction = std::min(1.0, std::exp(log_fraction));
        est.per_depth.emplace_back(n, fraction);
        xs.push_back(static_cast<double>(n));
        ys.push_back(-std::log(fraction));
    }
    est.rate = fit_line(xs, ys).slope;
    return est;
}

ReferenceDimension reference_dimension(RefFamily family, double beta, double tau) {
    if (family == RefFamily::bedford_mcmullen)
        throw Error(errc::undefined,
                    "no closed form is wired for this family; use the two-corner family or the "
                    "numeric estimators");

    if (!(tau > 0.0 && tau < beta && beta < 1.0))
        throw Error(errc::invalid_params, "need 0 < tau < beta < 1");
    if (tau == 0.5 || beta == 0.5)
        throw Error(errc::invalid_params, "tau and beta must differ from 1/2");

    ReferenceDimension ref;
    if (beta < 0.5) {
        ref.value = std::log(2.0) / std::log(1.0 / beta);
        ref.note = "columns dominate: dimension log 2 / log(1/beta), exact";
    } else {
        ref.value = std::log(2.0 * beta / tau) / std::log(1.0 / tau);
        ref.pisot_caveat = true;
        ref.note = "overlapping-height regime: box dimension log(2 beta/tau) / log(1/tau); the "
                   "Hausdorff value matches off an algebraic exceptional set";
    }
    return ref;
}

}  // namespace fractaldim
