#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fractaldim/ifs_model.hpp"

namespace fractaldim {

enum class CloudMode { deterministic_cylinders, chaos_game };

/** A finite sample of the attractor, stored as a flat row-major buffer. */
struct PointCloud {
    int dim = 0;
    CloudMode mode = CloudMode::deterministic_cylinders;
    long long depth = 0;         // word length (deterministic mode)
    long long sample_count = 0;  // retained points
    std::uint64_t seed = 0;      // chaos mode only
    std::vector<double> coords;  // sample_count * dim doubles

    double at(long long i, int k) const { return coords[static_cast<size_t>(i) * dim + k]; }
};

/** Samples the attractor.
 *
 * deterministic_cylinders: images of the cube center under all branch words
 * of length `depth_or_samples` (branch budget 2^24 leaves, BudgetExceeded
 * beyond). chaos_game: `depth_or_samples` iterates of randomly chosen
 * branches from the cube center, uniform branch choice, first 100 iterates
 * discarded; fully reproducible from `seed`. */
PointCloud generate(const SystemSpec& spec, CloudMode mode, long long depth_or_samples,
                    std::uint64_t seed = 0);

struct GridEstimate {
    std::vector<double> scales;        // as supplied, descending
    std::vector<long long> counts;     // occupied cells per scale
    double slope = 0.0;                // fitted log N vs log(1/scale)
    double slope_stderr = 0.0;
    double r_squared = 0.0;
};

/** Counts occupied cells of the origin-anchored half-open grid at each scale
 * and fits the box-counting slope by least squares. Scales must be strictly
 * descending, within (0, 1]; fewer than 3 scales (before or after the
 * optional drop of the two coarsest) is DegenerateScales. */
GridEstimate box_count(const PointCloud& cloud, const std::vector<double>& scales,
                       bool drop_two_coarsest = false);

struct SigmaEstimate {
    std::vector<std::pair<int, double>> per_depth;  // (n, volume fraction in (0,1])
    double rate = 0.0;                              // slope of -log fraction vs n
};

/** Empirical decay rate of the covered-volume fraction of one cylinder.
 *
 * For each depth n the attractor sample is covered by the epsilon^n grid;
 * the fraction compares the total inscribed-ball volume of the occupied
 * cells against the volume of the depth-n cylinder of `track_word` (word
 * entries repeat cyclically beyond its length). The fitted decay rate is the
 * empirical counterpart of the shift interval endpoints. Errors:
 * DegenerateScales (fewer than 2 depths), EmptyIntersection (no sample point
 * lands in the tracked cylinder). */
SigmaEstimate estimate_sigma(const SystemSpec& spec, double epsilon,
                             const std::vector<int>& track_word, const std::vector<int>& depths,
                             long long cloud_samples = (1LL << 22), std::uint64_t seed = 0x5eed);

enum class RefFamily { two_corner_affine, bedford_mcmullen };

struct ReferenceDimension {
    double value = 0.0;
    bool pisot_caveat = false;  // value is the generic/box answer; algebraic
                                // exceptions exist for the Hausdorff dimension
    std::string note;
};

/** Closed-form dimensions for reference families.
 *
 * two_corner_affine: two branches diag(tau, beta) anchored at opposite
 * horizontal edges, 0 < tau < beta < 1 and tau, beta != 1/2. For beta < 1/2
 * the dimension is log 2 / log(1/beta); for beta > 1/2 it is
 * log(2 beta / tau) / log(1/tau) with the Pisot caveat set.
 * bedford_mcmullen: no closed form is wired up here; throws `undefined`. */
ReferenceDimension reference_dimension(RefFamily family, double beta, double tau);

}  // namespace fractaldim
