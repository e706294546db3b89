#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "zwise/fuzzy.hpp"
#include "zwise/kde.hpp"

namespace zwise {

// Seven-tier confidence taxonomy, in tie-break (ascending) order.
inline constexpr std::array<std::string_view, 7> kConfidenceLabels = {
    "Perhaps", "Possibly", "Probably", "Supposedly", "Expectedly", "Decisively", "Certainly"};

// Boundaries t0..t8 for the confidence taxonomy; t0 and t8 pin the unit
// interval, t1..t7 are the calibrated valley positions.
class ConfidenceThresholds {
public:
    explicit ConfidenceThresholds(const std::array<double, 9>& t);
    static ConfidenceThresholds from_inner(const std::array<double, 7>& t1_to_t7);

    // The constants calibrated on the study sample (bandwidth 0.12).
    static ConfidenceThresholds published();

    const std::array<double, 9>& values() const { return t_; }
    std::array<double, 7> inner() const;

private:
    std::array<double, 9> t_;
};

// Perhaps is a left shoulder over [0,t1]->t2, Certainly a right shoulder
// t6->[t7,1], all five intermediates are triangles on consecutive boundaries.
// Adjacent functions share their linear crossovers, so degrees at any point
// sum to 1 across the taxonomy.
LinguisticVariable make_confidence_variable(const ConfidenceThresholds& th);

// B = (r-1)/9, mapping the 1..10 rating scale onto [0,1].
double normalize_rating(double r);

// Arithmetic mean of a participant's normalized ratings.
double participant_confidence(std::span<const double> normalized_ratings);

FuzzyVector fuzzify_confidence(double b, const ConfidenceThresholds& th);
std::string confidence_label(double b, const ConfidenceThresholds& th);

struct ConfidenceCalibration {
    ConfidenceThresholds thresholds;
    DensityCurve curve;
};

// Density estimate over the pooled normalized ratings, then one threshold per
// valley. The taxonomy needs exactly 7; any other valley count raises
// CalibrationMismatch and the caller falls back to published().
ConfidenceCalibration calibrate_confidence_thresholds(std::span<const double> pooled_b,
                                                      double bandwidth = 0.12,
                                                      std::size_t grid_points = 512);

} // namespace zwise
