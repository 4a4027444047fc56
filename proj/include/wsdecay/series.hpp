#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wsdecay {

/// Momentum window of the chaotic strip; survival is the probability mass
/// with p1 < p < p2.
struct StripBounds {
    double p1 = -5.0;
    double p2 = 7.0;

    void validate() const {
        if (!(p1 < p2)) throw std::invalid_argument("StripBounds: p1 must be < p2");
    }
};

enum class SeriesSource { quantum, classical, rmt };

inline const char* to_string(SeriesSource s) {
    switch (s) {
        case SeriesSource::quantum: return "quantum";
        case SeriesSource::classical: return "classical";
        case SeriesSource::rmt: return "rmt";
    }
    return "unknown";
}

/// Sampled survival probabilities P(t). Times are elapsed simulation time
/// since launch (multiples of T_ω for the simulators).
struct SurvivalSeries {
    std::vector<double> t;
    std::vector<double> p;
    SeriesSource source = SeriesSource::quantum;

    std::size_t size() const { return t.size(); }
};

} // namespace wsdecay
