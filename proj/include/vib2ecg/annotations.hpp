#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vib2ecg/common.hpp"

namespace vib2ecg {

// Ground-truth beat landmarks, in acquisition-clock ticks.
// Per beat: r_peak < s1_onset < t_end < s2_onset < next r_peak.
struct BeatAnnotations {
    std::vector<Tick> r_peaks;
    std::vector<Tick> t_ends;
    std::vector<Tick> s1_onsets;
    std::vector<Tick> s2_onsets;
};

inline void validate(const BeatAnnotations& a) {
    const std::size_t n = a.r_peaks.size();
    require(a.t_ends.size() == n && a.s1_onsets.size() == n && a.s2_onsets.size() == n,
            "annotations: per-beat lists must have equal length");
    for (std::size_t i = 0; i < n; ++i) {
        require(a.r_peaks[i] < a.s1_onsets[i], "annotations: r_peak must precede s1 onset");
        require(a.s1_onsets[i] < a.t_ends[i], "annotations: s1 onset must precede t end");
        require(a.t_ends[i] < a.s2_onsets[i], "annotations: t end must precede s2 onset");
        if (i + 1 < n) {
            require(a.s2_onsets[i] < a.r_peaks[i + 1],
                    "annotations: s2 onset must precede the next r_peak");
        }
    }
}

inline nlohmann::json to_json(const BeatAnnotations& a) {
    return nlohmann::json{{"r_peaks", a.r_peaks},
                          {"t_ends", a.t_ends},
                          {"s1_onsets", a.s1_onsets},
                          {"s2_onsets", a.s2_onsets}};
}

inline BeatAnnotations annotations_from_json(const nlohmann::json& j) {
    BeatAnnotations a;
    j.at("r_peaks").get_to(a.r_peaks);
    j.at("t_ends").get_to(a.t_ends);
    j.at("s1_onsets").get_to(a.s1_onsets);
    j.at("s2_onsets").get_to(a.s2_onsets);
    return a;
}

}  // namespace vib2ecg
