#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ontodraft::eval {

struct LengthMismatchError : std::runtime_error {
    LengthMismatchError(size_t a, size_t b)
        : std::runtime_error("kappa: rater vectors differ in length (" + std::to_string(a) +
                             " vs " + std::to_string(b) + ")") {}
};

/// Cohen's kappa between two equal-length label vectors:
/// kappa = (p_o - p_e) / (1 - p_e), with p_e from the raters' marginals.
/// When p_e == 1 both raters are constant on the same label, so 1 is returned.
inline double cohens_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.size() != b.size()) throw LengthMismatchError(a.size(), b.size());
    if (a.empty()) throw LengthMismatchError(0, 0);

    const double n = static_cast<double>(a.size());
    size_t agree = 0;
    std::map<std::string, size_t> ca, cb;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) ++agree;
        ++ca[a[i]];
        ++cb[b[i]];
    }
    const double p_o = static_cast<double>(agree) / n;
    double p_e = 0;
    for (const auto& [label, count] : ca) {
        auto it = cb.find(label);
        if (it == cb.end()) continue;
        p_e += (static_cast<double>(count) / n) * (static_cast<double>(it->second) / n);
    }
    if (p_e >= 1.0) return 1.0;
    return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace ontodraft::eval
