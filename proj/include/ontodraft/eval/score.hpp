#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontodraft/eval/coverage.hpp"

namespace ontodraft::eval {

struct EmptyInputError : std::runtime_error {
    explicit EmptyInputError(const std::string& what) : std::runtime_error(what) {}
};

struct CategoryScore {
    double strict = 0;
    double relaxed = 0;
    size_t n = 0;
    size_t modelled = 0;
    size_t minor = 0;
};

struct Scores {
    double strict = 0;   // |Modelled| / n
    double relaxed = 0;  // (|Modelled| + |MinorIssue|) / n
    size_t total = 0;
    size_t modelled = 0;
    size_t minor = 0;
    size_t not_modelled = 0;
    std::map<std::string, CategoryScore> per_category;
};

/// Proportion of modelled CQs, with and without counting minor issues, plus
/// the same breakdown per CQ category.
inline Scores score(const std::vector<CqVerdict>& verdicts,
                    const std::map<std::string, std::string>& categories = {}) {
    if (verdicts.empty()) throw EmptyInputError("score: no verdicts");
    Scores s;
    s.total = verdicts.size();
    for (const auto& v : verdicts) {
        if (v.status == CqStatus::Modelled) ++s.modelled;
        else if (v.status == CqStatus::MinorIssue) ++s.minor;
        else ++s.not_modelled;

        auto cat = categories.find(v.cq_id);
        if (cat != categories.end()) {
            auto& c = s.per_category[cat->second];
            ++c.n;
            if (v.status == CqStatus::Modelled) ++c.modelled;
            else if (v.status == CqStatus::MinorIssue) ++c.minor;
        }
    }
    s.strict = static_cast<double>(s.modelled) / static_cast<double>(s.total);
    s.relaxed = static_cast<double>(s.modelled + s.minor) / static_cast<double>(s.total);
    for (auto& [name, c] : s.per_category) {
        c.strict = static_cast<double>(c.modelled) / static_cast<double>(c.n);
        c.relaxed = static_cast<double>(c.modelled + c.minor) / static_cast<double>(c.n);
    }
    return s;
}

}  // namespace ontodraft::eval
