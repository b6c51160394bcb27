#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontodraft/dataset/case.hpp"
#include "ontodraft/rdf/ontology.hpp"
#include "ontodraft/rdf/turtle_writer.hpp"
#include "ontodraft/support/io.hpp"

namespace ontodraft::prompt {

enum class Technique { MemorylessCqByCq, Ontogenia };

inline const char* to_string(Technique t) {
    return t == Technique::MemorylessCqByCq ? "MemorylessCQbyCQ" : "Ontogenia";
}

inline std::optional<Technique> technique_from_string(std::string_view s) {
    std::string lower;
    for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "memoryless" || lower == "memorylesscqbycq") return Technique::MemorylessCqByCq;
    if (lower == "ontogenia") return Technique::Ontogenia;
    return std::nullopt;
}

struct TemplateError : std::runtime_error {
    explicit TemplateError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Prompt {
    Technique technique;
    std::string cq_id;
    std::string text;
    size_t char_length = 0;
    std::vector<std::string> sections;
};

struct OdpPattern {
    std::string name;
    std::string description;
    std::string turtle;
};

struct OdpCatalog {
    std::vector<OdpPattern> patterns;

    /// Read every .ttl in the directory (sorted by filename). The first
    /// comment line doubles as the pattern description.
    static OdpCatalog load_dir(const std::filesystem::path& dir) {
        namespace fs = std::filesystem;
        OdpCatalog catalog;
        if (!fs::is_directory(dir))
            throw TemplateError("ODP directory not found: " + dir.string());
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".ttl") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            OdpPattern p;
            p.name = f.stem().string();
            p.turtle = support::read_text(f);
            size_t pos = p.turtle.find('#');
            if (pos != std::string::npos && (pos == 0 || p.turtle[pos - 1] == '\n')) {
                size_t eol = p.turtle.find('\n', pos);
                p.description = p.turtle.substr(pos + 1, eol == std::string::npos
                                                             ? std::string::npos
                                                             : eol - pos - 1);
                while (!p.description.empty() && p.description.front() == ' ')
                    p.description.erase(p.description.begin());
            }
            catalog.patterns.push_back(std::move(p));
        }
        return catalog;
    }
};

namespace detail {

struct Section {
    std::string label;
    std::string text;
};

inline std::string rstrip(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.pop_back();
    return s;
}

inline void replace_all(std::string& text, std::string_view token, std::string_view value) {
    size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
}

/// Drop '##' template comment lines; they are loader metadata, not prompt text.
inline std::string strip_template_comments(const std::string& raw) {
    std::string out;
    size_t pos = 0;
    while (pos <= raw.size()) {
        size_t eol = raw.find('\n', pos);
        std::string_view line(raw.data() + pos,
                              (eol == std::string::npos ? raw.size() : eol) - pos);
        bool comment = line.starts_with("##");
        if (!comment) {
            out.append(line);
            if (eol != std::string::npos) out += '\n';
        }
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return out;
}

inline void check_placeholders(const std::string& text, const std::string& file,
                               const std::set<std::string>& allowed) {
    size_t pos = 0;
    while ((pos = text.find("{{", pos)) != std::string::npos) {
        size_t end = text.find("}}", pos);
        if (end == std::string::npos)
            throw TemplateError(file + ": unterminated '{{' placeholder");
        std::string name = text.substr(pos + 2, end - pos - 2);
        if (!allowed.count(name))
            throw TemplateError(file + ": unknown placeholder '{{" + name + "}}'");
        pos = end + 2;
    }
}

}  // namespace detail

/// Prompt texts are data: one file per section under
/// templates/{memoryless,ontogenia}/, with {{story}}, {{cq}}, {{odps}} and
/// {{prior}} placeholders. The section structure itself is the contract the
/// pipelines assert; the wording is freely editable.
class PromptTemplates {
public:
    static constexpr const char* kMemorylessFiles[6] = {
        "01_persona.txt",      "02_syntax_primer.txt", "03_story.txt",
        "04_cq.txt",           "05_pitfalls.txt",      "06_output_format.txt"};
    static constexpr const char* kOntogeniaFiles[8] = {
        "01_persona.txt", "02_metacognitive_stages.txt",
        "03_story.txt",   "04_cq.txt",
        "05_odps.txt",    "06_prior.txt",
        "07_enrichment.txt", "08_output_format.txt"};

    static PromptTemplates load(const std::filesystem::path& dir) {
        PromptTemplates t;
        t.memoryless_ = load_technique(dir / "memoryless", kMemorylessFiles,
                                       std::size(kMemorylessFiles));
        t.ontogenia_ = load_technique(dir / "ontogenia", kOntogeniaFiles,
                                      std::size(kOntogeniaFiles));
        require_placeholder(t.memoryless_, "story", "{{story}}", "memoryless");
        require_placeholder(t.memoryless_, "cq", "{{cq}}", "memoryless");
        require_placeholder(t.ontogenia_, "story", "{{story}}", "ontogenia");
        require_placeholder(t.ontogenia_, "cq", "{{cq}}", "ontogenia");
        require_placeholder(t.ontogenia_, "odps", "{{odps}}", "ontogenia");
        require_placeholder(t.ontogenia_, "prior", "{{prior}}", "ontogenia");
        t.collect_declared_namespaces();
        return t;
    }

    /// Sections: persona, syntax primer, story, the one CQ, common pitfalls,
    /// output-format directive. No prior output, no other CQ ever appears.
    Prompt build_memoryless(const dataset::UserStory& story,
                            const dataset::CompetencyQuestion& cq) const {
        Prompt p;
        p.technique = Technique::MemorylessCqByCq;
        p.cq_id = cq.id;
        std::vector<std::string> parts;
        for (const auto& section : memoryless_) {
            std::string text = section.text;
            detail::replace_all(text, "{{story}}", story.text);
            detail::replace_all(text, "{{cq}}", cq.text);
            p.sections.push_back(section.label);
            parts.push_back(detail::rstrip(std::move(text)));
        }
        p.text = join(parts);
        p.char_length = p.text.size();
        return p;
    }

    /// Sections: persona, the five metacognitive stages, story, CQ, ODP
    /// snippets, prior ontology (only when non-empty), enrichment directive,
    /// output-format directive.
    Prompt build_ontogenia(const dataset::UserStory& story, const dataset::CompetencyQuestion& cq,
                           const OdpCatalog& odps, const rdf::Ontology* prior) const {
        Prompt p;
        p.technique = Technique::Ontogenia;
        p.cq_id = cq.id;
        const bool with_prior = prior != nullptr && !prior->triples.empty();
        std::vector<std::string> parts;
        for (const auto& section : ontogenia_) {
            if (section.label == "prior" && !with_prior) continue;
            std::string text = section.text;
            detail::replace_all(text, "{{story}}", story.text);
            detail::replace_all(text, "{{cq}}", cq.text);
            if (section.label == "odps") detail::replace_all(text, "{{odps}}", render_odps(odps));
            if (section.label == "prior")
                detail::replace_all(text, "{{prior}}", rdf::serialize_turtle(*prior));
            p.sections.push_back(section.label);
            parts.push_back(detail::rstrip(std::move(text)));
        }
        p.text = join(parts);
        p.char_length = p.text.size();
        return p;
    }

    /// Namespaces declared by @prefix lines anywhere in the template texts.
    /// The pipeline treats these as non-throwaway when normalizing namespaces.
    const std::set<std::string>& declared_namespaces() const { return declared_namespaces_; }

private:
    std::vector<detail::Section> memoryless_;
    std::vector<detail::Section> ontogenia_;
    std::set<std::string> declared_namespaces_;

    static std::vector<detail::Section> load_technique(const std::filesystem::path& dir,
                                                       const char* const* files, size_t n) {
        std::vector<detail::Section> sections;
        static const std::set<std::string> allowed = {"story", "cq", "odps", "prior"};
        for (size_t i = 0; i < n; ++i) {
            auto path = dir / files[i];
            auto raw = support::try_read_text(path);
            if (!raw) throw TemplateError("missing template file: " + path.string());
            std::string text = detail::strip_template_comments(*raw);
            detail::check_placeholders(text, path.string(), allowed);
            std::string label = files[i];
            label = label.substr(0, label.size() - 4);  // .txt
            size_t us = label.find('_');
            if (us != std::string::npos) label = label.substr(us + 1);
            sections.push_back({label, std::move(text)});
        }
        return sections;
    }

    static void require_placeholder(const std::vector<detail::Section>& sections,
                                    const std::string& label, std::string_view token,
                                    const std::string& technique) {
        for (const auto& s : sections) {
            if (s.label != label) continue;
            if (s.text.find(token) == std::string::npos)
                throw TemplateError(technique + "/" + label + " template is missing " +
                                    std::string(token));
            return;
        }
        throw TemplateError(technique + ": no '" + label + "' section");
    }

    static std::string render_odps(const OdpCatalog& odps) {
        std::vector<std::string> parts;
        for (const auto& p : odps.patterns) {
            std::string block = "Pattern: " + p.name;
            if (!p.description.empty()) block += "\n" + p.description;
            block += "\n" + detail::rstrip(p.turtle);
            parts.push_back(std::move(block));
        }
        return join(parts);
    }

    static std::string join(const std::vector<std::string>& parts) {
        std::string out;
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) out += "\n\n";
            out += parts[i];
        }
        return out;
    }

    void collect_declared_namespaces() {
        auto scan = [this](const std::vector<detail::Section>& sections) {
            for (const auto& s : sections) {
                size_t pos = 0;
                while ((pos = s.text.find("@prefix", pos)) != std::string::npos) {
                    size_t lt = s.text.find('<', pos);
                    size_t gt = lt == std::string::npos ? std::string::npos : s.text.find('>', lt);
                    if (gt == std::string::npos) break;
                    declared_namespaces_.insert(s.text.substr(lt + 1, gt - lt - 1));
                    pos = gt;
                }
            }
        };
        scan(memoryless_);
        scan(ontogenia_);
        declared_namespaces_.insert(std::string(rdf::vocab::RDF_NS));
        declared_namespaces_.insert(std::string(rdf::vocab::RDFS_NS));
        declared_namespaces_.insert(std::string(rdf::vocab::OWL_NS));
        declared_namespaces_.insert(std::string(rdf::vocab::XSD_NS));
    }
};

/// How much shorter the memoryless prompt is relative to the Ontogenia prompt
/// with the accumulated prior, for the k-th CQ (1-based; meaningful for k >= 2
/// where the prior is non-empty): 1 - len(memoryless) / len(ontogenia).
inline double context_reduction(const PromptTemplates& templates, const dataset::Case& c, size_t k,
                                const rdf::Ontology& prior, const OdpCatalog& odps) {
    if (k < 1 || k > c.cqs.size())
        throw std::out_of_range("context_reduction: cq index out of range");
    const auto& cq = c.cqs[k - 1];
    auto memoryless = templates.build_memoryless(c.story, cq);
    auto ontogenia = templates.build_ontogenia(c.story, cq, odps, &prior);
    return 1.0 - static_cast<double>(memoryless.char_length) /
                     static_cast<double>(ontogenia.char_length);
}

}  // namespace ontodraft::prompt
