#pragma once
// Rendering of spectral results: color-coded HTML of the corpus, CSV exports
// of word coordinates, and the end-to-end analysis pipeline.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "spectext/corpus.hpp"
#include "spectext/counts.hpp"
#include "spectext/error.hpp"
#include "spectext/format.hpp"
#include "spectext/spectral.hpp"

namespace spectext {

enum class ColorMode { squared_coordinate, membership };

inline std::string to_string(ColorMode m) { return m == ColorMode::membership ? "membership" : "squared_coordinate"; }

inline ColorMode parse_color_mode(std::string_view s) {
    if (s == "squared_coordinate" || s == "squared") return ColorMode::squared_coordinate;
    if (s == "membership") return ColorMode::membership;
    throw std::invalid_argument("unknown color mode: " + std::string(s));
}

struct RenderConfig {
    std::array<int, 3> axes{2, 3, 4};  // R, G, B
    ColorMode color_mode = ColorMode::squared_coordinate;
    std::array<int, 2> scatter_axes{2, 3};
    std::size_t top_n = 40;

    /// Axis 1 is the trivial class, so color axes start at 2 and must differ.
    void validate() const {
        for (int a : axes)
            if (a < 2) throw std::invalid_argument("color axes must be >= 2");
        if (axes[0] == axes[1] || axes[0] == axes[2] || axes[1] == axes[2])
            throw std::invalid_argument("color axes must be distinct");
        for (int a : scatter_axes)
            if (a < 1) throw std::invalid_argument("scatter axes must be >= 1");
        if (top_n < 1) throw std::invalid_argument("top_n must be >= 1");
    }

    int max_axis() const {
        return std::max({axes[0], axes[1], axes[2], scatter_axes[0], scatter_axes[1]});
    }
};

using Rgb = std::array<std::uint8_t, 3>;

inline void require_axis(const SpectralResult& result, int axis) {
    if (axis < 1 || axis > result.axes())
        throw AxisOutOfRange("axis " + std::to_string(axis) + " requested but only " + std::to_string(result.axes()) +
                             " eigenpairs are available");
}

/// Per-word background color. Channel c is round(255 v_i / max_j v_j) with
/// v = y_k^2 (squared_coordinate) or g y_k^2 (membership) for the channel's
/// axis k; an all-zero channel stays 0.
inline std::vector<Rgb> word_colors(const SpectralResult& result, const RenderConfig& config) {
    config.validate();
    for (int a : config.axes) require_axis(result, a);
    const auto nt = result.eigenvectors.rows();
    std::vector<Rgb> colors(static_cast<std::size_t>(nt), Rgb{0, 0, 0});
    for (std::size_t c = 0; c < 3; ++c) {
        Eigen::VectorXd v = result.eigenvectors.col(config.axes[c] - 1).cwiseAbs2();
        if (config.color_mode == ColorMode::membership) v = v.cwiseProduct(result.degrees);
        const double peak = v.maxCoeff();
        if (!(peak > 0.0)) continue;
        for (Eigen::Index i = 0; i < nt; ++i) {
            const double level = std::clamp(std::round(255.0 * v[i] / peak), 0.0, 255.0);
            colors[static_cast<std::size_t>(i)][c] = static_cast<std::uint8_t>(level);
        }
    }
    return colors;
}

/// WCAG relative luminance of an sRGB color, in [0,1].
inline double relative_luminance(const Rgb& rgb) {
    auto linear = [](std::uint8_t v) {
        const double c = v / 255.0;
        return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    };
    return 0.2126 * linear(rgb[0]) + 0.7152 * linear(rgb[1]) + 0.0722 * linear(rgb[2]);
}

inline std::string hex_color(const Rgb& rgb) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s = "#";
    for (auto v : rgb) {
        s += digits[v >> 4];
        s += digits[v & 0xf];
    }
    return s;
}

/// Self-contained HTML: every token of every text in original order on a
/// background colored from its word's coordinates. Text between tokens is
/// reproduced uncolored. Tokens without a vocabulary entry (pruned under
/// break_chain) are wrapped but left uncolored.
inline std::string render_html(std::span<const std::string> texts, const Vocabulary& vocabulary,
                               const SpectralResult& result, const RenderConfig& config,
                               const TokenizationConfig& tokens) {
    const auto colors = word_colors(result, config);
    if (colors.size() != vocabulary.size()) throw std::invalid_argument("spectral result does not match vocabulary");

    std::ostringstream html;
    html << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>spectext</title>\n<style>\n"
            "body{font-family:Georgia,serif;line-height:1.9;margin:2em;max-width:60em}\n"
            ".text{white-space:pre-wrap;border-top:1px solid #999;padding-top:1em;margin-bottom:2em}\n"
            ".w{padding:0 1px;border-radius:2px}\n"
            ".legend{font-family:sans-serif;font-size:90%}\n"
            "</style>\n</head>\n<body>\n";
    html << "<p class=\"legend\">R = axis " << config.axes[0] << ", G = axis " << config.axes[1] << ", B = axis "
         << config.axes[2] << " (" << to_string(config.color_mode) << ")</p>\n";

    for (std::size_t t = 0; t < texts.size(); ++t) {
        const std::string& text = texts[t];
        html << "<div class=\"text\" id=\"text-" << t << "\">";
        std::size_t cursor = 0;
        for (const auto& tok : tokenize_spans(text, tokens)) {
            html << html_escape(std::string_view(text).substr(cursor, tok.offset - cursor));
            const auto surface = std::string_view(text).substr(tok.offset, tok.length);
            auto id = vocabulary.find(tok.text);
            if (!id && vocabulary.unk) id = vocabulary.unk;
            if (id) {
                const auto& rgb = colors[*id];
                html << "<span class=\"w\" data-id=\"" << *id << "\" style=\"background:" << hex_color(rgb)
                     << ";color:" << (relative_luminance(rgb) > 0.5 ? "#000" : "#fff") << "\">";
            } else {
                html << "<span class=\"w\">";
            }
            html << html_escape(surface) << "</span>";
            cursor = tok.offset + tok.length;
        }
        html << html_escape(std::string_view(text).substr(cursor)) << "</div>\n";
    }
    html << "</body>\n</html>\n";
    return html.str();
}

/// Coordinates of the top_n most frequent words (ties lexicographic) on the
/// two scatter axes: "word,count,y_a,y_b".
inline std::string export_scatter(const SpectralResult& result, const Vocabulary& vocabulary,
                                  const RenderConfig& config) {
    config.validate();
    const auto [a, b] = config.scatter_axes;
    require_axis(result, a);
    require_axis(result, b);
    std::ostringstream csv;
    csv << "word,count,y_" << a << ",y_" << b << '\n';
    for (auto id : top_frequent_ids(vocabulary, config.top_n)) {
        csv << csv_field(vocabulary.types[id]) << ',' << vocabulary.counts[id] << ','
            << format_double(result.eigenvectors(id, a - 1)) << ',' << format_double(result.eigenvectors(id, b - 1))
            << '\n';
    }
    return csv.str();
}

/// Every word with its coordinates and memberships on the given axes.
inline std::string export_coordinates(const SpectralResult& result, const Vocabulary& vocabulary,
                                      std::span<const int> axes) {
    for (int a : axes) require_axis(result, a);
    const auto table = membership(result);
    std::ostringstream csv;
    csv << "word,count";
    for (int a : axes) csv << ",y_" << a;
    for (int a : axes) csv << ",membership_" << a;
    csv << '\n';
    for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        csv << csv_field(vocabulary.types[i]) << ',' << vocabulary.counts[i];
        for (int a : axes) csv << ',' << format_double(result.eigenvectors(row, a - 1));
        for (int a : axes) csv << ',' << format_double(table.entries(row, a - 1));
        csv << '\n';
    }
    return csv.str();
}

inline std::string export_eigenvalues(const SpectralResult& result) {
    std::ostringstream csv;
    csv << "axis,eigenvalue\n";
    for (Eigen::Index k = 0; k < result.axes(); ++k) csv << (k + 1) << ',' << format_double(result.eigenvalues[k]) << '\n';
    return csv.str();
}

struct PipelineConfig {
    std::filesystem::path manifest;
    std::filesystem::path out_dir = "spectext-out";
    TokenizationConfig tokens;
    std::vector<int> ks{1};
    BoundaryPolicy boundary = BoundaryPolicy::truncate;
    RenderConfig render;
};

struct PipelineResult {
    TokenizedCorpus corpus;
    TransitionMatrix transitions;
    SpectralResult spectrum;
    MembershipTable memberships;
    std::string html;
    std::string scatter_csv;
    std::string coordinates_csv;
    std::string eigenvalues_csv;
    std::string report;
};

inline std::string token_mode_name(TokenMode m) {
    return m == TokenMode::extended_tokens ? "extended_tokens" : "alphabetic_only";
}

inline std::string pruning_name(PruningPolicy p) { return p == PruningPolicy::break_chain ? "break_chain" : "map_to_unk"; }

/// corpus -> counts -> spectral -> render, all in memory.
inline PipelineResult analyze_texts(std::span<const std::string> texts, const PipelineConfig& config,
                                    const std::vector<std::string>& source_notes = {}) {
    config.render.validate();
    PipelineResult out;
    out.corpus = build_corpus(texts, config.tokens);
    const auto nt = static_cast<Eigen::Index>(out.corpus.vocabulary.size());
    const int needed = config.render.max_axis();
    if (needed > nt)
        throw AxisOutOfRange("axis " + std::to_string(needed) + " requested but the vocabulary has only " +
                             std::to_string(nt) + " words");

    out.transitions = transition_matrix(out.corpus, config.ks, config.boundary);
    out.spectrum = spectral_decompose(out.transitions, needed);
    out.memberships = membership(out.spectrum);
    out.html = render_html(texts, out.corpus.vocabulary, out.spectrum, config.render, config.tokens);
    out.scatter_csv = export_scatter(out.spectrum, out.corpus.vocabulary, config.render);
    out.coordinates_csv = export_coordinates(out.spectrum, out.corpus.vocabulary, config.render.axes);
    out.eigenvalues_csv = export_eigenvalues(out.spectrum);

    std::ostringstream r;
    const auto& rc = config.render;
    r << "spectext analysis report\n";
    r << "manifest: " << config.manifest.string() << '\n';
    r << "texts: " << out.corpus.text_count << '\n';
    r << "chains: " << out.corpus.sequences.size() << '\n';
    r << "tokens: " << out.corpus.total_tokens() << '\n';
    r << "vocabulary: " << out.corpus.vocabulary.size() << '\n';
    r << "token_mode: " << token_mode_name(config.tokens.mode) << '\n';
    r << "case_fold: " << (config.tokens.case_fold ? "true" : "false") << '\n';
    r << "min_count: " << config.tokens.min_count << '\n';
    r << "pruning: " << pruning_name(config.tokens.pruning) << '\n';
    r << "distances: " << join_ints(config.ks) << '\n';
    r << "boundary: " << to_string(config.boundary) << '\n';
    r << "isolated_words: " << out.transitions.self_loops.size() << '\n';
    r << "color_axes: " << join_ints(rc.axes) << '\n';
    r << "color_mode: " << to_string(rc.color_mode) << '\n';
    r << "scatter_axes: " << join_ints(rc.scatter_axes) << '\n';
    r << "top_n: " << rc.top_n << '\n';
    r << "eigenvalues:\n";
    for (Eigen::Index k = 0; k < out.spectrum.axes(); ++k)
        r << "  " << (k + 1) << ' ' << format_double(out.spectrum.eigenvalues[k]) << '\n';
    r << "generalized_residual: " << format_double(generalized_residual(out.spectrum, out.transitions.weights, out.transitions.degree)) << '\n';
    if (!source_notes.empty()) {
        r << "source_metadata:\n";
        for (const auto& note : source_notes) r << "  " << note << '\n';
    }
    out.report = r.str();
    return out;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
    if (!f) throw Error("failed writing " + path.string());
}

}  // namespace detail

/// Output file names inside the pipeline's out_dir.
inline constexpr std::array<std::string_view, 5> kPipelineOutputs = {"corpus.html", "scatter.csv", "words.csv",
                                                                      "eigenvalues.csv", "report.txt"};

/// Reads the manifest, runs the analysis and writes the outputs. A
/// "<text>.meta" file next to an input (written by the generator) is echoed
/// into the report.
inline PipelineResult run_pipeline(const PipelineConfig& config) {
    const auto entries = read_manifest(config.manifest);
    if (entries.empty()) throw EmptyCorpus("manifest lists no files: " + config.manifest.string());
    const auto texts = load_texts(config.manifest);

    std::vector<std::string> notes;
    for (const auto& e : entries) {
        auto meta = e.path;
        meta += ".meta";
        if (std::filesystem::exists(meta)) {
            auto content = read_text_file(meta);
            while (!content.empty() && (content.back() == '\n' || content.back() == '\r')) content.pop_back();
            std::replace(content.begin(), content.end(), '\n', ' ');
            notes.push_back(e.path.filename().string() + ": " + content);
        }
    }

    PipelineResult out;
    try {
        out = analyze_texts(texts, config, notes);
    } catch (const EmptyCorpus& e) {
        throw EmptyCorpus(config.manifest.string() + ": " + e.what());
    }

    std::filesystem::create_directories(config.out_dir);
    detail::write_file(config.out_dir / "corpus.html", out.html);
    detail::write_file(config.out_dir / "scatter.csv", out.scatter_csv);
    detail::write_file(config.out_dir / "words.csv", out.coordinates_csv);
    detail::write_file(config.out_dir / "eigenvalues.csv", out.eigenvalues_csv);
    detail::write_file(config.out_dir / "report.txt", out.report);
    return out;
}

}  // namespace spectext
