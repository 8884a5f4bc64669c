// spectext command line: analyze, generate, evaluate, paradigm.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectext/spectext.hpp"

namespace fs = std::filesystem;
using namespace spectext;

namespace {

struct CorpusOptions {
    std::string manifest;
    std::vector<int> ks{1};
    std::string boundary = "truncate";
    std::string token_mode = "alpha";
    bool case_fold = true;
    std::size_t min_count = 1;
    std::string pruning = "unk";
    std::string out_dir = "spectext-out";

    TokenizationConfig tokens() const {
        TokenizationConfig t;
        t.mode = token_mode == "extended" ? TokenMode::extended_tokens : TokenMode::alphabetic_only;
        t.case_fold = case_fold;
        t.min_count = min_count;
        t.pruning = pruning == "break" ? PruningPolicy::break_chain : PruningPolicy::map_to_unk;
        return t;
    }
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& o, bool with_ks = true) {
    cmd->add_option("manifest", o.manifest, "File listing one text path per line")->required()->check(CLI::ExistingFile);
    if (with_ks)
        cmd->add_option("--k", o.ks, "Neighbor distance(s), comma separated; several are averaged")
            ->delimiter(',')
            ->capture_default_str();
    cmd->add_option("--boundary", o.boundary, "Text edge handling")
        ->check(CLI::IsMember({"truncate", "wrap"}))
        ->capture_default_str();
    cmd->add_option("--token-mode", o.token_mode, "alpha: letter runs; extended: also digit runs and punctuation")
        ->check(CLI::IsMember({"alpha", "extended"}))
        ->capture_default_str();
    cmd->add_option("--case-fold", o.case_fold, "Lowercase tokens")->capture_default_str();
    cmd->add_option("--min-count", o.min_count, "Prune words rarer than this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--pruning", o.pruning, "unk: map pruned words to <unk>; break: cut the chain")
        ->check(CLI::IsMember({"unk", "break"}))
        ->capture_default_str();
    cmd->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
}

RenderConfig make_render(const std::vector<int>& axes, const std::vector<int>& scatter, const std::string& mode,
                         std::size_t top_n) {
    if (axes.size() != 3) throw std::invalid_argument("--axes takes exactly three axis indices");
    if (scatter.size() != 2) throw std::invalid_argument("--scatter-axes takes exactly two axis indices");
    RenderConfig r;
    r.axes = {axes[0], axes[1], axes[2]};
    r.scatter_axes = {scatter[0], scatter[1]};
    r.color_mode = parse_color_mode(mode);
    r.top_n = top_n;
    r.validate();
    return r;
}

void write_or_throw(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis of word transitions: language and discourse boundaries in raw text"};
    app.set_config("--config", "", "key=value configuration file (keys as option names, [subcommand] sections)");
    app.require_subcommand(1);

    // analyze
    CorpusOptions analyze_opts;
    std::vector<int> axes{2, 3, 4};
    std::vector<int> scatter_axes{2, 3};
    std::string color_mode = "squared_coordinate";
    std::size_t top_n = 40;
    auto* analyze = app.add_subcommand("analyze", "Manifest -> colored HTML, CSV exports and report");
    add_corpus_options(analyze, analyze_opts);
    analyze->add_option("--axes", axes, "Eigen-axes for the R,G,B channels")->delimiter(',')->capture_default_str();
    analyze->add_option("--scatter-axes", scatter_axes, "Two axes for the scatter export")
        ->delimiter(',')
        ->capture_default_str();
    analyze->add_option("--color-mode", color_mode, "squared_coordinate (y^2) or membership (g*y^2)")
        ->check(CLI::IsMember({"squared_coordinate", "membership"}))
        ->capture_default_str();
    analyze->add_option("--top-n", top_n, "Most frequent words in the scatter export")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // generate
    std::string mix_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> length;
    std::optional<double> cross;
    std::string generate_out = "spectext-corpus";
    auto* generate_cmd = app.add_subcommand("generate", "Mix config -> synthetic corpus, labels and manifest");
    auto* mix_opt = generate_cmd->add_option("mixspec", mix_path, "Chain mix config file")->check(CLI::ExistingFile);
    generate_cmd->add_option("--preset", preset, "Built-in mix instead of a file")
        ->check(CLI::IsMember({"gabu-zomeu"}))
        ->excludes(mix_opt);
    generate_cmd->add_option("--seed", seed, "Override the config seed");
    generate_cmd->add_option("--length", length, "Override the number of tokens")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--cross", cross, "Override the cross-chain probability")->check(CLI::Range(0.0, 1.0));
    generate_cmd->add_option("--out-dir", generate_out, "Output directory")->capture_default_str();

    // evaluate
    CorpusOptions eval_opts;
    std::string labels_path;
    int eval_axis = 2;
    auto* evaluate = app.add_subcommand("evaluate", "Corpus + word labels -> separation report");
    add_corpus_options(evaluate, eval_opts);
    evaluate->add_option("--labels", labels_path, "File of 'word label' lines (-1 = shared word)")
        ->required()
        ->check(CLI::ExistingFile);
    evaluate->add_option("--axis", eval_axis, "Axis whose sign is scored")->check(CLI::Range(2, 1 << 20))->capture_default_str();

    // paradigm
    CorpusOptions para_opts;
    std::vector<int> interval{-1, 1};
    std::size_t para_top_n = 40;
    auto* paradigm = app.add_subcommand("paradigm", "Corpus -> paradigmatic dissimilarity and similarity exports");
    add_corpus_options(paradigm, para_opts, false);
    paradigm->add_option("--interval", interval, "Context positions, uniformly weighted")
        ->delimiter(',')
        ->capture_default_str();
    paradigm->add_option("--top-n", para_top_n, "Restrict to the most frequent words (0 = all)")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) {
            PipelineConfig cfg;
            cfg.manifest = analyze_opts.manifest;
            cfg.out_dir = analyze_opts.out_dir;
            cfg.tokens = analyze_opts.tokens();
            cfg.ks = analyze_opts.ks;
            cfg.boundary = parse_boundary(analyze_opts.boundary);
            cfg.render = make_render(axes, scatter_axes, color_mode, top_n);
            const auto result = run_pipeline(cfg);
            std::cout << result.report;
            std::cout << "outputs written to " << cfg.out_dir.string() << '\n';
        } else if (*generate_cmd) {
            MixSpec mix;
            if (!preset.empty()) {
                mix = gabu_zomeu();
            } else if (!mix_path.empty()) {
                std::ifstream in(mix_path);
                mix = parse_mix_spec(in);
            } else {
                throw std::invalid_argument("generate needs a mix config file or --preset");
            }
            if (seed) mix.seed = *seed;
            if (length) mix.length = *length;
            if (cross) mix.cross_probability = *cross;
            mix.validate();

            const fs::path dir = generate_out;
            fs::create_directories(dir);
            write_or_throw(dir / "corpus.txt", generate(mix) + "\n");
            std::ostringstream meta;
            meta << "generator=" << kRandomSourceId << " seed=" << mix.seed << " length=" << mix.length
                 << " cross_probability=" << format_double(mix.cross_probability) << '\n';
            write_or_throw(dir / "corpus.txt.meta", meta.str());
            std::ostringstream labels;
            write_labels(labels, truth_labels(mix));
            write_or_throw(dir / "labels.txt", labels.str());
            std::ostringstream mix_echo;
            write_mix_spec(mix_echo, mix);
            write_or_throw(dir / "mix.txt", mix_echo.str());
            write_or_throw(dir / "manifest.txt", "corpus.txt\n");
            std::cout << "wrote " << mix.length << " tokens to " << (dir / "corpus.txt").string() << '\n';
        } else if (*evaluate) {
            const auto texts = load_texts(eval_opts.manifest);
            const auto tokens = eval_opts.tokens();
            const auto corpus = build_corpus(texts, tokens);
            const auto tm = transition_matrix(corpus, eval_opts.ks, parse_boundary(eval_opts.boundary));
            const auto nt = static_cast<Eigen::Index>(corpus.vocabulary.size());
            if (eval_axis > nt) throw AxisOutOfRange("axis exceeds vocabulary size");
            const auto result = spectral_decompose(tm, eval_axis);
            std::ifstream in(labels_path);
            const auto truth = normalize_labels(parse_labels(in), tokens);
            const double accuracy = separation_accuracy(result, corpus.vocabulary, truth, eval_axis);
            std::cout << "vocabulary: " << nt << '\n'
                      << "tokens: " << corpus.total_tokens() << '\n'
                      << "axis: " << eval_axis << '\n'
                      << "eigenvalue: " << format_double(result.eigenvalues[eval_axis - 1]) << '\n'
                      << "accuracy: " << format_double(accuracy) << '\n';
        } else if (*paradigm) {
            const auto texts = load_texts(para_opts.manifest);
            const auto corpus = build_corpus(texts, para_opts.tokens());
            auto config = ParadigmaticConfig::uniform(interval, parse_boundary(para_opts.boundary));
            std::vector<WordId> subset;
            if (para_top_n > 0) subset = top_frequent_ids(corpus.vocabulary, para_top_n);
            const auto delta = dissimilarity_matrix(corpus, config, subset);
            const fs::path dir = para_opts.out_dir;
            fs::create_directories(dir);
            std::ostringstream triplets, pairs;
            write_triplets(triplets, delta);
            write_pairs_csv(pairs, delta, corpus.vocabulary);
            write_or_throw(dir / "delta.txt", triplets.str());
            write_or_throw(dir / "pairs.csv", pairs.str());
            std::cout << "words: " << delta.dim() << " of " << corpus.vocabulary.size() << '\n'
                      << "outputs written to " << dir.string() << '\n';
        }
    } catch (const EmptyCorpus& e) {
        std::cerr << "error: empty corpus: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
