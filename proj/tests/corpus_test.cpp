#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "spectext/corpus.hpp"
#include "support.hpp"

using namespace spectext;
using spectext::testing::corpus_of;

namespace {

TokenizationConfig extended(bool fold) {
    TokenizationConfig c;
    c.mode = TokenMode::extended_tokens;
    c.case_fold = fold;
    return c;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST(Tokenize, AlphabeticRunsFolded) {
    EXPECT_EQ(tokenize("GA BU, BU!", {}), (Strings{"ga", "bu", "bu"}));
}

TEST(Tokenize, ExtendedKeepsPunctuationAndCase) {
    EXPECT_EQ(tokenize("GA BU, BU!", extended(false)), (Strings{"GA", "BU", ",", "BU", "!"}));
}

TEST(Tokenize, EmptyInput) {
    EXPECT_TRUE(tokenize("", {}).empty());
    EXPECT_TRUE(tokenize("  ,;  123 ", {}).empty());
}

TEST(Tokenize, ApostropheAndHyphenSeparate) {
    EXPECT_EQ(tokenize("l'eau peut-être", {}), (Strings{"l", "eau", "peut", "être"}));
}

TEST(Tokenize, UnicodeLettersAndFolding) {
    EXPECT_EQ(tokenize("Ékri an kréyòl ÇA", {}), (Strings{"ékri", "an", "kréyòl", "ça"}));
    EXPECT_EQ(tokenize("Ελληνικά мир", {}), (Strings{"ελληνικά", "мир"}));
}

TEST(Tokenize, ExtendedDigitRunsAndPunctuationSingles) {
    EXPECT_EQ(tokenize("a12b...1999", extended(true)), (Strings{"a", "12", "b", ".", ".", ".", "1999"}));
    // digits are separators in alphabetic mode
    EXPECT_EQ(tokenize("a12b", {}), (Strings{"a", "b"}));
}

TEST(Tokenize, InvalidUtf8IsASeparator) {
    const std::string raw = std::string("ab") + char(0xff) + "cd";
    EXPECT_EQ(tokenize(raw, {}), (Strings{"ab", "cd"}));
}

TEST(Tokenize, SpansLocateSurfaceForms) {
    const std::string raw = "  Élan, vital";
    const auto spans = tokenize_spans(raw, {});
    ASSERT_EQ(spans.size(), 2u);
    EXPECT_EQ(raw.substr(spans[0].offset, spans[0].length), "Élan");
    EXPECT_EQ(spans[0].text, "élan");
    EXPECT_EQ(raw.substr(spans[1].offset, spans[1].length), "vital");
}

TEST(Tokenize, RetokenizingJoinedTokensIsIdempotent) {
    std::mt19937_64 rng(11);
    const std::string alphabet[] = {"Ça", "va", "l'", "eau", "!", "12", "...", "é", "ZO", " ", "\n", "-", "mèt"};
    for (const auto& config : {TokenizationConfig{}, extended(true), extended(false)}) {
        for (int trial = 0; trial < 50; ++trial) {
            std::string raw;
            for (int n = 0; n < 30; ++n) raw += alphabet[rng() % std::size(alphabet)];
            const auto once = tokenize(raw, config);
            std::string joined;
            for (const auto& t : once) joined += t + " ";
            EXPECT_EQ(tokenize(joined, config), once) << raw;
        }
    }
}

TEST(BuildCorpus, HandEnumeratedVocabulary) {
    const auto c = corpus_of({"a b a b a"});
    ASSERT_EQ(c.vocabulary.types, (Strings{"a", "b"}));
    EXPECT_EQ(c.vocabulary.counts, (std::vector<std::uint64_t>{3, 2}));
    ASSERT_EQ(c.sequences.size(), 1u);
    EXPECT_EQ(c.sequences[0], (std::vector<WordId>{0, 1, 0, 1, 0}));
    EXPECT_FALSE(c.vocabulary.unk);
    c.validate();
}

TEST(BuildCorpus, TextsStaySeparateChains) {
    const auto c = corpus_of({"a b", "c"});
    ASSERT_EQ(c.sequences.size(), 2u);
    EXPECT_EQ(c.sequences[0], (std::vector<WordId>{0, 1}));
    EXPECT_EQ(c.sequences[1], (std::vector<WordId>{2}));
    EXPECT_EQ(c.origin, (std::vector<std::size_t>{0, 1}));
}

TEST(BuildCorpus, PruneToUnknown) {
    TokenizationConfig cfg;
    cfg.min_count = 2;
    const auto c = corpus_of({"a a b"}, cfg);
    EXPECT_EQ(c.vocabulary.types, (Strings{"a", std::string(kUnknownWord)}));
    EXPECT_EQ(c.vocabulary.counts, (std::vector<std::uint64_t>{2, 1}));
    ASSERT_TRUE(c.vocabulary.unk);
    EXPECT_EQ(*c.vocabulary.unk, 1u);
    c.validate();
}

TEST(BuildCorpus, PruneBreaksChains) {
    TokenizationConfig cfg;
    cfg.min_count = 2;
    cfg.pruning = PruningPolicy::break_chain;
    const auto c = corpus_of({"a a x b b y a", "z"}, cfg);
    EXPECT_EQ(c.vocabulary.types, (Strings{"a", "b"}));
    ASSERT_EQ(c.sequences.size(), 3u);
    EXPECT_EQ(c.sequences[0], (std::vector<WordId>{0, 0}));
    EXPECT_EQ(c.sequences[1], (std::vector<WordId>{1, 1}));
    EXPECT_EQ(c.sequences[2], (std::vector<WordId>{0}));
    EXPECT_EQ(c.origin, (std::vector<std::size_t>{0, 0, 0}));
    EXPECT_EQ(c.text_count, 2u);
    c.validate();
}

TEST(BuildCorpus, EmptyCorpusErrors) {
    EXPECT_THROW(corpus_of({}), EmptyCorpus);
    EXPECT_THROW(corpus_of({"", "123 ,"}), EmptyCorpus);
    TokenizationConfig cfg;
    cfg.min_count = 5;
    cfg.pruning = PruningPolicy::break_chain;
    EXPECT_THROW(corpus_of({"a b c"}, cfg), EmptyCorpus);
}

TEST(BuildCorpus, RejectsZeroMinCount) {
    TokenizationConfig cfg;
    cfg.min_count = 0;
    EXPECT_THROW(corpus_of({"a"}, cfg), std::invalid_argument);
}

TEST(BuildCorpus, CountsMatchTokenTotalsOnRandomCorpora) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto texts = spectext::testing::random_texts(rng);
        for (std::size_t min_count : {1, 2, 4}) {
            for (auto policy : {PruningPolicy::map_to_unk, PruningPolicy::break_chain}) {
                TokenizationConfig cfg;
                cfg.min_count = min_count;
                cfg.pruning = policy;
                TokenizedCorpus c;
                try {
                    c = build_corpus(texts, cfg);
                } catch (const EmptyCorpus&) {
                    continue;
                }
                c.validate();
                std::size_t emitted = 0, dropped = 0;
                std::map<std::string, std::size_t> freq;
                for (const auto& t : texts)
                    for (const auto& tok : tokenize(t, cfg)) ++freq[tok];
                for (const auto& [w, n] : freq) {
                    emitted += n;
                    if (n < min_count && policy == PruningPolicy::break_chain) dropped += n;
                }
                EXPECT_EQ(c.vocabulary.total(), emitted - dropped);
                EXPECT_EQ(c.total_tokens(), emitted - dropped);
            }
        }
    }
}

TEST(Vocabulary, FindAndTopFrequent) {
    const auto c = corpus_of({"b a c a b a d"});
    EXPECT_EQ(c.vocabulary.find("a"), WordId{1});
    EXPECT_FALSE(c.vocabulary.find("zz"));
    // a:3, b:2, then c and d tie at 1 and sort lexicographically
    const auto top = top_frequent_ids(c.vocabulary, 10);
    ASSERT_EQ(top.size(), 4u);
    EXPECT_EQ(c.vocabulary.types[top[0]], "a");
    EXPECT_EQ(c.vocabulary.types[top[1]], "b");
    EXPECT_EQ(c.vocabulary.types[top[2]], "c");
    EXPECT_EQ(c.vocabulary.types[top[3]], "d");
}

TEST(Manifest, RelativePathsCommentsAndErrors) {
    const auto dir = std::filesystem::temp_directory_path() / "spectext_manifest_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "one.txt") << "a b";
    std::ofstream(dir / "manifest.txt") << "# corpus\none.txt\n\n  missing.txt  \n";
    const auto entries = read_manifest(dir / "manifest.txt");
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_EQ(entries[0].path, (dir / "one.txt").lexically_normal());
    EXPECT_EQ(entries[1].line, 4);
    try {
        load_texts(dir / "manifest.txt");
        FAIL() << "expected an error for the missing file";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("manifest.txt:4"), std::string::npos) << e.what();
    }
    std::filesystem::remove_all(dir);
}
