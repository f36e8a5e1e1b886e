#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "affect/embedding.hpp"
#include "support/helpers.hpp"

using namespace affect;

TEST_CASE("load: plain text entries") {
    testsupport::TempDir tmp("emb");
    auto path = tmp.path() / "vecs.txt";
    testsupport::write_file(path, "girl 1.0 2.0 3.0\nkitchen -0.5 0.25 0\n");
    auto table = EmbeddingTable::load(path.string(), 3, "word2vec");
    CHECK(table.size() == 2);
    CHECK(table.dim() == 3);
    CHECK(table.name() == "word2vec");
    REQUIRE(table.find("girl") != nullptr);
    CHECK((*table.find("girl"))[1] == 2.0f);
    CHECK(table.find("boy") == nullptr);
}

TEST_CASE("load: dimension mismatch names the line") {
    testsupport::TempDir tmp("emb");
    auto path = tmp.path() / "vecs.txt";
    testsupport::write_file(path, "girl 1.0 2.0 3.0\nshort 1.0 2.0\n");
    try {
        EmbeddingTable::load(path.string(), 3);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::data);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("load: unparseable float names the line") {
    testsupport::TempDir tmp("emb");
    auto path = tmp.path() / "vecs.txt";
    testsupport::write_file(path, "girl 1.0 2.0 3.0\nbad 1.0 oops 3.0\n");
    try {
        EmbeddingTable::load(path.string(), 3);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("load: empty file and header line") {
    testsupport::TempDir tmp("emb");
    auto empty = tmp.path() / "empty.txt";
    testsupport::write_file(empty, "");
    CHECK_THROWS_AS(EmbeddingTable::load(empty.string(), 3), Error);

    // a header line whose second field is not a parseable float is skipped
    auto with_header = tmp.path() / "header.txt";
    testsupport::write_file(with_header, "token dims\ngirl 1 2 3\nboy 4 5 6\n");
    auto table = EmbeddingTable::load(with_header.string(), 3);
    CHECK(table.size() == 2);

    // a numeric first line is not a header; it fails the dimension check
    auto numeric = tmp.path() / "numeric.txt";
    testsupport::write_file(numeric, "2 3\ngirl 1 2 3\n");
    CHECK_THROWS_AS(EmbeddingTable::load(numeric.string(), 3), Error);
}

TEST_CASE("load: duplicate words keep the first occurrence") {
    testsupport::TempDir tmp("emb");
    auto path = tmp.path() / "vecs.txt";
    testsupport::write_file(path, "a 1 1 1\nb 2 2 2\na 9 9 9\n");
    auto table = EmbeddingTable::load(path.string(), 3);
    CHECK(table.size() == 2);
    CHECK((*table.find("a"))[0] == 1.0f);
}

TEST_CASE("save/load round-trip within decimal tolerance") {
    testsupport::TempDir tmp("emb");
    Rng rng(5);
    auto table = testsupport::make_table(
        4, {{"alpha", testsupport::random_vector(4, rng)},
            {"beta", testsupport::random_vector(4, rng)},
            {"g", testsupport::random_vector(4, rng)}});
    auto path = tmp.path() / "round.txt";
    table.save(path.string());
    auto reloaded = EmbeddingTable::load(path.string(), 4);
    REQUIRE(reloaded.size() == table.size());
    for (const auto& word : {"alpha", "beta", "g"}) {
        const auto* a = table.find(word);
        const auto* b = reloaded.find(word);
        REQUIRE(a);
        REQUIRE(b);
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs((*a)[i] - (*b)[i]) < 1e-6f);
    }
}

TEST_CASE("compose_oov: truncating concatenation keeps the first character vector") {
    auto table = testsupport::make_table(3, {{"x", {1, 2, 3}}, {"q", {4, 5, 6}}});
    auto v = table.compose_oov("xq");
    CHECK(v == std::vector<float>{1, 2, 3});

    // missing first character contributes a zero block
    auto z = table.compose_oov("z");
    CHECK(z == std::vector<float>{0, 0, 0});
    auto zq = table.compose_oov("zq");
    CHECK(zq == std::vector<float>{0, 0, 0});

    CHECK(table.compose_oov("xq") == table.compose_oov("xq"));
}

TEST_CASE("compose_oov: mean mode averages found characters over word length") {
    auto table = testsupport::make_table(2, {{"a", {1, 1}}, {"b", {3, 5}}});
    auto v = table.compose_oov("ab", OovMode::mean_chars);
    CHECK(v[0] == Catch::Approx(2.0f));
    CHECK(v[1] == Catch::Approx(3.0f));
    auto with_missing = table.compose_oov("az", OovMode::mean_chars);
    CHECK(with_missing[0] == Catch::Approx(0.5f));
}

TEST_CASE("encode_sequence maps tokens, OOV and PAD slots") {
    PreprocessConfig cfg;
    cfg.max_len = 4;
    auto table = testsupport::make_table(3, {{"girl", {1, 2, 3}}, {"x", {7, 8, 9}}});

    TokenSequence seq;
    seq.tokens = {"girl", cfg.pad_token, cfg.pad_token, cfg.pad_token};
    seq.true_length = 1;
    auto m = encode_sequence<float>(table, seq, cfg.pad_token);
    CHECK(m.rows() == 4);
    CHECK(m(0, 0) == 1.0f);
    CHECK(m(0, 2) == 3.0f);
    for (std::size_t r = 1; r < 4; ++r) {
        for (std::size_t c = 0; c < 3; ++c) CHECK(m(r, c) == 0.0f);
    }

    TokenSequence all_pad;
    all_pad.tokens = std::vector<std::string>(4, cfg.pad_token);
    all_pad.true_length = 0;
    auto zero = encode_sequence<float>(table, all_pad, cfg.pad_token);
    for (float v : zero.data()) CHECK(v == 0.0f);

    // OOV row equals an independent recomputation from character vectors
    TokenSequence with_oov;
    with_oov.tokens = {"xy", cfg.pad_token, cfg.pad_token, cfg.pad_token};
    with_oov.true_length = 1;
    auto enc = encode_sequence<float>(table, with_oov, cfg.pad_token);
    // "xy": 'x' found -> [7,8,9], 'y' missing -> zero block; first 3 of [7,8,9,0,0,0]
    std::vector<float> expected = {7, 8, 9};
    for (std::size_t c = 0; c < 3; ++c) CHECK(enc(0, c) == expected[c]);
}

TEST_CASE("flatten is row-major and preserves the Frobenius norm") {
    Matrix<float> m(2, 3);
    float v = 1;
    for (auto& x : m.data()) x = v++;
    auto flat = flatten(m);
    CHECK(flat == std::vector<float>{1, 2, 3, 4, 5, 6});

    Rng rng(11);
    for (int iter = 0; iter < 20; ++iter) {
        auto random = testsupport::random_matrix<float>(5, 7, rng);
        auto f = flatten(random);
        double frob = 0;
        for (float x : random.data()) frob += double(x) * x;
        double flat_norm = 0;
        for (float x : f) flat_norm += double(x) * x;
        CHECK(std::abs(frob - flat_norm) < 1e-9);
        // component (i*dim + j) == m(i, j)
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 7; ++j) CHECK(f[i * 7 + j] == random(i, j));
        }
    }
}

TEST_CASE("encoded PAD rows are zero beyond true_length") {
    PreprocessConfig cfg;
    auto table = testsupport::make_table(2, {{"mad", {1, 1}}, {"day", {2, 2}}});
    auto seq = preprocess("mad day", cfg);
    auto m = encode_sequence<float>(table, seq, cfg.pad_token);
    for (std::size_t r = seq.true_length; r < cfg.max_len; ++r) {
        for (std::size_t c = 0; c < 2; ++c) CHECK(m(r, c) == 0.0f);
    }
}
