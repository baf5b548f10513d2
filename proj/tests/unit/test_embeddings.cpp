#include <doctest.h>

#include <fstream>

#include "../support/oracles.hpp"
#include "newscat/embeddings.hpp"
#include "newscat/error.hpp"

using namespace newscat;

namespace {

DenseVector random_vector(Rng& rng, Eigen::Index d, double scale) {
  DenseVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = scale * (2.0 * rng.uniform() - 1.0);
  return v;
}

std::vector<std::vector<std::string>> xx_yy_corpus() {
  return std::vector<std::vector<std::string>>(200, {"xx", "yy"});
}

double table_cosine(const EmbeddingTable& t, const std::string& a, const std::string& b) {
  const DenseVector u = t.vector(*t.find(a)).transpose();
  const DenseVector v = t.vector(*t.find(b)).transpose();
  return cosine_similarity(std::span<const double>(u.data(), u.size()), std::span<const double>(v.data(), v.size())).value;
}

EmbeddingTable random_table(Rng& rng, std::size_t n, Eigen::Index d) {
  std::vector<std::string> tokens;
  DenseMatrix m(static_cast<Eigen::Index>(n), d);
  for (std::size_t i = 0; i < n; ++i) {
    tokens.push_back("t" + std::to_string(i));
    m.row(static_cast<Eigen::Index>(i)) = random_vector(rng, d, 1.0).transpose();
  }
  return EmbeddingTable(tokens, m);
}

}  // namespace

TEST_CASE("sgns gradient matches finite differences on 100 random tuples") {
  Rng rng(11);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.index(12));
    const Eigen::Index k = static_cast<Eigen::Index>(rng.index(6));
    DenseVector c = random_vector(rng, d, 1.0);
    DenseVector ctx = random_vector(rng, d, 1.0);
    DenseMatrix neg(k, d);
    for (Eigen::Index r = 0; r < k; ++r) neg.row(r) = random_vector(rng, d, 1.0).transpose();

    const auto g = sgns_loss_and_gradient(c, ctx, neg);
    CHECK(g.loss == doctest::Approx(sgns_loss(c, ctx, neg)).epsilon(1e-14));
    auto f = [&] { return sgns_loss(c, ctx, neg); };
    const DenseVector nc = oracle::numeric_gradient(c, f);
    const DenseVector nctx = oracle::numeric_gradient(ctx, f);
    const DenseVector nneg = oracle::numeric_gradient(neg, f);

    DenseVector analytic(2 * d + k * d), numeric(2 * d + k * d);
    analytic << g.center, g.context, oracle::flat(g.negatives);
    numeric << nc, nctx, nneg;
    worst = std::max(worst, oracle::relative_error(analytic, numeric));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("sgns on the xx yy corpus learns for 5 seeds") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SgnsConfig cfg;
    cfg.dim = 10;
    cfg.window = 1;
    cfg.epochs = 5;
    cfg.seed = seed;
    cfg.epochs = 0;
    const auto init = train_sgns(xx_yy_corpus(), cfg).table;
    cfg.epochs = 5;
    const auto trained = train_sgns(xx_yy_corpus(), cfg);
    CAPTURE(seed);
    REQUIRE(trained.epoch_mean_loss.size() == 5);
    CHECK(trained.epoch_mean_loss.back() < trained.epoch_mean_loss.front());
    CHECK(table_cosine(trained.table, "xx", "yy") > table_cosine(init, "xx", "yy"));
  }
}

TEST_CASE("sgns with zero epochs returns the seeded initialization") {
  std::vector<std::vector<std::string>> s = {{"aa", "bb", "aa", "cc"}, {"cc", "aa", "bb"}};
  SgnsConfig cfg;
  cfg.dim = 4;
  cfg.epochs = 0;
  cfg.min_count = 2;
  cfg.seed = 9;
  const auto res = train_sgns(s, cfg);
  CHECK(res.epoch_mean_loss.empty());
  CHECK(res.table.tokens() == std::vector<std::string>{"aa", "bb", "cc"});
  Rng rng(9);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(res.table.vectors()(i, j) == (rng.uniform() - 0.5) / 4.0);
  }
}

TEST_CASE("sgns is reproducible and validates its config") {
  SgnsConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 2;
  std::vector<std::vector<std::string>> s;
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> sent;
    for (int j = 0; j < 6; ++j) sent.push_back("w" + std::to_string(rng.index(10)));
    s.push_back(sent);
  }
  CHECK(train_sgns(s, cfg).table == train_sgns(s, cfg).table);
  cfg.dim = 0;
  CHECK_THROWS_AS(train_sgns(s, cfg), ConfigError);
  cfg.dim = 8;
  cfg.learning_rate = 0;
  CHECK_THROWS_AS(train_sgns(s, cfg), ConfigError);
  cfg.learning_rate = 0.025;
  cfg.min_count = 1000;
  CHECK_THROWS_AS(train_sgns(s, cfg), EmptyCorpusError);
}

TEST_CASE("cosine similarity") {
  const std::vector<double> a = {1, 0}, b = {0, 2}, c = {3, 0}, z = {0, 0};
  CHECK(cosine_similarity(a, b).value == 0.0);
  CHECK(cosine_similarity(a, c).value == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, z).degenerate);
  CHECK(cosine_similarity(a, z).value == 0.0);
  const std::vector<double> d = {1, 1};
  CHECK(cosine_similarity(a, d).value == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(cosine_similarity(a, std::vector<double>{1, 2, 3}), ValidationError);
}

TEST_CASE("top-k neighbours match brute force") {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.index(30);
    const auto table = random_table(rng, n, 1 + static_cast<Eigen::Index>(rng.index(8)));
    const NeighborIndex index(table);
    const std::size_t k = 1 + rng.index(n + 2);
    for (TokenId id = 0; id < n; ++id) {
      std::vector<std::pair<double, std::string>> all;
      const DenseVector u = table.vector(id).transpose();
      for (TokenId o = 0; o < n; ++o) {
        if (o == id) continue;
        const DenseVector v = table.vector(o).transpose();
        all.push_back({-u.dot(v) / (u.norm() * v.norm()), table.token(o)});
      }
      std::sort(all.begin(), all.end());
      const auto got = index.top_k(id, k);
      REQUIRE(got.size() == std::min(k, n - 1));
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].token == all[i].second);
        CHECK(got[i].similarity == doctest::Approx(-all[i].first).epsilon(1e-12));
      }
    }
  }
  const auto table = random_table(rng, 3, 2);
  CHECK_THROWS_AS(top_k_neighbors(table, "nope", 2), NotFoundError);
}

TEST_CASE("mean embedding") {
  DenseMatrix m(2, 2);
  m << 1, 2, 3, 6;
  const EmbeddingTable t({"aa", "bb"}, m);
  const std::vector<std::string> doc = {"aa", "zz", "bb"};
  const auto e = embed_document_mean(t, doc);
  CHECK_FALSE(e.oov);
  CHECK(e.vector(0) == 2.0);
  CHECK(e.vector(1) == 4.0);
  const std::vector<std::string> none = {"zz"};
  const auto o = embed_document_mean(t, none);
  CHECK(o.oov);
  CHECK(o.vector.isZero());

  Rng rng(13);
  const auto big = random_table(rng, 20, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> toks;
    for (std::size_t i = 0, n = 1 + rng.index(15); i < n; ++i) toks.push_back("t" + std::to_string(rng.index(25)));
    auto shuffled = toks;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
    const auto a = embed_document_mean(big, toks);
    const auto b = embed_document_mean(big, shuffled);
    CHECK(a.oov == b.oov);
    CHECK((a.vector - b.vector).norm() < 1e-12);
  }
}

TEST_CASE("embedding table validation") {
  DenseMatrix m(2, 2);
  m << 1, 2, 3, 4;
  CHECK_THROWS_AS(EmbeddingTable({"aa"}, m), ValidationError);
  CHECK_THROWS_AS(EmbeddingTable({"aa", "aa"}, m), ValidationError);
  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(EmbeddingTable({"aa", "bb"}, m), ValidationError);
}

TEST_CASE("word2vec text format round trip") {
  const auto dir = oracle::temp_dir("emb");
  Rng rng(14);
  const auto t = random_table(rng, 7, 3);
  save_embeddings(t, (dir / "e.txt").string());
  const auto back = load_embeddings((dir / "e.txt").string());
  CHECK(back.tokens() == t.tokens());
  CHECK((back.vectors() - t.vectors()).cwiseAbs().maxCoeff() < 1e-15);
  {
    std::ofstream f(dir / "bad.txt");
    f << "2 3\naa 1 2 3\nbb 1 2\n";
  }
  CHECK_THROWS_AS(load_embeddings((dir / "bad.txt").string()), ValidationError);
  CHECK_THROWS_AS(load_embeddings((dir / "missing.txt").string()), IoError);
}

TEST_CASE("sentence loading cleans lines") {
  const auto dir = oracle::temp_dir("sent");
  {
    std::ofstream f(dir / "s.txt");
    f << "Ibhola LOMDLALO!\n\n udkt x izindaba\n";
  }
  CleaningConfig c;
  c.noise_words = {"udkt"};
  const std::vector<std::string> paths = {(dir / "s.txt").string()};
  const auto s = load_sentences(paths, c);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == std::vector<std::string>{"ibhola", "lomdlalo"});
  CHECK(s[1] == std::vector<std::string>{"izindaba"});
}
