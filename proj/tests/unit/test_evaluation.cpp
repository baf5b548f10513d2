#include <doctest.h>

#include <set>

#include "../support/oracles.hpp"
#include "newscat/error.hpp"
#include "newscat/evaluation.hpp"

using namespace newscat;

TEST_CASE("metrics on the [[2,0],[1,1]] fixture") {
  const std::vector<Label> t = {0, 0, 1, 1}, p = {0, 0, 0, 1};
  const auto m = confusion_and_metrics(t, p, 2);
  CHECK(m.confusion == std::vector<std::vector<std::size_t>>{{2, 0}, {1, 1}});
  CHECK(m.precision[0] == doctest::Approx(2.0 / 3.0));
  CHECK(m.precision[1] == 1.0);
  CHECK(m.recall[0] == 1.0);
  CHECK(m.recall[1] == 0.5);
  CHECK(m.f1[0] == doctest::Approx(0.8));
  CHECK(m.f1[1] == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(m.f1_macro - 0.7333) <= 1e-4);
  CHECK(m.accuracy == 0.75);
  CHECK(m.total() == 4);
}

TEST_CASE("metric edge cases") {
  const std::vector<Label> t = {0, 1, 2, 2};
  const auto perfect = confusion_and_metrics(t, t, 4);
  CHECK(perfect.f1_macro == 1.0);
  CHECK(perfect.precision_macro == 1.0);
  CHECK(perfect.accuracy == 1.0);
  CHECK_FALSE(perfect.present[3]);

  const std::vector<Label> never1 = {0, 0, 2, 2};
  const auto m = confusion_and_metrics(t, never1, 3);
  CHECK(m.precision[1] == 0.0);
  CHECK(m.f1_macro < 1.0);
  CHECK_THROWS_AS(confusion_and_metrics(std::vector<Label>{}, std::vector<Label>{}, 2), EmptyCorpusError);
  CHECK_THROWS_AS(confusion_and_metrics(t, std::vector<Label>{0}, 3), ValidationError);
}

TEST_CASE("metrics match a per-sample oracle on random label vectors") {
  Rng rng(51);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.index(50);
    const int c = 1 + static_cast<int>(rng.index(5));
    std::vector<Label> t, p;
    for (std::size_t i = 0; i < n; ++i) {
      t.push_back(static_cast<Label>(rng.index(static_cast<std::size_t>(c))));
      p.push_back(rng.bernoulli(0.5) ? t.back() : static_cast<Label>(rng.index(static_cast<std::size_t>(c))));
    }
    const auto got = confusion_and_metrics(t, p, static_cast<std::size_t>(c));
    const auto ref = oracle::metrics(t, p, c);
    CHECK(got.precision_macro == doctest::Approx(ref.precision).epsilon(1e-12));
    CHECK(got.recall_macro == doctest::Approx(ref.recall).epsilon(1e-12));
    CHECK(got.f1_macro == doctest::Approx(ref.f1).epsilon(1e-12));
    CHECK(got.accuracy == doctest::Approx(ref.accuracy).epsilon(1e-12));
    CHECK(got.total() == n);
    CHECK(macro_f1(t, p, static_cast<std::size_t>(c)) == got.f1_macro);
  }
}

TEST_CASE("stratified folds keep every class within one of even on 100 random label vectors") {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t c = 1 + rng.index(5);
    const std::size_t k = 2 + rng.index(5);
    std::vector<Label> y;
    for (std::size_t l = 0; l < c; ++l) y.insert(y.end(), k + rng.index(20), static_cast<Label>(l));
    for (std::size_t i = y.size(); i > 1; --i) std::swap(y[i - 1], y[rng.index(i)]);
    const auto seed = rng.next();
    const auto split = stratified_kfold(y, k, seed);
    REQUIRE(split.k == k);
    REQUIRE(split.folds.size() == k);
    std::vector<std::size_t> seen;
    std::size_t min_size = y.size(), max_size = 0;
    for (std::size_t f = 0; f < k; ++f) {
      CHECK(std::is_sorted(split.folds[f].begin(), split.folds[f].end()));
      seen.insert(seen.end(), split.folds[f].begin(), split.folds[f].end());
      min_size = std::min(min_size, split.folds[f].size());
      max_size = std::max(max_size, split.folds[f].size());
      const auto train = split.train_indices(f);
      CHECK(train.size() + split.folds[f].size() == y.size());
    }
    CHECK(max_size - min_size <= 1);
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == i);
    for (std::size_t l = 0; l < c; ++l) {
      std::size_t lo = y.size(), hi = 0;
      for (const auto& fold : split.folds) {
        std::size_t n = 0;
        for (auto i : fold) n += y[i] == static_cast<Label>(l);
        lo = std::min(lo, n);
        hi = std::max(hi, n);
      }
      CHECK(hi - lo <= 1);
    }
    CHECK(stratified_kfold(y, k, seed).folds == split.folds);
  }
}

TEST_CASE("stratified fold examples") {
  std::vector<Label> y(6, 0);
  y.insert(y.end(), 4, 1);
  const auto s = stratified_kfold(y, 2, 3);
  for (const auto& fold : s.folds) {
    CHECK(fold.size() == 5);
    std::size_t a = 0;
    for (auto i : fold) a += y[i] == 0;
    CHECK(a == 3);
  }
  std::vector<Label> even;
  for (int i = 0; i < 10; ++i) even.push_back(i % 2);
  for (const auto& fold : stratified_kfold(even, 5, 1).folds) {
    REQUIRE(fold.size() == 2);
    CHECK(even[fold[0]] != even[fold[1]]);
  }
  CHECK_THROWS_AS(stratified_kfold(y, 1, 1), ConfigError);
  const std::vector<Label> lone = {0, 0, 0, 1};
  CHECK_THROWS_AS(stratified_kfold(lone, 3, 1), ConfigError);
  const std::vector<Label> small = {0, 0, 0, 1, 1};
  CHECK(stratified_kfold(small, 5, 1).k == 2);
}

TEST_CASE("bootstrap intervals") {
  const std::vector<Label> t = {0, 1, 2, 0, 1};
  CHECK(bootstrap_f1_ci(t, t, 3) == ConfidenceInterval{1.0, 1.0});
  const std::vector<Label> one = {1};
  CHECK(bootstrap_f1_ci(one, one, 2) == ConfidenceInterval{1.0, 1.0});

  Rng rng(53);
  std::vector<Label> yt, yp;
  for (int i = 0; i < 20; ++i) {
    yt.push_back(static_cast<Label>(rng.index(3)));
    yp.push_back(rng.bernoulli(0.6) ? yt.back() : static_cast<Label>(rng.index(3)));
  }
  BootstrapConfig cfg;
  cfg.seed = 99;
  const auto ci = bootstrap_f1_ci(yt, yp, 3, cfg);
  const auto ref = oracle::bootstrap(yt, yp, 3, cfg.n_resamples, cfg.level, cfg.seed);
  CHECK(ci.low == doctest::Approx(ref.first).epsilon(1e-12));
  CHECK(ci.high == doctest::Approx(ref.second).epsilon(1e-12));
  CHECK(ci.low <= ci.high);
  CHECK(bootstrap_f1_ci(yt, yp, 3, cfg) == ci);
}

TEST_CASE("quantile interpolates linearly") {
  CHECK(quantile({3, 1, 2, 4}, 0.5) == 2.5);
  CHECK(quantile({3, 1, 2, 4}, 0.0) == 1.0);
  CHECK(quantile({3, 1, 2, 4}, 1.0) == 4.0);
  CHECK(quantile({5}, 0.3) == 5.0);
}

TEST_CASE("metrics json") {
  const std::vector<Label> t = {0, 0, 1, 1}, p = {0, 0, 0, 1};
  const auto j = to_json(confusion_and_metrics(t, p, 2), LabelSet({"a", "b"}));
  CHECK(j.at("accuracy").get<double>() == 0.75);
  CHECK(j.dump().find("\"a\"") != std::string::npos);
}
