#pragma once

// Independent reference implementations and generators shared by the unit
// and acceptance suites. Kept deliberately naive: direct loops, no reuse of
// library internals beyond the Rng draw helpers needed for replay.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "newscat/corpus.hpp"
#include "newscat/evaluation.hpp"
#include "newscat/features.hpp"
#include "newscat/random.hpp"

namespace oracle {

using newscat::DenseMatrix;
using newscat::Label;
using newscat::Rng;

// ||a - n|| / max(||a||, ||n||), 0 when both vanish.
inline double relative_error(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric) {
  const double scale = std::max(analytic.norm(), numeric.norm());
  if (scale == 0.0) return 0.0;
  return (analytic - numeric).norm() / scale;
}

// Central differences of f over every entry of `param`.
template <typename Param, typename F>
Eigen::VectorXd numeric_gradient(Param& param, F&& f, double h = 1e-6) {
  Eigen::VectorXd g(param.size());
  for (Eigen::Index i = 0; i < param.size(); ++i) {
    const double keep = param.data()[i];
    param.data()[i] = keep + h;
    const double up = f();
    param.data()[i] = keep - h;
    const double down = f();
    param.data()[i] = keep;
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

template <typename M>
Eigen::VectorXd flat(const M& m) {
  Eigen::VectorXd v(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) v(i) = m.data()[i];
  return v;
}

// Random UTF-8 text mixing ASCII letters/digits, punctuation, whitespace,
// accented letters, other scripts and noise words in random case.
inline std::string random_text(Rng& rng, const std::vector<std::string>& noise) {
  static const std::vector<std::string> pieces = {
      "a", "b", "Z", "q", "m", "k", "u", "x", "7", "0", "42", "!", "?", "&", "%", "$", "#", "-", "_", ".", ",",
      "'", "\"", "(", ")", "/", "\\", " ", "  ", "\t", "\n", "\r\n", "\xc3\xa9", "\xc3\x81", "\xc3\xb1",
      "\xc3\xbc", "\xe2\x80\x9c", "\xe2\x80\x9d", "\xe2\x80\xa6", "\xef\xac\x81", "\xe4\xb8\xad",
      "\xf0\x9f\x98\x80", "\xd0\x96", "\xce\xbb", "\xc2\xb2", "\xe2\x85\xa2", "ibhola", "Umnuz", "CYRIL",
      "izindaba", "e", "I"};
  std::string out;
  const std::size_t n = rng.index(40);
  for (std::size_t i = 0; i < n; ++i) {
    if (!noise.empty() && rng.uniform() < 0.08) {
      std::string w = noise[rng.index(noise.size())];
      for (auto& c : w) {
        if (rng.bernoulli(0.5)) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
      out += " " + w + " ";
    } else {
      out += pieces[rng.index(pieces.size())];
    }
  }
  return out;
}

// Posterior of multinomial NB by direct products of probabilities.
// docs are token-id lists, counts smoothed with alpha over a vocab of size v.
inline std::vector<double> nb_posterior(const std::vector<std::vector<int>>& docs, const std::vector<int>& labels,
                                        int n_classes, int v, double alpha, const std::vector<int>& query) {
  std::vector<double> joint(static_cast<std::size_t>(n_classes), 0.0);
  for (int c = 0; c < n_classes; ++c) {
    double n_docs = 0, total = 0;
    std::vector<double> cnt(static_cast<std::size_t>(v), 0.0);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (labels[d] != c) continue;
      n_docs += 1;
      for (int t : docs[d]) {
        cnt[static_cast<std::size_t>(t)] += 1;
        total += 1;
      }
    }
    double p = n_docs / static_cast<double>(docs.size());
    for (int t : query) p *= (cnt[static_cast<std::size_t>(t)] + alpha) / (total + alpha * v);
    joint[static_cast<std::size_t>(c)] = p;
  }
  double z = 0;
  for (double j : joint) z += j;
  for (double& j : joint) j /= z;
  return joint;
}

// SMOTE by the documented recipe with an O(n^2) neighbour scan.
struct SmoteRef {
  DenseMatrix features;
  std::vector<Label> labels;
};

inline SmoteRef smote(const DenseMatrix& x, const std::vector<Label>& y, std::size_t k, std::uint64_t seed) {
  int n_classes = 0;
  for (Label l : y) n_classes = std::max(n_classes, l + 1);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < y.size(); ++i) members[static_cast<std::size_t>(y[i])].push_back(i);
  std::size_t target = 0;
  for (auto& m : members) target = std::max(target, m.size());
  std::vector<Eigen::RowVectorXd> rows;
  SmoteRef out;
  out.labels = y;
  for (std::size_t c = 0; c < members.size(); ++c) {
    const auto& m = members[c];
    if (m.empty() || m.size() >= target) continue;
    const std::size_t kk = std::min(k, m.size() - 1);
    Rng rng(newscat::mix_seed(seed, c));
    for (std::size_t j = 0; j < target - m.size(); ++j) {
      const std::size_t base = m[j % m.size()];
      // every pair distance, ranked by (distance, row index)
      std::vector<std::pair<double, std::size_t>> all;
      for (std::size_t o : m) {
        if (o == base) continue;
        double d = 0;
        for (Eigen::Index f = 0; f < x.cols(); ++f) d += (x(base, f) - x(o, f)) * (x(base, f) - x(o, f));
        all.push_back({d, o});
      }
      std::sort(all.begin(), all.end());
      const std::size_t nn = all[rng.index(kk)].second;
      const double u = rng.uniform();
      Eigen::RowVectorXd r(x.cols());
      for (Eigen::Index f = 0; f < x.cols(); ++f) r(f) = x(base, f) + u * (x(nn, f) - x(base, f));
      rows.push_back(r);
      out.labels.push_back(static_cast<Label>(c));
    }
  }
  out.features.resize(x.rows() + static_cast<Eigen::Index>(rows.size()), x.cols());
  out.features.topRows(x.rows()) = x;
  for (std::size_t i = 0; i < rows.size(); ++i) out.features.row(x.rows() + static_cast<Eigen::Index>(i)) = rows[i];
  return out;
}

// Macro precision/recall/F1 and accuracy from per-sample loops, averaging
// over the classes that occur in either vector.
struct Metrics {
  double precision = 0, recall = 0, f1 = 0, accuracy = 0;
};

inline Metrics metrics(const std::vector<Label>& t, const std::vector<Label>& p, int n_classes) {
  Metrics m;
  int present = 0;
  for (int c = 0; c < n_classes; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (p[i] == c && t[i] == c) tp += 1;
      if (p[i] == c && t[i] != c) fp += 1;
      if (p[i] != c && t[i] == c) fn += 1;
    }
    if (tp + fp + fn == 0) continue;
    ++present;
    const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    m.precision += prec;
    m.recall += rec;
    m.f1 += prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
  }
  m.precision /= present;
  m.recall /= present;
  m.f1 /= present;
  double ok = 0;
  for (std::size_t i = 0; i < t.size(); ++i) ok += t[i] == p[i];
  m.accuracy = ok / static_cast<double>(t.size());
  return m;
}

// Percentile bootstrap replaying the documented index draws.
inline std::pair<double, double> bootstrap(const std::vector<Label>& t, const std::vector<Label>& p, int n_classes,
                                           std::size_t n_resamples, double level, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> s;
  for (std::size_t r = 0; r < n_resamples; ++r) {
    std::vector<Label> tt, pp;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::size_t j = rng.index(t.size());
      tt.push_back(t[j]);
      pp.push_back(p[j]);
    }
    s.push_back(metrics(tt, pp, n_classes).f1);
  }
  std::sort(s.begin(), s.end());
  auto q = [&](double a) {
    const double pos = a * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
  };
  const double a = (1 - level) / 2;
  return {q(a), q(1 - a)};
}

// Replacement replay: per token one uniform draw, then an index draw when a
// candidate list exists and the draw is under p.
inline std::vector<std::string> augment(const std::vector<std::string>& tokens,
                                        const std::map<std::string, std::vector<std::string>>& candidates,
                                        double p, Rng& rng) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    const double u = rng.uniform();
    auto it = candidates.find(t);
    if (u < p && it != candidates.end() && !it->second.empty()) {
      out.push_back(it->second[rng.index(it->second.size())]);
    } else {
      out.push_back(t);
    }
  }
  return out;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("newscat-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace oracle
