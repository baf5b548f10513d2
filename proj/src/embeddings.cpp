#include "newscat/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "newscat/error.hpp"
#include "newscat/random.hpp"

namespace newscat {

EmbeddingTable::EmbeddingTable(std::vector<std::string> tokens, DenseMatrix vectors)
    : tokens_(std::move(tokens)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(tokens_.size()) != vectors_.rows()) {
    throw ValidationError("embedding table: token count does not match row count");
  }
  if (!vectors_.allFinite()) throw ValidationError("embedding table contains non-finite values");
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw ValidationError(fmt::format("embedding table: duplicate token '{}'", tokens_[i]));
    }
  }
}

std::optional<TokenId> EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void SgnsConfig::validate() const {
  if (dim == 0 || window == 0 || negatives == 0 || min_count == 0) {
    throw ConfigError("sgns: dim, window, negatives and min_count must be positive");
  }
  if (!(learning_rate > 0.0 && learning_rate < 1.0)) {
    throw ConfigError("sgns: learning_rate must lie in (0, 1)");
  }
}

namespace {

double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double sgns_loss(const DenseVector& center, const DenseVector& context, const DenseMatrix& negatives) {
  double loss = -log_sigmoid(context.dot(center));
  for (Eigen::Index k = 0; k < negatives.rows(); ++k) {
    loss -= log_sigmoid(-negatives.row(k).dot(center));
  }
  return loss;
}

SgnsGradient sgns_loss_and_gradient(const DenseVector& center, const DenseVector& context,
                                    const DenseMatrix& negatives) {
  SgnsGradient g;
  const double pos = context.dot(center);
  g.loss = -log_sigmoid(pos);
  const double pos_coef = sigmoid(pos) - 1.0;
  g.center = pos_coef * context;
  g.context = pos_coef * center;
  g.negatives.resize(negatives.rows(), negatives.cols());
  for (Eigen::Index k = 0; k < negatives.rows(); ++k) {
    const double s = negatives.row(k).dot(center);
    g.loss -= log_sigmoid(-s);
    const double coef = sigmoid(s);
    g.center += coef * negatives.row(k).transpose();
    g.negatives.row(k) = coef * center.transpose();
  }
  return g;
}

SgnsResult train_sgns(const std::vector<std::vector<std::string>>& sentences,
                      const SgnsConfig& config) {
  config.validate();

  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : sentences) {
    for (const auto& t : s) ++counts[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : counts) {
    if (n >= config.min_count) kept.emplace_back(tok, n);
  }
  if (kept.size() < 2) {
    throw EmptyCorpusError(fmt::format(
        "sgns: corpus too small, {} token(s) reach min_count {}", kept.size(), config.min_count));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  const auto vocab_size = static_cast<Eigen::Index>(kept.size());
  const auto dim = static_cast<Eigen::Index>(config.dim);
  std::vector<std::string> tokens;
  std::unordered_map<std::string, TokenId> index;
  for (const auto& [tok, n] : kept) {
    index.emplace(tok, static_cast<TokenId>(tokens.size()));
    tokens.push_back(tok);
  }

  // Cumulative unigram^0.75 distribution for negative draws.
  std::vector<double> cumulative(kept.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    acc += std::pow(static_cast<double>(kept[i].second), 0.75);
    cumulative[i] = acc;
  }
  for (auto& c : cumulative) c /= acc;

  Rng rng(config.seed);
  DenseMatrix input(vocab_size, dim);
  for (Eigen::Index i = 0; i < vocab_size; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      input(i, j) = (rng.uniform() - 0.5) / static_cast<double>(config.dim);
    }
  }
  DenseMatrix output = DenseMatrix::Zero(vocab_size, dim);

  std::vector<std::vector<TokenId>> encoded;
  encoded.reserve(sentences.size());
  std::size_t total_tokens = 0;
  for (const auto& s : sentences) {
    std::vector<TokenId> ids;
    for (const auto& t : s) {
      if (auto it = index.find(t); it != index.end()) ids.push_back(it->second);
    }
    total_tokens += ids.size();
    encoded.push_back(std::move(ids));
  }

  auto draw_negative = [&]() -> TokenId {
    const double u = rng.uniform();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<TokenId>(it - cumulative.begin());
  };

  SgnsResult result;
  const double total_steps = static_cast<double>(std::max<std::size_t>(1, total_tokens * config.epochs));
  std::size_t step = 0;
  std::vector<TokenId> negs;
  DenseMatrix neg_vectors;
  const auto window = static_cast<std::ptrdiff_t>(config.window);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t pairs = 0;
    for (const auto& ids : encoded) {
      const auto len = static_cast<std::ptrdiff_t>(ids.size());
      for (std::ptrdiff_t pos = 0; pos < len; ++pos, ++step) {
        const double lr = config.learning_rate *
                          std::max(1e-4, 1.0 - static_cast<double>(step) / total_steps);
        const TokenId center = ids[static_cast<std::size_t>(pos)];
        for (std::ptrdiff_t off = -window; off <= window; ++off) {
          const std::ptrdiff_t cpos = pos + off;
          if (off == 0 || cpos < 0 || cpos >= len) continue;
          const TokenId context = ids[static_cast<std::size_t>(cpos)];

          negs.clear();
          for (std::size_t k = 0; k < config.negatives; ++k) {
            const TokenId n = draw_negative();
            if (n == center || n == context) continue;
            negs.push_back(n);
          }
          neg_vectors.resize(static_cast<Eigen::Index>(negs.size()), dim);
          for (std::size_t k = 0; k < negs.size(); ++k) {
            neg_vectors.row(static_cast<Eigen::Index>(k)) = output.row(negs[k]);
          }
          const DenseVector c = input.row(center).transpose();
          const DenseVector ctx = output.row(context).transpose();
          const SgnsGradient g = sgns_loss_and_gradient(c, ctx, neg_vectors);

          loss_sum += g.loss;
          ++pairs;
          input.row(center) -= lr * g.center.transpose();
          output.row(context) -= lr * g.context.transpose();
          for (std::size_t k = 0; k < negs.size(); ++k) {
            output.row(negs[k]) -= lr * g.negatives.row(static_cast<Eigen::Index>(k));
          }
        }
      }
    }
    result.epoch_mean_loss.push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
    spdlog::debug("sgns epoch {}: mean loss {:.6f} over {} pairs", epoch + 1,
                  result.epoch_mean_loss.back(), pairs);
  }

  result.table = EmbeddingTable(std::move(tokens), input + output);
  return result;
}

std::vector<std::vector<std::string>> load_sentences(std::span<const std::string> paths,
                                                     const CleaningConfig& cleaning) {
  std::vector<std::vector<std::string>> sentences;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
      auto tokens = tokenize(clean_text(line, cleaning));
      if (!tokens.empty()) sentences.push_back(std::move(tokens));
    }
  }
  return sentences;
}

MeanEmbedding embed_document_mean(const EmbeddingTable& table, std::span<const std::string> tokens) {
  MeanEmbedding out;
  out.vector = DenseVector::Zero(static_cast<Eigen::Index>(table.dim()));
  std::size_t known = 0;
  for (const auto& t : tokens) {
    if (auto id = table.find(t)) {
      out.vector += table.vector(*id).transpose();
      ++known;
    }
  }
  if (known == 0) {
    out.oov = true;
  } else {
    out.vector /= static_cast<double>(known);
  }
  return out;
}

Similarity cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("cosine similarity of vectors with different sizes");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return {0.0, true};
  return {std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0), false};
}

NeighborIndex::NeighborIndex(const EmbeddingTable& table) : table_(&table), unit_(table.vectors()) {
  for (Eigen::Index r = 0; r < unit_.rows(); ++r) {
    const double n = unit_.row(r).norm();
    if (n > 0.0) unit_.row(r) /= n;
  }
}

std::vector<Neighbor> NeighborIndex::top_k(TokenId id, std::size_t k) const {
  const DenseVector sims = unit_ * unit_.row(id).transpose();
  std::vector<TokenId> order;
  order.reserve(table_->size());
  for (TokenId t = 0; t < table_->size(); ++t) {
    if (t != id) order.push_back(t);
  }
  auto better = [&](TokenId a, TokenId b) {
    const double sa = std::clamp(sims(a), -1.0, 1.0);
    const double sb = std::clamp(sims(b), -1.0, 1.0);
    if (sa != sb) return sa > sb;
    return table_->token(a) < table_->token(b);
  };
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), better);
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back({table_->token(order[i]), std::clamp(sims(order[i]), -1.0, 1.0)});
  }
  return out;
}

std::vector<Neighbor> top_k_neighbors(const EmbeddingTable& table, std::string_view token, std::size_t k) {
  const auto id = table.find(token);
  if (!id) throw NotFoundError(fmt::format("token '{}' is not in the embedding table", token));
  return NeighborIndex(table).top_k(*id, k);
}

void save_embeddings(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << table.size() << ' ' << table.dim() << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.token(static_cast<TokenId>(i));
    for (std::size_t j = 0; j < table.dim(); ++j) {
      out << ' ' << table.vectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::size_t rows = 0, dim = 0;
  std::string header;
  if (!std::getline(in, header) || !(std::istringstream(header) >> rows >> dim) || dim == 0) {
    throw ValidationError(path + ": expected '<vocab_size> <dim>' header");
  }
  std::vector<std::string> tokens;
  tokens.reserve(rows);
  DenseMatrix vectors(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw ValidationError(fmt::format("{}: expected {} rows", path, rows));
    std::istringstream fields(line);
    std::string tok;
    fields >> tok;
    for (std::size_t j = 0; j < dim; ++j) {
      if (!(fields >> vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)))) {
        throw ValidationError(fmt::format("{}: row {} has fewer than {} values", path, r + 2, dim));
      }
    }
    tokens.push_back(std::move(tok));
  }
  return EmbeddingTable(std::move(tokens), std::move(vectors));
}

}  // namespace newscat
