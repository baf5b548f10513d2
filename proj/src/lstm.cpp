#include "newscat/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "newscat/error.hpp"
#include "newscat/json_eigen.hpp"
#include "newscat/numeric.hpp"
#include "newscat/random.hpp"

namespace newscat {

void LstmConfig::validate() const {
  if (hidden_dim == 0 || epochs == 0 || max_seq_len == 0) {
    throw ConfigError("lstm: hidden_dim, epochs and max_seq_len must be positive");
  }
  if (!(learning_rate > 0.0) || !(clip_norm > 0.0)) {
    throw ConfigError("lstm: learning_rate and clip_norm must be positive");
  }
}

LstmParameters LstmParameters::zeros(std::size_t input_dim, std::size_t hidden_dim, std::size_t n_classes) {
  const auto d = static_cast<Eigen::Index>(input_dim);
  const auto h = static_cast<Eigen::Index>(hidden_dim);
  const auto c = static_cast<Eigen::Index>(n_classes);
  return {Eigen::MatrixXd::Zero(4 * h, d), Eigen::MatrixXd::Zero(4 * h, h), Eigen::VectorXd::Zero(4 * h),
          Eigen::MatrixXd::Zero(c, h), Eigen::VectorXd::Zero(c)};
}

double LstmParameters::squared_norm() const {
  return w_input.squaredNorm() + w_recurrent.squaredNorm() + b_gates.squaredNorm() + w_out.squaredNorm() +
         b_out.squaredNorm();
}

void LstmParameters::add_scaled(const LstmParameters& other, double scale) {
  w_input += scale * other.w_input;
  w_recurrent += scale * other.w_recurrent;
  b_gates += scale * other.b_gates;
  w_out += scale * other.w_out;
  b_out += scale * other.b_out;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct ForwardState {
  Eigen::MatrixXd x;      // D x T
  Eigen::MatrixXd gates;  // 4H x T, after nonlinearity
  Eigen::MatrixXd c;      // H x (T+1), column 0 is the initial state
  Eigen::MatrixXd h;      // H x (T+1)
  DenseVector logits;
};

ForwardState forward(const LstmParameters& p, const Eigen::MatrixXd& embeddings,
                     std::span<const std::uint32_t> seq) {
  const Eigen::Index hd = p.w_recurrent.cols();
  const auto t_n = static_cast<Eigen::Index>(seq.size());
  ForwardState s;
  s.x.resize(p.w_input.cols(), t_n);
  for (Eigen::Index t = 0; t < t_n; ++t) {
    const auto id = static_cast<Eigen::Index>(seq[static_cast<std::size_t>(t)]);
    if (id >= embeddings.cols()) throw ContractError(fmt::format("lstm: token id {} outside the table", id));
    s.x.col(t) = embeddings.col(id);
  }
  s.gates.noalias() = p.w_input * s.x;
  s.gates.colwise() += p.b_gates;
  s.c = Eigen::MatrixXd::Zero(hd, t_n + 1);
  s.h = Eigen::MatrixXd::Zero(hd, t_n + 1);
  for (Eigen::Index t = 0; t < t_n; ++t) {
    auto z = s.gates.col(t);
    z.noalias() += p.w_recurrent * s.h.col(t);
    for (Eigen::Index k = 0; k < 3 * hd; ++k) z(k) = sigmoid(z(k));
    for (Eigen::Index k = 3 * hd; k < 4 * hd; ++k) z(k) = std::tanh(z(k));
    const auto i = z.segment(0, hd).array();
    const auto f = z.segment(hd, hd).array();
    const auto o = z.segment(2 * hd, hd).array();
    const auto g = z.segment(3 * hd, hd).array();
    s.c.col(t + 1) = f * s.c.col(t).array() + i * g;
    s.h.col(t + 1) = o * s.c.col(t + 1).array().tanh();
  }
  s.logits = p.w_out * s.h.col(t_n) + p.b_out;
  return s;
}

}  // namespace

DenseVector lstm_forward_proba(const LstmParameters& params, const Eigen::MatrixXd& embeddings,
                               std::span<const std::uint32_t> sequence) {
  return softmax(forward(params, embeddings, sequence).logits);
}

LstmGradient lstm_loss_and_gradient(const LstmParameters& params, const Eigen::MatrixXd& embeddings,
                                    std::span<const std::uint32_t> sequence, Label label) {
  const ForwardState s = forward(params, embeddings, sequence);
  const Eigen::Index hd = params.w_recurrent.cols();
  const auto t_n = static_cast<Eigen::Index>(sequence.size());

  LstmGradient out;
  out.grad = LstmParameters::zeros(static_cast<std::size_t>(params.w_input.cols()), static_cast<std::size_t>(hd),
                                   static_cast<std::size_t>(params.w_out.rows()));
  DenseVector d_logits = softmax(s.logits);
  out.loss = -std::log(std::max(d_logits(label), std::numeric_limits<double>::min()));
  d_logits(label) -= 1.0;
  out.grad.w_out.noalias() = d_logits * s.h.col(t_n).transpose();
  out.grad.b_out = d_logits;

  Eigen::VectorXd dh = params.w_out.transpose() * d_logits;
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(hd);
  Eigen::MatrixXd dz(4 * hd, t_n);
  for (Eigen::Index t = t_n - 1; t >= 0; --t) {
    const auto z = s.gates.col(t);
    const auto i = z.segment(0, hd).array();
    const auto f = z.segment(hd, hd).array();
    const auto o = z.segment(2 * hd, hd).array();
    const auto g = z.segment(3 * hd, hd).array();
    const Eigen::ArrayXd tc = s.c.col(t + 1).array().tanh();
    dc.array() += dh.array() * o * (1.0 - tc.square());
    auto d = dz.col(t);
    d.segment(0, hd) = (dc.array() * g * i * (1.0 - i)).matrix();
    d.segment(hd, hd) = (dc.array() * s.c.col(t).array() * f * (1.0 - f)).matrix();
    d.segment(2 * hd, hd) = (dh.array() * tc * o * (1.0 - o)).matrix();
    d.segment(3 * hd, hd) = (dc.array() * i * (1.0 - g.square())).matrix();
    dc.array() *= f;
    dh.noalias() = params.w_recurrent.transpose() * d;
  }
  if (t_n > 0) {
    out.grad.w_input.noalias() = dz * s.x.transpose();
    out.grad.w_recurrent.noalias() = dz * s.h.leftCols(t_n).transpose();
    out.grad.b_gates = dz.rowwise().sum();
  }
  return out;
}

std::span<const std::uint32_t> LstmClassifier::truncate(const std::vector<std::uint32_t>& seq) const {
  return {seq.data(), std::min(seq.size(), max_seq_len_)};
}

LstmClassifier LstmClassifier::fit(const SequenceFeatures& x, std::span<const Label> y, std::size_t n_classes,
                                   const DenseMatrix& embeddings, const LstmConfig& config, std::uint64_t seed) {
  config.validate();
  if (x.sequences.empty()) throw EmptyCorpusError("lstm: no training sequences");
  if (x.sequences.size() != y.size()) throw ValidationError("lstm: sequences and labels differ in length");
  if (n_classes < 2) throw ValidationError("lstm: needs at least two classes");
  if (!embeddings.allFinite()) throw ValidationError("lstm: embeddings contain non-finite values");
  for (Label l : y) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes) {
      throw ValidationError(fmt::format("lstm: label {} outside [0, {})", l, n_classes));
    }
  }

  LstmClassifier model;
  model.max_seq_len_ = config.max_seq_len;
  model.embeddings_ = embeddings.transpose();
  const auto dim = static_cast<std::size_t>(embeddings.cols());
  model.params_ = LstmParameters::zeros(dim, config.hidden_dim, n_classes);

  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(config.hidden_dim));
  auto init = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = (2.0 * rng.uniform() - 1.0) * scale;
    }
  };
  init(model.params_.w_input);
  init(model.params_.w_recurrent);
  init(model.params_.w_out);
  const auto hd = static_cast<Eigen::Index>(config.hidden_dim);
  model.params_.b_gates.segment(hd, hd).setOnes();

  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    double total = 0.0;
    for (std::size_t i : order) {
      auto g = lstm_loss_and_gradient(model.params_, model.embeddings_, model.truncate(x.sequences[i]), y[i]);
      total += g.loss;
      const double norm = std::sqrt(g.grad.squared_norm());
      double step = config.learning_rate;
      if (norm > config.clip_norm) step *= config.clip_norm / norm;
      model.params_.add_scaled(g.grad, -step);
    }
    model.loss_trace_.push_back(total / static_cast<double>(order.size()));
  }
  return model;
}

DenseMatrix LstmClassifier::predict_proba(const SequenceFeatures& x) const {
  DenseMatrix out(static_cast<Eigen::Index>(x.sequences.size()), params_.b_out.size());
  for (std::size_t i = 0; i < x.sequences.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = lstm_forward_proba(params_, embeddings_, truncate(x.sequences[i]));
  }
  return out;
}

nlohmann::json LstmClassifier::to_json() const {
  return {{"w_input", matrix_to_json(params_.w_input)},
          {"w_recurrent", matrix_to_json(params_.w_recurrent)},
          {"b_gates", vector_to_json(params_.b_gates)},
          {"w_out", matrix_to_json(params_.w_out)},
          {"b_out", vector_to_json(params_.b_out)},
          {"embeddings", matrix_to_json(embeddings_)},
          {"max_seq_len", max_seq_len_},
          {"loss_trace", loss_trace_}};
}

LstmClassifier LstmClassifier::from_json(const nlohmann::json& j) {
  LstmClassifier m;
  m.params_.w_input = matrix_from_json<Eigen::MatrixXd>(j.at("w_input"));
  m.params_.w_recurrent = matrix_from_json<Eigen::MatrixXd>(j.at("w_recurrent"));
  m.params_.b_gates = vector_from_json(j.at("b_gates"));
  m.params_.w_out = matrix_from_json<Eigen::MatrixXd>(j.at("w_out"));
  m.params_.b_out = vector_from_json(j.at("b_out"));
  m.embeddings_ = matrix_from_json<Eigen::MatrixXd>(j.at("embeddings"));
  m.max_seq_len_ = j.at("max_seq_len").get<std::size_t>();
  m.loss_trace_ = j.at("loss_trace").get<std::vector<double>>();
  if (m.params_.w_input.cols() != m.embeddings_.rows()) throw ValidationError("lstm model file: shape mismatch");
  return m;
}

}  // namespace newscat
