#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "newscat/corpus.hpp"
#include "newscat/features.hpp"

namespace newscat {

struct LstmConfig {
  std::size_t hidden_dim = 64;
  std::size_t epochs = 30;
  double learning_rate = 0.05;
  double clip_norm = 5.0;  // global gradient norm per example
  std::size_t max_seq_len = 200;

  void validate() const;
};

// Gate blocks are stacked [input, forget, output, candidate], each hidden_dim rows.
struct LstmParameters {
  Eigen::MatrixXd w_input;      // 4H x D
  Eigen::MatrixXd w_recurrent;  // 4H x H
  Eigen::VectorXd b_gates;      // 4H
  Eigen::MatrixXd w_out;        // C x H
  Eigen::VectorXd b_out;        // C

  static LstmParameters zeros(std::size_t input_dim, std::size_t hidden_dim, std::size_t n_classes);
  std::size_t hidden_dim() const { return static_cast<std::size_t>(w_recurrent.cols()); }
  double squared_norm() const;
  void add_scaled(const LstmParameters& other, double scale);
};

struct LstmGradient {
  double loss = 0.0;
  LstmParameters grad;
};

// Cross-entropy of one sequence and its BPTT gradient. `embeddings` holds one
// token vector per column (D x V) and is not differentiated.
LstmGradient lstm_loss_and_gradient(const LstmParameters& params, const Eigen::MatrixXd& embeddings,
                                    std::span<const std::uint32_t> sequence, Label label);

DenseVector lstm_forward_proba(const LstmParameters& params, const Eigen::MatrixXd& embeddings,
                               std::span<const std::uint32_t> sequence);

// Single-layer LSTM over frozen embeddings, final hidden state into a softmax
// head, trained by per-example SGD in a seeded shuffled order.
class LstmClassifier {
 public:
  static LstmClassifier fit(const SequenceFeatures& x, std::span<const Label> y, std::size_t n_classes,
                            const DenseMatrix& embeddings, const LstmConfig& config, std::uint64_t seed);

  DenseMatrix predict_proba(const SequenceFeatures& x) const;

  const LstmParameters& parameters() const { return params_; }
  // Mean training loss of each epoch.
  const std::vector<double>& loss_trace() const { return loss_trace_; }
  std::size_t max_seq_len() const { return max_seq_len_; }

  nlohmann::json to_json() const;
  static LstmClassifier from_json(const nlohmann::json& j);

 private:
  std::span<const std::uint32_t> truncate(const std::vector<std::uint32_t>& seq) const;

  LstmParameters params_;
  Eigen::MatrixXd embeddings_;  // D x V
  std::vector<double> loss_trace_;
  std::size_t max_seq_len_ = 200;
};

}  // namespace newscat
