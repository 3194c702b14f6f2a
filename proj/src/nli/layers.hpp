#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rng.hpp"

namespace eae::nli {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// A trainable tensor and its accumulated gradient.
struct Param {
  std::string name;
  Matrix value;
  Matrix grad;

  void Init(std::string n, Eigen::Index rows, Eigen::Index cols) {
    name = std::move(n);
    value = Matrix::Zero(rows, cols);
    grad = Matrix::Zero(rows, cols);
  }
  void FillNormal(Rng& rng, double stddev) {
    for (Eigen::Index i = 0; i < value.size(); ++i) {
      value.data()[i] = rng.Normal(0.0, stddev);
    }
  }
};

using ParamRefs = std::vector<Param*>;

// Sequences are row-major in the token dimension: an L x d matrix holds one
// d-dimensional row per token.

class Linear {
 public:
  Linear() = default;
  Linear(const std::string& name, int in, int out, Rng& rng,
         double init_stddev);

  Matrix Forward(const Matrix& x) const;
  // Accumulates parameter gradients; returns d(loss)/d(x).
  Matrix Backward(const Matrix& x, const Matrix& dy);

  void Collect(ParamRefs& out) {
    out.push_back(&weight_);
    out.push_back(&bias_);
  }
  Param& weight() { return weight_; }
  Param& bias() { return bias_; }

 private:
  Param weight_;  // in x out
  Param bias_;    // 1 x out
};

class LayerNorm {
 public:
  struct Cache {
    Matrix normalized;
    Vector inv_std;
  };

  LayerNorm() = default;
  LayerNorm(const std::string& name, int dim);

  Matrix Forward(const Matrix& x, Cache* cache) const;
  Matrix Backward(const Cache& cache, const Matrix& dy);

  void Collect(ParamRefs& out) {
    out.push_back(&gamma_);
    out.push_back(&beta_);
  }

 private:
  static constexpr double kEps = 1e-12;
  Param gamma_;
  Param beta_;
};

// tanh approximation.
Matrix Gelu(const Matrix& x);
Matrix GeluBackward(const Matrix& x, const Matrix& dy);

// Row-wise softmax.
Matrix SoftmaxRows(const Matrix& scores);

class SelfAttention {
 public:
  struct Cache {
    Matrix input;
    Matrix q, k, v;
    std::vector<Matrix> weights;  // per head, L x L
    Matrix context;               // concatenated heads, L x d
  };

  SelfAttention() = default;
  SelfAttention(const std::string& name, int dim, int heads, Rng& rng,
                double init_stddev);

  Matrix Forward(const Matrix& x, Cache* cache) const;
  Matrix Backward(const Cache& cache, const Matrix& dy);

  void Collect(ParamRefs& out);

 private:
  int heads_ = 1;
  int head_dim_ = 1;
  Linear query_, key_, value_, output_;
};

// Post-norm block: h = LN(x + Attn(x)); y = LN(h + FFN(h)).
class TransformerBlock {
 public:
  struct Cache {
    SelfAttention::Cache attention;
    LayerNorm::Cache norm1;
    Matrix hidden;     // output of norm1
    Matrix ffn_inner;  // pre-activation of the first FFN projection
    Matrix ffn_act;
    LayerNorm::Cache norm2;
  };

  TransformerBlock() = default;
  TransformerBlock(const std::string& name, int dim, int heads, int ffn_dim,
                   Rng& rng, double init_stddev);

  Matrix Forward(const Matrix& x, Cache* cache) const;
  Matrix Backward(const Cache& cache, const Matrix& dy);

  void Collect(ParamRefs& out);

 private:
  SelfAttention attention_;
  LayerNorm norm1_;
  Linear ffn_in_;
  Linear ffn_out_;
  LayerNorm norm2_;
};

}  // namespace eae::nli
