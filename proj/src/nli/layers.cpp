#include "nli/layers.hpp"

#include <cmath>

#include "error.hpp"

namespace eae::nli {

Linear::Linear(const std::string& name, int in, int out, Rng& rng,
               double init_stddev) {
  weight_.Init(name + ".weight", in, out);
  weight_.FillNormal(rng, init_stddev);
  bias_.Init(name + ".bias", 1, out);
}

Matrix Linear::Forward(const Matrix& x) const {
  Matrix y = x * weight_.value;
  y.rowwise() += bias_.value.row(0);
  return y;
}

Matrix Linear::Backward(const Matrix& x, const Matrix& dy) {
  weight_.grad.noalias() += x.transpose() * dy;
  bias_.grad.row(0) += dy.colwise().sum();
  return dy * weight_.value.transpose();
}

LayerNorm::LayerNorm(const std::string& name, int dim) {
  gamma_.Init(name + ".gamma", 1, dim);
  gamma_.value.setOnes();
  beta_.Init(name + ".beta", 1, dim);
}

Matrix LayerNorm::Forward(const Matrix& x, Cache* cache) const {
  const Eigen::Index rows = x.rows();
  const double dim = static_cast<double>(x.cols());
  Matrix normalized(rows, x.cols());
  Vector inv_std(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double mean = x.row(i).mean();
    const RowVector centered = x.row(i).array() - mean;
    const double var = centered.squaredNorm() / dim;
    inv_std(i) = 1.0 / std::sqrt(var + kEps);
    normalized.row(i) = centered * inv_std(i);
  }
  Matrix y = normalized.array().rowwise() * gamma_.value.row(0).array();
  y.rowwise() += beta_.value.row(0);
  if (cache != nullptr) {
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Matrix LayerNorm::Backward(const Cache& cache, const Matrix& dy) {
  gamma_.grad.row(0) += (dy.array() * cache.normalized.array()).colwise().sum().matrix();
  beta_.grad.row(0) += dy.colwise().sum();
  const Matrix dnorm = dy.array().rowwise() * gamma_.value.row(0).array();
  const double dim = static_cast<double>(dy.cols());
  Matrix dx(dy.rows(), dy.cols());
  for (Eigen::Index i = 0; i < dy.rows(); ++i) {
    const double sum = dnorm.row(i).sum();
    const double dot = dnorm.row(i).dot(cache.normalized.row(i));
    dx.row(i) = (cache.inv_std(i) / dim) *
                (dim * dnorm.row(i).array() - sum -
                 cache.normalized.row(i).array() * dot)
                    .matrix();
  }
  return dx;
}

namespace {
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluA = 0.044715;
}  // namespace

Matrix Gelu(const Matrix& x) {
  return x.unaryExpr([](double v) {
    return 0.5 * v * (1.0 + std::tanh(kGeluC * (v + kGeluA * v * v * v)));
  });
}

Matrix GeluBackward(const Matrix& x, const Matrix& dy) {
  const Matrix grad = x.unaryExpr([](double v) {
    const double t = std::tanh(kGeluC * (v + kGeluA * v * v * v));
    return 0.5 * (1.0 + t) +
           0.5 * v * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * v * v);
  });
  return grad.cwiseProduct(dy);
}

Matrix SoftmaxRows(const Matrix& scores) {
  Matrix out(scores.rows(), scores.cols());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double max = scores.row(i).maxCoeff();
    const RowVector e = (scores.row(i).array() - max).exp().matrix();
    out.row(i) = e / e.sum();
  }
  return out;
}

SelfAttention::SelfAttention(const std::string& name, int dim, int heads,
                             Rng& rng, double init_stddev)
    : heads_(heads),
      head_dim_(dim / heads),
      query_(name + ".query", dim, dim, rng, init_stddev),
      key_(name + ".key", dim, dim, rng, init_stddev),
      value_(name + ".value", dim, dim, rng, init_stddev),
      output_(name + ".output", dim, dim, rng, init_stddev) {
  if (heads <= 0 || dim % heads != 0) {
    throw Error(ErrorCode::kConfig, "dim must be divisible by the head count");
  }
}

Matrix SelfAttention::Forward(const Matrix& x, Cache* cache) const {
  const Matrix q = query_.Forward(x);
  const Matrix k = key_.Forward(x);
  const Matrix v = value_.Forward(x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim_));
  Matrix context(x.rows(), x.cols());
  std::vector<Matrix> weights;
  weights.reserve(heads_);
  for (int h = 0; h < heads_; ++h) {
    const auto cols = Eigen::seqN(h * head_dim_, head_dim_);
    Matrix a = SoftmaxRows(scale * q(Eigen::all, cols) *
                           k(Eigen::all, cols).transpose());
    context(Eigen::all, cols) = a * v(Eigen::all, cols);
    weights.push_back(std::move(a));
  }
  Matrix y = output_.Forward(context);
  if (cache != nullptr) {
    cache->input = x;
    cache->q = q;
    cache->k = k;
    cache->v = v;
    cache->weights = std::move(weights);
    cache->context = std::move(context);
  }
  return y;
}

Matrix SelfAttention::Backward(const Cache& cache, const Matrix& dy) {
  const Matrix dcontext = output_.Backward(cache.context, dy);
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim_));
  Matrix dq(cache.q.rows(), cache.q.cols());
  Matrix dk(cache.k.rows(), cache.k.cols());
  Matrix dv(cache.v.rows(), cache.v.cols());
  for (int h = 0; h < heads_; ++h) {
    const auto cols = Eigen::seqN(h * head_dim_, head_dim_);
    const Matrix& a = cache.weights[h];
    const Matrix dctx = dcontext(Eigen::all, cols);
    const Matrix da = dctx * cache.v(Eigen::all, cols).transpose();
    dv(Eigen::all, cols) = a.transpose() * dctx;
    // Softmax Jacobian, row by row: ds = a * (da - <da, a>).
    const Vector row_dot = (da.array() * a.array()).rowwise().sum();
    const Matrix ds = (a.array() * (da.colwise() - row_dot).array()).matrix();
    dq(Eigen::all, cols) = scale * ds * cache.k(Eigen::all, cols);
    dk(Eigen::all, cols) = scale * ds.transpose() * cache.q(Eigen::all, cols);
  }
  Matrix dx = query_.Backward(cache.input, dq);
  dx += key_.Backward(cache.input, dk);
  dx += value_.Backward(cache.input, dv);
  return dx;
}

void SelfAttention::Collect(ParamRefs& out) {
  query_.Collect(out);
  key_.Collect(out);
  value_.Collect(out);
  output_.Collect(out);
}

TransformerBlock::TransformerBlock(const std::string& name, int dim, int heads,
                                   int ffn_dim, Rng& rng, double init_stddev)
    : attention_(name + ".attention", dim, heads, rng, init_stddev),
      norm1_(name + ".norm1", dim),
      ffn_in_(name + ".ffn_in", dim, ffn_dim, rng, init_stddev),
      ffn_out_(name + ".ffn_out", ffn_dim, dim, rng, init_stddev),
      norm2_(name + ".norm2", dim) {}

Matrix TransformerBlock::Forward(const Matrix& x, Cache* cache) const {
  SelfAttention::Cache* attn_cache = cache ? &cache->attention : nullptr;
  LayerNorm::Cache* n1 = cache ? &cache->norm1 : nullptr;
  LayerNorm::Cache* n2 = cache ? &cache->norm2 : nullptr;

  Matrix hidden = norm1_.Forward(x + attention_.Forward(x, attn_cache), n1);
  Matrix inner = ffn_in_.Forward(hidden);
  Matrix act = Gelu(inner);
  Matrix y = norm2_.Forward(hidden + ffn_out_.Forward(act), n2);
  if (cache != nullptr) {
    cache->hidden = std::move(hidden);
    cache->ffn_inner = std::move(inner);
    cache->ffn_act = std::move(act);
  }
  return y;
}

Matrix TransformerBlock::Backward(const Cache& cache, const Matrix& dy) {
  const Matrix dsum2 = norm2_.Backward(cache.norm2, dy);
  const Matrix dact = ffn_out_.Backward(cache.ffn_act, dsum2);
  const Matrix dinner = GeluBackward(cache.ffn_inner, dact);
  const Matrix dhidden = dsum2 + ffn_in_.Backward(cache.hidden, dinner);
  const Matrix dsum1 = norm1_.Backward(cache.norm1, dhidden);
  return dsum1 + attention_.Backward(cache.attention, dsum1);
}

void TransformerBlock::Collect(ParamRefs& out) {
  attention_.Collect(out);
  norm1_.Collect(out);
  ffn_in_.Collect(out);
  ffn_out_.Collect(out);
  norm2_.Collect(out);
}

}  // namespace eae::nli
