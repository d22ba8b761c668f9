#pragma once

// Reference implementations written with plain loops over the recursive tree,
// sharing nothing with the library's batched engine.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "causality/rntn.hpp"

namespace oracle {

using Vec = std::vector<double>;

template <class T>
struct BasicResult {
  std::vector<std::vector<T>> vectors;  // post-order
  T loss = 0;
};
using Result = BasicResult<double>;

template <class T>
T log_softmax_at(const std::vector<T>& logits, int gold) {
  T m = logits[0];
  for (T v : logits) m = std::max(m, v);
  T s = 0;
  for (T v : logits) s += std::exp(v - m);
  return logits[static_cast<std::size_t>(gold)] - m - std::log(s);
}

template <class T>
std::vector<T> logits_of(const Eigen::MatrixXd& C, const std::vector<T>& p) {
  std::vector<T> out(static_cast<std::size_t>(C.rows()), T(0));
  for (Eigen::Index l = 0; l < C.rows(); ++l)
    for (Eigen::Index i = 0; i < C.cols(); ++i) out[static_cast<std::size_t>(l)] += T(C(l, i)) * p[static_cast<std::size_t>(i)];
  return out;
}

// Full tensor network: p_k = tanh(sum_ij x_i V_k(i,j) x_j + sum_i W(k,i) x_i).
// T = long double gives a finite-difference reference with less round-off.
template <class T>
class BasicRntn {
 public:
  BasicRntn(const causality::RntnParams& params, const std::vector<int>& rows) : p_(params), rows_(rows) {}

  BasicResult<T> run(const causality::ParseTree& tree) {
    result_ = {};
    leaf_ = 0;
    visit(tree);
    return result_;
  }

 private:
  std::vector<T> visit(const causality::ParseTree& t) {
    const int d = p_.d;
    std::vector<T> p(static_cast<std::size_t>(d));
    if (t.is_leaf()) {
      const int row = rows_[static_cast<std::size_t>(leaf_++)];
      for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = p_.embeddings.vectors(i, row);
    } else {
      const auto a = visit(t.left());
      const auto b = visit(t.right());
      std::vector<T> x(a);
      x.insert(x.end(), b.begin(), b.end());
      for (int k = 0; k < d; ++k) {
        T z = 0;
        for (int i = 0; i < 2 * d; ++i) {
          z += T(p_.W(k, i)) * x[static_cast<std::size_t>(i)];
          for (int j = 0; j < 2 * d; ++j)
            z += x[static_cast<std::size_t>(i)] * T(p_.V(i, 2 * d * k + j)) * x[static_cast<std::size_t>(j)];
        }
        p[static_cast<std::size_t>(k)] = std::tanh(z);
      }
    }
    result_.loss -= log_softmax_at(logits_of(p_.C, p), causality::label_index(t.label()));
    result_.vectors.push_back(p);
    return p;
  }

  const causality::RntnParams& p_;
  const std::vector<int>& rows_;
  BasicResult<T> result_;
  int leaf_ = 0;
};

using Rntn = BasicRntn<double>;

// Plain recursive network, p = tanh(W [a; b]), with no tensor at all.
inline Result vanilla(const causality::ParseTree& tree, const Eigen::MatrixXd& W, const Eigen::MatrixXd& C,
                      const Eigen::MatrixXd& E, const std::vector<int>& rows) {
  Result r;
  int leaf = 0;
  std::function<Vec(const causality::ParseTree&)> go = [&](const causality::ParseTree& t) {
    const auto d = static_cast<std::size_t>(W.rows());
    Vec p(d, 0.0);
    if (t.is_leaf()) {
      const int row = rows[static_cast<std::size_t>(leaf++)];
      for (std::size_t i = 0; i < d; ++i) p[i] = E(static_cast<Eigen::Index>(i), row);
    } else {
      const Vec a = go(t.left());
      const Vec b = go(t.right());
      for (std::size_t k = 0; k < d; ++k) {
        double z = 0.0;
        for (std::size_t i = 0; i < d; ++i)
          z += W(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * a[i] +
               W(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d + i)) * b[i];
        p[k] = std::tanh(z);
      }
    }
    r.loss -= log_softmax_at(logits_of(C, p), causality::label_index(t.label()));
    r.vectors.push_back(p);
    return p;
  };
  go(tree);
  return r;
}

// Central differences of `loss` with respect to every entry of `m`.
template <class Loss>
Eigen::MatrixXd numeric_gradient(Eigen::MatrixXd& m, Loss&& loss, double eps) {
  using T = decltype(loss());
  Eigen::MatrixXd g(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double saved = m.data()[i];
    m.data()[i] = saved + eps;
    const double hi = m.data()[i];
    const T up = loss();
    m.data()[i] = saved - eps;
    const double lo = m.data()[i];
    const T down = loss();
    m.data()[i] = saved;
    g.data()[i] = static_cast<double>((up - down) / (T(hi) - T(lo)));
  }
  return g;
}

// |a - n| / max(|a|, |n|, floor), the worst entry.
inline double max_relative_error(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& numeric, double floor) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    const double a = analytic.data()[i];
    const double n = numeric.data()[i];
    worst = std::max(worst, std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor}));
  }
  return worst;
}

}  // namespace oracle
