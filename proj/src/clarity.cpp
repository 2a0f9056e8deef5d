/*
 * Copyright 2026 The clarityfuse authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "clarityfuse/clarity.hpp"

#include <cmath>
#include <stdexcept>

namespace clarityfuse {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

void check_dims(std::size_t w_dim, std::size_t x_dim, std::size_t bank_dim) {
  if (w_dim != bank_dim || x_dim != bank_dim) {
    throw std::invalid_argument("clarity: dimension mismatch (weights " +
                                std::to_string(w_dim) + ", instance " +
                                std::to_string(x_dim) + ", bank " +
                                std::to_string(bank_dim) + ")");
  }
}

// Logistic in the stable branch: never exponentiates a positive argument.
double logistic(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

SigmoidSharpness::SigmoidSharpness(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("sigmoid sharpness alpha must be finite and > 0");
  }
}

int indicator_exact(double t) { return t >= 0.0 ? 1 : 0; }

double sigmoid(double t, SigmoidSharpness alpha) {
  return logistic(alpha.value() * t);
}

double relevance_exact(const ScoreVector& x_u, std::span<const double> w,
                       const TrainingBank& bank) {
  check_dims(w.size(), x_u.dim(), bank.dim());
  const double s_u = dot(w, x_u.span());
  std::size_t count = 0;
  for (const ScoreVector& x : bank.negatives()) {
    count += indicator_exact(dot(w, x.span()) - s_u);
  }
  return static_cast<double>(count) / static_cast<double>(bank.num_negatives());
}

double irrelevance_exact(const ScoreVector& x_u, std::span<const double> w,
                         const TrainingBank& bank) {
  check_dims(w.size(), x_u.dim(), bank.dim());
  const double s_u = dot(w, x_u.span());
  std::size_t count = 0;
  for (const ScoreVector& x : bank.positives()) {
    count += indicator_exact(s_u - dot(w, x.span()));
  }
  return static_cast<double>(count) / static_cast<double>(bank.num_positives());
}

double clarity_exact(const ScoreVector& x_u, std::span<const double> w,
                     const TrainingBank& bank) {
  return std::fabs(relevance_exact(x_u, w, bank) - irrelevance_exact(x_u, w, bank));
}

double relevance_smooth(const ScoreVector& x_u, std::span<const double> w,
                        const TrainingBank& bank, SigmoidSharpness alpha) {
  return ClarityEvaluator(x_u, bank, alpha).relevance(w);
}

double irrelevance_smooth(const ScoreVector& x_u, std::span<const double> w,
                          const TrainingBank& bank, SigmoidSharpness alpha) {
  return ClarityEvaluator(x_u, bank, alpha).irrelevance(w);
}

double rcl_smooth(const ScoreVector& x_u, std::span<const double> w,
                  const TrainingBank& bank, SigmoidSharpness alpha) {
  return ClarityEvaluator(x_u, bank, alpha).rcl(w);
}

std::vector<double> rcl_gradient(const ScoreVector& x_u, std::span<const double> w,
                                 const TrainingBank& bank, SigmoidSharpness alpha) {
  ClarityEvaluator eval(x_u, bank, alpha);
  std::vector<double> g(eval.dim(), 0.0);
  eval.gradient(w, g);
  return g;
}

ClarityEvaluator::ClarityEvaluator(const ScoreVector& x_u, const TrainingBank& bank,
                                   SigmoidSharpness alpha)
    : m_(bank.dim()),
      n_neg_(bank.num_negatives()),
      n_pos_(bank.num_positives()),
      alpha_(alpha.value()) {
  validate_scores(x_u, "test score vector");
  if (x_u.dim() != m_) {
    throw std::invalid_argument("clarity: instance dimension " +
                                std::to_string(x_u.dim()) + " does not match bank " +
                                std::to_string(m_));
  }
  neg_diffs_.resize(n_neg_ * m_);
  for (std::size_t i = 0; i < n_neg_; ++i) {
    const auto& x = bank.negatives()[i].values;
    for (std::size_t j = 0; j < m_; ++j) {
      neg_diffs_[i * m_ + j] = x[j] - x_u.values[j];
    }
  }
  pos_diffs_.resize(n_pos_ * m_);
  for (std::size_t i = 0; i < n_pos_; ++i) {
    const auto& x = bank.positives()[i].values;
    for (std::size_t j = 0; j < m_; ++j) {
      pos_diffs_[i * m_ + j] = x_u.values[j] - x[j];
    }
  }
}

double ClarityEvaluator::relevance(std::span<const double> w) const {
  if (w.size() != m_) {
    throw std::invalid_argument("clarity: weight dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n_neg_; ++i) {
    s += logistic(alpha_ * dot(w, std::span(neg_diffs_).subspan(i * m_, m_)));
  }
  return s / static_cast<double>(n_neg_);
}

double ClarityEvaluator::irrelevance(std::span<const double> w) const {
  if (w.size() != m_) {
    throw std::invalid_argument("clarity: weight dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n_pos_; ++i) {
    s += logistic(alpha_ * dot(w, std::span(pos_diffs_).subspan(i * m_, m_)));
  }
  return s / static_cast<double>(n_pos_);
}

double ClarityEvaluator::rcl(std::span<const double> w) const {
  return relevance(w) - irrelevance(w);
}

void ClarityEvaluator::gradient(std::span<const double> w, std::span<double> out) const {
  if (w.size() != m_ || out.size() != m_) {
    throw std::invalid_argument("clarity: gradient dimension mismatch");
  }
  for (std::size_t j = 0; j < m_; ++j) {
    out[j] = 0.0;
  }
  const double neg_scale = alpha_ / static_cast<double>(n_neg_);
  for (std::size_t i = 0; i < n_neg_; ++i) {
    const auto row = std::span(neg_diffs_).subspan(i * m_, m_);
    const double s = logistic(alpha_ * dot(w, row));
    const double coef = neg_scale * s * (1.0 - s);
    for (std::size_t j = 0; j < m_; ++j) {
      out[j] += coef * row[j];
    }
  }
  const double pos_scale = alpha_ / static_cast<double>(n_pos_);
  for (std::size_t i = 0; i < n_pos_; ++i) {
    const auto row = std::span(pos_diffs_).subspan(i * m_, m_);
    const double s = logistic(alpha_ * dot(w, row));
    const double coef = pos_scale * s * (1.0 - s);
    for (std::size_t j = 0; j < m_; ++j) {
      out[j] -= coef * row[j];
    }
  }
}

}  // namespace clarityfuse
