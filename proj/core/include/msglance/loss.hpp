#pragma once

#include <cstddef>
#include <functional>

#include "msglance/image.hpp"

namespace msglance {

/// A scalar loss and its gradient with respect to the predicted image.
struct LossResult {
  double loss = 0.0;
  Image grad;
};

/// mean |pred - ref|; the gradient uses sign(0) = 0.
LossResult l1_loss(const Image& ref, const Image& pred);

/// mean (pred - ref)^2.
LossResult l2_loss(const Image& ref, const Image& pred);

bool all_finite(const LossResult& result) noexcept;

/// Replaces a non-finite loss or gradient with a fallback (L1 in training) and
/// counts how often that happened.
class NanGuard {
 public:
  LossResult apply(LossResult primary, const std::function<LossResult()>& fallback);

  std::size_t fallbacks() const noexcept { return fallbacks_; }

 private:
  std::size_t fallbacks_ = 0;
};

}  // namespace msglance
