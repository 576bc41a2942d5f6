#include "msglance/loss.hpp"

#include <cmath>

namespace msglance {

LossResult l1_loss(const Image& ref, const Image& pred) {
  require_same_shape(ref, pred, "l1_loss");
  LossResult out{0.0, Image(pred.height(), pred.width(), pred.channels())};
  auto r = ref.data();
  auto p = pred.data();
  auto g = out.grad.data();
  const double inv_n = 1.0 / static_cast<double>(p.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - r[i];
    sum += std::abs(d);
    g[i] = d > 0.0 ? inv_n : (d < 0.0 ? -inv_n : 0.0);
  }
  out.loss = sum * inv_n;
  return out;
}

LossResult l2_loss(const Image& ref, const Image& pred) {
  require_same_shape(ref, pred, "l2_loss");
  LossResult out{0.0, Image(pred.height(), pred.width(), pred.channels())};
  auto r = ref.data();
  auto p = pred.data();
  auto g = out.grad.data();
  const double inv_n = 1.0 / static_cast<double>(p.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - r[i];
    sum += d * d;
    g[i] = 2.0 * d * inv_n;
  }
  out.loss = sum * inv_n;
  return out;
}

bool all_finite(const LossResult& result) noexcept {
  if (!std::isfinite(result.loss)) return false;
  for (double v : result.grad.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

LossResult NanGuard::apply(LossResult primary, const std::function<LossResult()>& fallback) {
  if (all_finite(primary)) return primary;
  ++fallbacks_;
  return fallback();
}

}  // namespace msglance
