#include <cmath>
#include <string>

#include "gini/error.hpp"
#include "gini/kernels.hpp"

namespace gini {

namespace {

void check_finite(const std::vector<BivariateObs>& obs) {
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!std::isfinite(obs[i].x) || !std::isfinite(obs[i].y))
      throw NonFiniteValue("observation " + std::to_string(i) + " is not finite");
  }
}

}  // namespace

BivariateSample::BivariateSample(std::vector<BivariateObs> obs) : obs_(std::move(obs)) {
  check_finite(obs_);
}

BivariateSample::BivariateSample(std::initializer_list<BivariateObs> obs) : obs_(obs) {
  check_finite(obs_);
}

BivariateSample::BivariateSample(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("x and y columns differ in length");
  obs_.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) obs_.push_back({xs[i], ys[i]});
  check_finite(obs_);
}

std::vector<double> BivariateSample::xs() const {
  std::vector<double> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.push_back(o.x);
  return out;
}

std::vector<double> BivariateSample::ys() const {
  std::vector<double> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.push_back(o.y);
  return out;
}

BivariateSample BivariateSample::swapped() const {
  BivariateSample out;
  out.obs_.reserve(obs_.size());
  for (const auto& o : obs_) out.obs_.push_back(o.swapped());
  return out;
}

BivariateSample BivariateSample::without(std::size_t i) const {
  if (i >= obs_.size()) throw IndexOutOfRange("index " + std::to_string(i) + " out of range");
  BivariateSample out;
  out.obs_.reserve(obs_.size() - 1);
  for (std::size_t j = 0; j < obs_.size(); ++j)
    if (j != i) out.obs_.push_back(obs_[j]);
  return out;
}

}  // namespace gini
