/*
 * Copyright 2026 The amu-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "amu/common.hpp"

namespace amu {

using Rng = std::mt19937_64;

/// Far-memory access latency model. All parameters are nanoseconds except
/// LogNormal's mu/sigma, which describe ln(latency_ns).
struct LatencyDistribution {
  enum class Kind { Constant, Uniform, Bimodal, LogNormal };

  Kind kind = Kind::Constant;
  TimeNs value = 0;           // Constant
  TimeNs lo = 0, hi = 0;      // Uniform, inclusive
  double p_high = 0.0;        // Bimodal: probability of drawing from `high`
  std::shared_ptr<const LatencyDistribution> low, high;
  double mu = 0.0, sigma = 0.0;  // LogNormal
  TimeNs clamp_lo = 0, clamp_hi = 0;

  static LatencyDistribution constant(TimeNs v) {
    LatencyDistribution d;
    d.kind = Kind::Constant;
    d.value = v;
    return d;
  }

  static LatencyDistribution uniform(TimeNs lo, TimeNs hi) {
    LatencyDistribution d;
    d.kind = Kind::Uniform;
    d.lo = lo;
    d.hi = hi;
    return d;
  }

  static LatencyDistribution bimodal(double p_high, LatencyDistribution low, LatencyDistribution high) {
    LatencyDistribution d;
    d.kind = Kind::Bimodal;
    d.p_high = p_high;
    d.low = std::make_shared<const LatencyDistribution>(std::move(low));
    d.high = std::make_shared<const LatencyDistribution>(std::move(high));
    return d;
  }

  static LatencyDistribution lognormal(double mu, double sigma, TimeNs clamp_lo, TimeNs clamp_hi) {
    LatencyDistribution d;
    d.kind = Kind::LogNormal;
    d.mu = mu;
    d.sigma = sigma;
    d.clamp_lo = clamp_lo;
    d.clamp_hi = clamp_hi;
    return d;
  }

  void validate() const {
    switch (kind) {
      case Kind::Constant:
        return;
      case Kind::Uniform:
        if (lo > hi) fail(Errc::BadParams, "uniform lo " + std::to_string(lo) + " > hi " + std::to_string(hi));
        return;
      case Kind::Bimodal:
        if (!(p_high >= 0.0 && p_high <= 1.0)) fail(Errc::BadParams, "bimodal p must be in [0, 1]");
        if (!low || !high) fail(Errc::BadParams, "bimodal needs both modes");
        low->validate();
        high->validate();
        return;
      case Kind::LogNormal:
        if (!(sigma >= 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) {
          fail(Errc::BadParams, "lognormal needs finite mu and sigma >= 0");
        }
        if (clamp_lo > clamp_hi) fail(Errc::BadParams, "lognormal clamp_lo > clamp_hi");
        return;
    }
  }

  TimeNs min_value() const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Uniform: return lo;
      case Kind::Bimodal: return std::min(low->min_value(), high->min_value());
      case Kind::LogNormal: return clamp_lo;
    }
    return 0;
  }

  TimeNs max_value() const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Uniform: return hi;
      case Kind::Bimodal: return std::max(low->max_value(), high->max_value());
      case Kind::LogNormal: return clamp_hi;
    }
    return 0;
  }

  // Same shape with every latency multiplied by `factor`.
  LatencyDistribution scaled(double factor) const {
    if (!(factor > 0.0)) fail(Errc::BadParams, "latency scale must be > 0");
    auto s = [factor](TimeNs v) { return static_cast<TimeNs>(std::llround(static_cast<double>(v) * factor)); };
    switch (kind) {
      case Kind::Constant: return constant(s(value));
      case Kind::Uniform: return uniform(s(lo), s(hi));
      case Kind::Bimodal: return bimodal(p_high, low->scaled(factor), high->scaled(factor));
      case Kind::LogNormal: return lognormal(mu + std::log(factor), sigma, s(clamp_lo), s(clamp_hi));
    }
    return *this;
  }
};

/// Draws one latency. Pure in (distribution, rng state).
inline TimeNs sample_latency(const LatencyDistribution& d, Rng& rng) {
  using Kind = LatencyDistribution::Kind;
  d.validate();
  switch (d.kind) {
    case Kind::Constant:
      return d.value;
    case Kind::Uniform: {
      std::uniform_int_distribution<TimeNs> u(d.lo, d.hi);
      return u(rng);
    }
    case Kind::Bimodal: {
      std::bernoulli_distribution pick(d.p_high);
      return pick(rng) ? sample_latency(*d.high, rng) : sample_latency(*d.low, rng);
    }
    case Kind::LogNormal: {
      double x = std::exp(d.mu);
      if (d.sigma > 0.0) x = std::lognormal_distribution<double>(d.mu, d.sigma)(rng);
      x = std::round(x);
      const double c = std::clamp(x, static_cast<double>(d.clamp_lo), static_cast<double>(d.clamp_hi));
      return static_cast<TimeNs>(c);
    }
  }
  return 0;
}

}  // namespace amu
