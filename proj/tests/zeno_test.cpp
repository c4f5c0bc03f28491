// Copyright 2026 The ifp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ifp/zeno.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"

using namespace ifp;

namespace {

/// Pure-state oracle for a fully blocking object: rotate, project the object
/// arm away (its weight is absorbed), rotate.
RunOutcome blocked_amplitude_oracle(int n) {
  const double t = std::numbers::pi / (4.0 * n);
  double a0 = 1.0;
  double a1 = 0.0;
  double absorbed = 0.0;
  auto rotate = [&] {
    const double b0 = std::cos(t) * a0 - std::sin(t) * a1;
    const double b1 = std::sin(t) * a0 + std::cos(t) * a1;
    a0 = b0;
    a1 = b1;
  };
  for (int i = 0; i < n; ++i) {
    rotate();
    absorbed += a1 * a1;
    a1 = 0.0;
    rotate();
  }
  return {a1 * a1, a0 * a0, absorbed};
}

/// Explicit Kraus-sum evaluation of one object pass on a real 2x2 density
/// matrix plus sink.
struct RealState {
  double r00, r01, r11, absorbed;
};

RealState kraus_mixture(const RealState& s, double p) {
  // K0 = sqrt(1-p) I, K1 = sqrt(p) |0><0|, K2 = sqrt(p) |sink><1|.
  RealState out{};
  out.r00 = (1 - p) * s.r00 + p * s.r00;
  out.r01 = (1 - p) * s.r01;
  out.r11 = (1 - p) * s.r11;
  out.absorbed = s.absorbed + p * s.r11;
  return out;
}

RealState kraus_damping(const RealState& s, double p) {
  // K0 = diag(1, sqrt(1-p)), K1 = sqrt(p) |sink><1|.
  const double k = std::sqrt(1 - p);
  return {s.r00, k * s.r01, k * k * s.r11, s.absorbed + p * s.r11};
}

RunOutcome kraus_oracle(int n, double p, AbsorberModel v) {
  const double t = std::numbers::pi / (4.0 * n);
  const double c = std::cos(t);
  const double s = std::sin(t);
  RealState st{1, 0, 0, 0};
  auto rotate = [&] {
    const double r00 = c * c * st.r00 - 2 * c * s * st.r01 + s * s * st.r11;
    const double r11 = s * s * st.r00 + 2 * c * s * st.r01 + c * c * st.r11;
    const double r01 = c * s * st.r00 + (c * c - s * s) * st.r01 - c * s * st.r11;
    st.r00 = r00;
    st.r01 = r01;
    st.r11 = r11;
  };
  for (int i = 0; i < n; ++i) {
    rotate();
    st = v == AbsorberModel::Mixture ? kraus_mixture(st, p) : kraus_damping(st, p);
    rotate();
  }
  return {st.r11, st.r00, st.absorbed};
}

void expect_within_4_sigma(const OutcomeCounts& c, const RunOutcome& o) {
  const double n = static_cast<double>(c.total());
  const std::array<std::pair<std::uint64_t, double>, 3> pairs{
      {{c.d0, o.p_d0}, {c.d1, o.p_d1}, {c.absorbed, o.p_abs}}};
  for (const auto& [count, prob] : pairs) {
    const double sigma = std::sqrt(std::max(prob * (1 - prob), 0.0) / n);
    EXPECT_LE(std::abs(static_cast<double>(count) / n - prob), 4 * sigma + 1e-12)
        << "count " << count << " expected probability " << prob;
  }
}

}  // namespace

TEST(BeamsplitterRotation, examples) {
  EXPECT_TRUE(beamsplitter_rotation(0).isApprox(Eigen::Matrix2d::Identity()));
  const double r = std::sqrt(0.5);
  Eigen::Matrix2d q;
  q << r, -r, r, r;
  EXPECT_LT((beamsplitter_rotation(std::numbers::pi / 4) - q).norm(), 1e-15);
  Eigen::Matrix2d h;
  h << 0, -1, 1, 0;
  EXPECT_LT((beamsplitter_rotation(std::numbers::pi / 2) - h).norm(), 1e-15);
}

TEST(ObjectChannel, zero_block_is_identity) {
  PathState s = PathState::initial();
  s.rho << 0.3, 0.2, 0.2, 0.7;
  for (AbsorberModel v : kAllAbsorberModels) {
    const PathState out = object_channel(s, 0.0, v);
    EXPECT_EQ(out.rho, s.rho);
    EXPECT_EQ(out.absorbed, 0.0);
  }
}

TEST(ObjectChannel, full_block_on_diagonal_state) {
  PathState s;
  s.rho << 0.5, 0, 0, 0.5;
  for (AbsorberModel v : {AbsorberModel::Mixture, AbsorberModel::Damping}) {
    const PathState out = object_channel(s, 1.0, v);
    EXPECT_DOUBLE_EQ(out.rho(0, 0).real(), 0.5);
    EXPECT_DOUBLE_EQ(out.rho(1, 1).real(), 0.0);
    EXPECT_DOUBLE_EQ(out.absorbed, 0.5);
  }
}

TEST(ObjectChannel, mixture_half_block_on_superposition) {
  PathState s;
  s.rho << 0.5, 0.5, 0.5, 0.5;
  const PathState out = object_channel(s, 0.5, AbsorberModel::Mixture);
  const RealState k = kraus_mixture({0.5, 0.5, 0.5, 0.0}, 0.5);
  EXPECT_DOUBLE_EQ(out.rho(0, 1).real(), 0.25);  // halved
  EXPECT_DOUBLE_EQ(out.rho(1, 1).real(), 0.25);
  EXPECT_DOUBLE_EQ(out.absorbed, 0.25);
  EXPECT_DOUBLE_EQ(out.rho(0, 0).real(), k.r00);
  EXPECT_DOUBLE_EQ(out.rho(0, 1).real(), k.r01);
}

TEST(ObjectChannel, rejects_bad_probability) {
  EXPECT_THROW(object_channel(PathState::initial(), 1.5, AbsorberModel::Mixture), DomainError);
  EXPECT_THROW(object_channel(PathState::initial(), -0.1, AbsorberModel::Damping), DomainError);
}

TEST(RunProtocol, unblocked_photon_reaches_d0) {
  for (AbsorberModel v : kAllAbsorberModels) {
    const RunOutcome o = run_protocol({7, 0.0, v});
    EXPECT_NEAR(o.p_d0, 1.0, 1e-12);
    EXPECT_NEAR(o.p_d1, 0.0, 1e-12);
    EXPECT_EQ(o.p_abs, 0.0);
  }
}

TEST(RunProtocol, single_cycle_full_block) {
  for (AbsorberModel v : kAllAbsorberModels) {
    const RunOutcome o = run_protocol({1, 1.0, v});
    EXPECT_NEAR(o.p_d0, 0.25, 1e-15);
    EXPECT_NEAR(o.p_d1, 0.25, 1e-15);
    EXPECT_NEAR(o.p_abs, 0.5, 1e-15);
  }
}

TEST(RunProtocol, full_block_matches_pure_state_oracle) {
  for (int n = 1; n <= 200; ++n) {
    const RunOutcome a = run_protocol({n, 1.0, AbsorberModel::Mixture});
    const RunOutcome b = blocked_amplitude_oracle(n);
    EXPECT_NEAR(a.p_d0, b.p_d0, 1e-12) << n;
    EXPECT_NEAR(a.p_d1, b.p_d1, 1e-12) << n;
    EXPECT_NEAR(a.p_abs, b.p_abs, 1e-12) << n;
  }
}

TEST(RunProtocol, matches_kraus_oracle) {
  for (AbsorberModel v : {AbsorberModel::Mixture, AbsorberModel::Damping}) {
    for (int n : {1, 2, 5, 13, 40}) {
      for (double p : {0.05, 0.3, 0.5, 0.77, 0.99}) {
        const RunOutcome a = run_protocol({n, p, v});
        const RunOutcome b = kraus_oracle(n, p, v);
        EXPECT_NEAR(a.p_d0, b.p_d0, 1e-12);
        EXPECT_NEAR(a.p_d1, b.p_d1, 1e-12);
        EXPECT_NEAR(a.p_abs, b.p_abs, 1e-12);
      }
    }
  }
}

TEST(RunProtocol, runwise_is_mixture_of_endpoints) {
  const RunOutcome blocked = blocked_amplitude_oracle(9);
  const RunOutcome o = run_protocol({9, 0.3, AbsorberModel::Runwise});
  EXPECT_NEAR(o.p_abs, 0.3 * blocked.p_abs, 1e-12);
  EXPECT_NEAR(o.p_d1, 0.3 * blocked.p_d1, 1e-12);
  EXPECT_NEAR(o.p_d0, 0.7 + 0.3 * blocked.p_d0, 1e-12);
}

TEST(RunProtocol, zeno_suppression_at_large_n) {
  const RunOutcome o = run_protocol({100, 1.0, AbsorberModel::Mixture});
  EXPECT_LT(o.p_abs, 0.03);
  EXPECT_GT(o.p_d1, 0.95);
  EXPECT_LT(discrimination_signal({100, 1.0, AbsorberModel::Mixture}), -0.9);
}

TEST(RunProtocol, conservation_and_positivity_grid) {
  for (AbsorberModel v : kAllAbsorberModels) {
    for (int n = 1; n <= 32; ++n) {
      for (int i = 0; i <= 10; ++i) {
        const RunOutcome o = run_protocol({n, i / 10.0, v});
        EXPECT_NEAR(o.p_d0 + o.p_d1 + o.p_abs, 1.0, 1e-9);
        for (double x : {o.p_d0, o.p_d1, o.p_abs}) {
          EXPECT_GE(x, -1e-12);
          EXPECT_LE(x, 1.0 + 1e-12);
        }
      }
    }
  }
}

TEST(RunProtocol, path_state_stays_physical) {
  // Track the density matrix directly through a mixed-channel run.
  for (AbsorberModel v : {AbsorberModel::Mixture, AbsorberModel::Damping}) {
    const int n = 12;
    const Eigen::Matrix2cd bs = beamsplitter_rotation(std::numbers::pi / (4.0 * n)).cast<std::complex<double>>();
    PathState s = PathState::initial();
    for (int i = 0; i < n; ++i) {
      s.rho = bs * s.rho * bs.adjoint();
      s = object_channel(s, 0.37, v);
      s.rho = bs * s.rho * bs.adjoint();
      EXPECT_NEAR(s.trace() + s.absorbed, 1.0, 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(s.rho);
      EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
    }
  }
}

TEST(RunProtocol, unblocked_determinism_to_128_cycles) {
  for (int n = 1; n <= 128; ++n) EXPECT_NEAR(run_protocol({n, 0.0}).p_d0, 1.0, 1e-9);
}

TEST(RunProtocol, absorption_halves_when_cycles_double) {
  for (int n = 2; n <= 64; n *= 2) {
    EXPECT_LT(run_protocol({2 * n, 1.0}).p_abs, run_protocol({n, 1.0}).p_abs);
  }
}

TEST(RunProtocol, variants_agree_exactly_at_endpoints) {
  for (int n : {1, 3, 17, 64}) {
    for (double p : {0.0, 1.0}) {
      const RunOutcome m = run_protocol({n, p, AbsorberModel::Mixture});
      for (AbsorberModel v : {AbsorberModel::Damping, AbsorberModel::Runwise}) {
        const RunOutcome o = run_protocol({n, p, v});
        EXPECT_EQ(o.p_d0, m.p_d0);
        EXPECT_EQ(o.p_d1, m.p_d1);
        EXPECT_EQ(o.p_abs, m.p_abs);
      }
    }
  }
}

TEST(RunProtocol, rejects_invalid_params) {
  EXPECT_THROW(run_protocol({0, 0.5}), DomainError);
  EXPECT_THROW(run_protocol({3, 1.01}), DomainError);
}

TEST(DiscriminationSignal, examples_and_monotonicity) {
  for (int n : {1, 5, 50}) EXPECT_NEAR(discrimination_signal({n, 0.0}), 1.0, 1e-12);
  EXPECT_NEAR(discrimination_signal({1, 1.0}), 0.0, 1e-15);
  for (AbsorberModel v : kAllAbsorberModels) {
    for (int n = 1; n <= 32; ++n) {
      double prev = discrimination_signal({n, 0.0, v});
      for (int i = 1; i <= 20; ++i) {
        const double cur = discrimination_signal({n, i * 0.05 > 1.0 ? 1.0 : i * 0.05, v});
        EXPECT_LE(cur, prev + 1e-12) << "n=" << n << " variant=" << to_string(v);
        prev = cur;
      }
    }
  }
}

TEST(PerCycleBlockProbability, double_pass) {
  EXPECT_DOUBLE_EQ(per_cycle_block_probability(0.0), 0.0);
  EXPECT_DOUBLE_EQ(per_cycle_block_probability(1.0), 1.0);
  EXPECT_DOUBLE_EQ(per_cycle_block_probability(0.5), 0.75);
  EXPECT_THROW(per_cycle_block_probability(2.0), DomainError);
}

TEST(RunProtocolMc, unblocked_counts) {
  const OutcomeCounts c = run_protocol_mc({3, 0.0}, 1000, 42);
  EXPECT_EQ(c.d0, 1000u);
  EXPECT_EQ(c.d1, 0u);
  EXPECT_EQ(c.absorbed, 0u);
}

TEST(RunProtocolMc, single_cycle_full_block) {
  for (AbsorberModel v : kAllAbsorberModels) {
    const OutcomeCounts c = run_protocol_mc({1, 1.0, v}, 100000, 1);
    EXPECT_EQ(c.total(), 100000u);
    expect_within_4_sigma(c, run_protocol({1, 1.0, v}));
  }
}

TEST(RunProtocolMc, partial_block_matches_analytic) {
  for (AbsorberModel v : kAllAbsorberModels) {
    const OutcomeCounts c = run_protocol_mc({20, 0.5, v}, 100000, 7);
    expect_within_4_sigma(c, run_protocol({20, 0.5, v}));
  }
}

TEST(RunProtocolMc, deterministic_and_order_independent) {
  const ZenoParams params{6, 0.4, AbsorberModel::Damping};
  EXPECT_EQ(run_protocol_mc(params, 5000, 99), run_protocol_mc(params, 5000, 99));
  EXPECT_NE(run_protocol_mc(params, 5000, 99), run_protocol_mc(params, 5000, 100));
  // Trials are addressed by index: replaying them in reverse gives the same counts.
  OutcomeCounts reversed;
  for (std::uint64_t t = 5000; t-- > 0;) {
    CounterRng rng = CounterRng::stream(99, {t});
    switch (run_trial(params, rng)) {
      case TrialResult::D0: ++reversed.d0; break;
      case TrialResult::D1: ++reversed.d1; break;
      case TrialResult::Absorbed: ++reversed.absorbed; break;
    }
  }
  EXPECT_EQ(reversed, run_protocol_mc(params, 5000, 99));
}

TEST(RunProtocolMc, rejects_zero_trials) {
  EXPECT_THROW(run_protocol_mc({1, 0.0}, 0, 1), DomainError);
}
