// Copyright 2026 The qinv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qinv/block_invariants.hpp"
#include "qinv/dephasing.hpp"
#include "qinv/errors.hpp"
#include "qinv/pauli.hpp"

namespace qinv {
namespace {

using testing::max_abs;
using dephasing::BlochCoefficients;

dephasing::TwoQubitModel demo_model(double gamma = 0.05, double g = 1.0, double bz = 1.0) {
  dephasing::DephasingScenario s;
  s.g12 = CoefficientSchedule::constant(g);
  s.bz = CoefficientSchedule::constant(bz);
  s.gamma = gamma;
  return dephasing::build_two_qubit_model(s);
}

Operator columns(std::initializer_list<int> indices, int dim) {
  Operator v = Operator::Zero(dim, static_cast<int>(indices.size()));
  int c = 0;
  for (int i : indices) v(i, c++) = 1.0;
  return v;
}

// DFS {e0, e1}, complement {e2, e3}; F has c = 0, a generic A block and a
// generic B block; H is block diagonal. The DFS condition holds with A != 0.
struct LeakyModel {
  LindbladModel model;
  DfsDecomposition decomposition;
};

LeakyModel leaky_model() {
  testing::Rng rng(61);
  Operator f = Operator::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 2; j < 4; ++j) f(i, j) = Complex(rng.normal(), rng.normal()) * 0.5;
  Operator h = Operator::Zero(4, 4);
  h.topLeftCorner(2, 2) = rng.hermitian(2);
  h.bottomRightCorner(2, 2) = rng.hermitian(2);
  LindbladModel m(4, {{h, CoefficientSchedule::sinusoid(0.4, 1.5, 0.0, 1.0)}},
                  {{f, CoefficientSchedule::constant(0.2)}});
  DfsDecomposition d(SubspaceBasis(columns({0, 1}, 4)), SubspaceBasis(columns({2, 3}, 4)), {Complex(0.0)});
  d = block_decompose(m, d, Operator::Zero(4, 4), 0.0);
  return {std::move(m), std::move(d)};
}

TEST(PropagateID, IdentityIsConstant) {
  const auto tq = demo_model();
  const auto tr = propagate_ID(static_block_schedule(tq.model, tq.decomposition), pauli::identity(2), {1.0, 100});
  for (const auto& op : tr.invariants()) EXPECT_LE(max_abs(op - pauli::identity(2)), 1e-15);
}

TEST(PropagateID, RotationAboutX) {
  const double g = 1.3;
  const auto tq = demo_model(0.05, g);
  const BlochCoefficients c0{0.3, 0.6, -0.5};
  const TimeGrid grid{2.0, 4000};
  const auto tr = propagate_ID(static_block_schedule(tq.model, tq.decomposition), c0.to_operator(), grid);
  const double r0 = std::hypot(c0.y, c0.z);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto c = BlochCoefficients::from_operator(tr.at(k));
    EXPECT_NEAR(c.x, c0.x, 1e-9);
    EXPECT_NEAR(std::hypot(c.y, c.z), r0, 1e-8);
    // Library convention: (y, z) turns counterclockwise by 2 Lambda.
    const double angle = std::atan2(c.z, c.y) - std::atan2(c0.z, c0.y);
    const double expected = 2.0 * g * tr.times()[k];
    EXPECT_NEAR(std::remainder(angle - expected, 2.0 * M_PI), 0.0, 1e-6);
  }
}

TEST(PropagateID, SpectrumConserved) {
  const auto tq = demo_model();
  testing::Rng rng(62);
  const Operator id0 = rng.hermitian(2);
  const auto tr = propagate_ID(static_block_schedule(tq.model, tq.decomposition), id0, {2.0, 4000});
  const auto& v0 = tr.eigensystems().front().values;
  for (const auto& es : tr.eigensystems()) {
    for (std::size_t j = 0; j < es.size(); ++j) EXPECT_NEAR(es.values[j], v0[j], 1e-8);
  }
  for (const auto& op : tr.invariants()) EXPECT_NEAR(op.trace().real(), id0.trace().real(), 1e-12);
}

TEST(PropagateID, DimensionMismatch) {
  const auto tq = demo_model();
  EXPECT_THROW(propagate_ID(static_block_schedule(tq.model, tq.decomposition), pauli::identity(3), {1.0, 10}),
               InvalidInput);
}

TEST(PropagateIC, ZeroGeneratorIsConstant) {
  Operator h = Operator::Zero(4, 4);
  h.topLeftCorner(2, 2) = pauli::x();
  const LindbladModel m(4, {{h, CoefficientSchedule::constant(1.0)}}, {});
  DfsDecomposition d(SubspaceBasis(columns({0, 1}, 4)), SubspaceBasis(columns({2, 3}, 4)), {});
  const BlockSchedule sched = static_block_schedule(m, d);
  const TimeGrid grid{1.0, 50};
  const auto id = propagate_ID(sched, pauli::z(), grid);
  const auto ic = propagate_IC(sched, id, pauli::y(), grid);
  for (const auto& op : ic.invariants()) EXPECT_EQ(max_abs(op - pauli::y()), 0.0);
}

TEST(PropagateIC, ZComponentConserved) {
  const auto tq = demo_model(0.1);
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  const TimeGrid grid{2.0, 4000};
  const auto id = propagate_ID(sched, pauli::x(), grid);
  const auto ic = propagate_IC(sched, id, pauli::z(), grid);
  for (const auto& op : ic.invariants()) EXPECT_LE(max_abs(op - pauli::z()), 1e-12);
}

TEST(PropagateIC, GrowthEnvelope) {
  const double gamma = 0.1;
  const auto tq = demo_model(gamma);
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  const TimeGrid grid{1.0, 8000};
  const auto id = propagate_ID(sched, pauli::z(), grid);
  const auto ic = propagate_IC(sched, id, pauli::x(), grid);
  for (std::size_t k = 0; k < ic.size(); ++k) {
    const auto c = BlochCoefficients::from_operator(ic.at(k));
    const double expected = std::exp(8.0 * gamma * ic.times()[k]);
    EXPECT_NEAR(std::hypot(c.x, c.y) / expected, 1.0, 1e-6);
  }
}

TEST(PropagateIC, GridMismatch) {
  const auto tq = demo_model();
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  const auto id = propagate_ID(sched, pauli::z(), {1.0, 100});
  EXPECT_THROW(propagate_IC(sched, id, pauli::x(), {1.0, 200}), InvalidInput);
  EXPECT_THROW(propagate_IC(sched, id, pauli::x(), {2.0, 100}), InvalidInput);
}

TEST(PropagateIC, CoupledBlocksMatchDirectPropagation) {
  // A != 0 exercises the source and anticommutator terms of the complement
  // equation against the full adjoint generator.
  const LeakyModel lm = leaky_model();
  ASSERT_GT(max_abs(lm.decomposition.blocks()->lindblad[0].a), 0.1);
  const BlockSchedule sched = static_block_schedule(lm.model, lm.decomposition);
  testing::Rng rng(63);
  const Operator id0 = rng.hermitian(2);
  const Operator ic0 = rng.hermitian(2);
  const TimeGrid grid{2.0, 4000};
  const auto id = propagate_ID(sched, id0, grid);
  const auto ic = propagate_IC(sched, id, ic0, grid);
  const Operator full0 = assemble_invariant({id0, ic0, lm.decomposition});
  const auto direct = propagate_invariant(lm.model, full0, grid);
  for (std::size_t k = 0; k < ic.size(); k += 400) {
    const BlockInvariant b = project_blocks(lm.decomposition, direct.at(k));
    EXPECT_LE(max_abs(b.id - id.at(k)), 1e-9);
    EXPECT_LE(max_abs(b.ic - ic.at(k)), 1e-9);
    EXPECT_LE(offdiagonal_block_norm(lm.decomposition, direct.at(k)), 1e-9);
  }
}

TEST(PropagateIC, PrintedCommutatorFormDisagreesWhenLeaky) {
  // Complement block of the full generator on a block-diagonal operator,
  // against two hand-written candidates for its block equation.
  const LeakyModel lm = leaky_model();
  const BlockData b = *lm.decomposition.blocks();
  const double r = b.rates[0];
  const Operator& a = b.lindblad[0].a;
  const Operator& bb = b.lindblad[0].b;
  testing::Rng rng(68);
  const Operator id = rng.hermitian(2);
  const Operator ic = rng.hermitian(2);
  const Operator full = apply_adjoint_generator(lm.model, assemble_invariant({id, ic, lm.decomposition}), 0.0);
  const Operator target = project_blocks(lm.decomposition, full).ic;

  const Operator source = -r * a.adjoint() * id * a;
  const Operator b_terms = 0.5 * r * (anticommutator(bb.adjoint() * bb, ic) - 2.0 * bb.adjoint() * ic * bb);
  const Operator k = b.h.c + 0.5 * kI * r * a.adjoint() * a;
  const Operator corrected = -kI * (k * ic - ic * k.adjoint()) + source + b_terms;
  const Operator printed = -kI * commutator(k, ic) + source + b_terms;
  EXPECT_LE(max_abs(corrected - target), 1e-12);
  EXPECT_GT(max_abs(printed - target), 1e-2);
}

TEST(AssembleInvariant, IdentityBlocks) {
  const auto tq = demo_model();
  EXPECT_EQ(max_abs(assemble_invariant({pauli::identity(2), pauli::identity(2), tq.decomposition}) -
                    pauli::identity(4)),
            0.0);
}

TEST(AssembleInvariant, EmbedsDfsBlock) {
  const auto tq = demo_model();
  const Operator full = assemble_invariant({pauli::z(), Operator::Zero(2, 2), tq.decomposition});
  Operator expected = Operator::Zero(4, 4);
  expected(1, 1) = -1.0;
  expected(2, 2) = 1.0;
  EXPECT_EQ(max_abs(full - expected), 0.0);
}

TEST(AssembleInvariant, RoundTrip) {
  const auto tq = demo_model();
  testing::Rng rng(64);
  const Operator id = rng.hermitian(2);
  const Operator ic = rng.hermitian(2);
  const BlockInvariant back = project_blocks(tq.decomposition, assemble_invariant({id, ic, tq.decomposition}));
  EXPECT_EQ(max_abs(back.id - id), 0.0);
  EXPECT_EQ(max_abs(back.ic - ic), 0.0);
}

TEST(AssembleInvariant, DimensionMismatch) {
  const auto tq = demo_model();
  EXPECT_THROW(assemble_invariant({pauli::identity(3), pauli::identity(2), tq.decomposition}), InvalidInput);
}

TEST(VerifyFullInvariant, BlockSolutionSatisfiesFullCondition) {
  const auto tq = demo_model();
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  const TimeGrid grid{2.0, 8000};
  const auto id = propagate_ID(sched, BlochCoefficients{0.2, 0.5, 0.7}.to_operator(), grid);
  const auto ic = propagate_IC(sched, id, BlochCoefficients{0.6, -0.3, 0.4}.to_operator(), grid);
  const auto full = assemble_trajectory(tq.decomposition, id, ic);
  const auto report = verify_full_invariant(tq.model, tq.decomposition, full);
  EXPECT_LE(report.max_residual, 1e-5);
  EXPECT_LE(report.max_direct_offdiag, 1e-8);
}

TEST(VerifyFullInvariant, InjectedCouplingBreaksDecoupling) {
  const auto base = demo_model();
  std::vector<HamiltonianTerm> terms = base.model.terms();
  Operator coupling = Operator::Zero(4, 4);
  coupling(1, 0) = coupling(0, 1) = 1.0;  // |01> <-> |00>
  terms.push_back({coupling, CoefficientSchedule::constant(0.1)});
  const LindbladModel m(4, terms, base.model.dissipators());
  const DfsDecomposition d = block_decompose(m, base.decomposition, Operator::Zero(4, 4), 0.0);
  EXPECT_NEAR(max_abs(d.blocks()->h.n), 0.1, 1e-15);

  const BlockSchedule sched = static_block_schedule(m, d);
  const TimeGrid grid{1.0, 4000};
  const auto id = propagate_ID(sched, pauli::z(), grid);
  const auto ic = propagate_IC(sched, id, pauli::x(), grid);
  const auto report = verify_full_invariant(m, d, assemble_trajectory(d, id, ic));
  EXPECT_GT(report.direct_offdiag.back(), 1e-3);
  EXPECT_GT(report.max_residual, 1e-2);
}

TEST(VerifyFullInvariantProperty, ResidualIsSecondOrder) {
  const auto tq = demo_model();
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  double prev = 0.0;
  for (std::size_t steps : {500u, 1000u, 2000u}) {
    const TimeGrid grid{1.0, steps};
    const auto id = propagate_ID(sched, BlochCoefficients{0.1, 0.8, 0.2}.to_operator(), grid);
    const auto ic = propagate_IC(sched, id, BlochCoefficients{0.9, 0.1, 0.3}.to_operator(), grid);
    const double r = verify_full_invariant(tq.model, tq.decomposition, assemble_trajectory(tq.decomposition, id, ic))
                         .max_residual;
    if (prev > 0.0) {
      EXPECT_GE(prev / r, 3.5);
      EXPECT_LE(prev / r, 4.5);
    }
    prev = r;
  }
}

TEST(ComplementEigenflow, EqualEigenvaluesAndNoLeakage) {
  const auto tq = demo_model();
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  const TimeGrid grid{1.0, 100};
  const auto id = propagate_ID(sched, pauli::z(), grid);
  const auto ic = propagate_IC(sched, id, 2.0 * pauli::identity(2), grid);
  for (const auto& rec : complement_eigenflow(sched, id, ic)) EXPECT_LE(std::abs(rec.rhs), 1e-14);
}

TEST(ComplementEigenflow, GrowingEigenvalues) {
  const double gamma = 0.1;
  const auto tq = demo_model(gamma);
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  const TimeGrid grid{1.0, 8000};
  const auto id = propagate_ID(sched, pauli::z(), grid);
  const auto ic = propagate_IC(sched, id, pauli::x(), grid);
  const auto recs = complement_eigenflow(sched, id, ic);
  ASSERT_FALSE(recs.empty());
  for (const auto& rec : recs) {
    EXPECT_NEAR(std::abs(rec.lambda), std::exp(8 * gamma * rec.time), 1e-8);
    EXPECT_LE(rec.defect, 1e-5);
  }
}

TEST(ComplementEigenflow, DiagonalBlockKeepsSpectrum) {
  const auto tq = demo_model(0.2);
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  const TimeGrid grid{1.0, 200};
  const auto id = propagate_ID(sched, pauli::x(), grid);
  const auto ic = propagate_IC(sched, id, pauli::z(), grid);
  for (const auto& rec : complement_eigenflow(sched, id, ic)) {
    EXPECT_LE(std::abs(rec.rhs), 1e-14);
    EXPECT_LE(std::abs(rec.fd), 1e-10);
  }
}

TEST(ComplementEigenflow, CoupledBlocksMatchFiniteDifference) {
  const LeakyModel lm = leaky_model();
  const BlockSchedule sched = static_block_schedule(lm.model, lm.decomposition);
  const TimeGrid grid{0.5, 4000};
  testing::Rng rng(65);
  const auto id = propagate_ID(sched, rng.hermitian(2), grid);
  const auto ic = propagate_IC(sched, id, rng.hermitian(2), grid);
  for (const auto& rec : complement_eigenflow(sched, id, ic)) {
    if (!rec.degenerate) EXPECT_LE(rec.defect, 1e-5);
  }
}

TEST(BlockInvariantProperty, TracesConserved) {
  const auto tq = demo_model(0.15);
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  testing::Rng rng(66);
  const TimeGrid grid{2.0, 4000};
  for (int trial = 0; trial < 5; ++trial) {
    const auto id = propagate_ID(sched, rng.hermitian(2), grid);
    const auto ic = propagate_IC(sched, id, rng.hermitian(2), grid);
    for (std::size_t k = 0; k < id.size(); ++k) {
      EXPECT_NEAR(id.at(k).trace().real(), id.at(0).trace().real(), 1e-12);
      EXPECT_NEAR(ic.at(k).trace().real(), ic.at(0).trace().real(), 1e-9);
    }
  }
}

TEST(BlockInvariantProperty, EachBlockAloneIsAnInvariant) {
  const auto tq = demo_model();
  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  testing::Rng rng(67);
  const TimeGrid grid{2.0, 8000};
  const auto id = propagate_ID(sched, rng.hermitian(2), grid);
  const Operator zero = Operator::Zero(2, 2);
  const auto ic = propagate_IC(sched, id, rng.hermitian(2), grid);
  const auto id_zero = propagate_ID(sched, zero, grid);
  const auto ic_zero = propagate_IC(sched, id_zero, zero, grid);
  const auto only_d = assemble_trajectory(tq.decomposition, id, ic_zero);
  const auto only_c = assemble_trajectory(tq.decomposition, id_zero, ic);
  for (int trial = 0; trial < 3; ++trial) {
    const auto states = propagate_state(tq.model, rng.density(4), grid);
    EXPECT_LE(expectation_series(only_d, states).defect, 1e-6);
    EXPECT_LE(expectation_series(only_c, states).defect, 1e-6);
  }
}

}  // namespace
}  // namespace qinv
