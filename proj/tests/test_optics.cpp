#include "doctest.h"

#include "catgate/fock.hpp"
#include "catgate/optics.hpp"
#include "catgate/states.hpp"

#include <cmath>

using namespace catgate;

TEST_CASE("annihilation and number operators") {
  FockOperator a = annihilation(6);
  CHECK(a.kind == OpKind::annihilation);
  for (int n = 1; n < 6; ++n)
    CHECK(a.m(n - 1, n).real() == doctest::Approx(std::sqrt(double(n))));
  CHECK(a.m.cwiseAbs().sum() ==
        doctest::Approx((a.m.diagonal(1).cwiseAbs()).sum()));

  FockOperator n_op = number_op(6);
  CHECK((n_op.m - MatXc(a.m.adjoint() * a.m)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("displacement creates coherent states and is isometric below the "
          "cutoff") {
  FockOperator d = displacement(cxd(0.8, 0.0), 24);
  // pad-and-crop construction: exactly norm-nonincreasing everywhere, and an
  // isometry wherever the displaced state fits under the cutoff
  for (int j = 0; j < 24; ++j)
    CHECK(d.m.col(j).norm() <= 1.0 + 1e-12);
  // residual is the crop loss past the 8-level padding (~1e-7 for column 11)
  MatXc gram = d.m.adjoint() * d.m;
  CHECK((gram.topLeftCorner(12, 12) - MatXc::Identity(12, 12))
            .cwiseAbs()
            .maxCoeff() < 1e-5);
  FockKet out = apply(d, basis_ket(0, 24));
  CHECK((out.amps - coherent(0.8, 24).amps).cwiseAbs().maxCoeff() < 1e-10);

  // complex displacement: photon statistics depend only on |alpha|
  FockKet out2 = apply(displacement(cxd(0.4, 0.3), 24), basis_ket(0, 24));
  FockKet ref = coherent(0.5, 24);
  for (int n = 0; n < 12; ++n)
    CHECK(std::norm(out2.amps[n]) ==
          doctest::Approx(std::norm(ref.amps[n])).epsilon(1e-8));
}

TEST_CASE("squeeze operator is low-block isometric and squeezes x for s > 0") {
  FockOperator s_op = squeeze(0.2993, 24);
  for (int j = 0; j < 24; ++j)
    CHECK(s_op.m.col(j).norm() <= 1.0 + 1e-12);
  MatXc gram = s_op.m.adjoint() * s_op.m;
  CHECK((gram.topLeftCorner(8, 8) - MatXc::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() < 1e-4);
  FockKet sv = apply(s_op, basis_ket(0, 24));
  MatXc a = annihilation(24).m;
  MatXc x = (a + a.adjoint().eval()) / std::sqrt(2.0);
  double vx = (sv.amps.adjoint() * x * x * sv.amps)(0).real();
  CHECK(vx == doctest::Approx(std::exp(-2.0 * 0.2993) / 2.0).epsilon(1e-8));
  // S(-s) anti-squeezes x
  FockKet av = apply(squeeze(-0.2993, 24), basis_ket(0, 24));
  double vx2 = (av.amps.adjoint() * x * x * av.amps)(0).real();
  CHECK(vx2 == doctest::Approx(std::exp(2.0 * 0.2993) / 2.0).epsilon(1e-7));
}

TEST_CASE("beam splitter convention: |1,0> -> t|1,0> + r|0,1>") {
  double t = 0.5, r = std::sqrt(0.75);
  FockOperator bs = beam_splitter(BeamSplitterSpec::from_t(t, {0, 1}), {4, 4});
  FockKet in = tensor(basis_ket(1, 4), basis_ket(0, 4));
  FockKet out = apply(bs, in);
  CHECK(out.amps[1 * 4 + 0].real() == doctest::Approx(t).epsilon(1e-12));
  CHECK(out.amps[0 * 4 + 1].real() == doctest::Approx(r).epsilon(1e-12));
  CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("reflectance constructor fixes r^2") {
    FockOperator bs2 = beam_splitter(
        BeamSplitterSpec::from_reflectance(0.75, {0, 1}), {4, 4});
    CHECK((bs2.m - bs.m).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("beam splitter is exactly unitary on the truncated space") {
  // the generator conserves total photon number, so truncation cannot break
  // unitarity
  FockOperator bs =
      beam_splitter(BeamSplitterSpec::from_t(0.5, {0, 1}), {16, 4});
  CHECK((bs.m * bs.m.adjoint() -
         MatXc::Identity(bs.m.rows(), bs.m.cols()))
            .cwiseAbs()
            .maxCoeff() < 1e-13);

  // commutes with the total photon number
  MatXc n_tot =
      embed_single_mode(number_op(16).m, OpKind::generic, {16, 4}, 0).m +
      embed_single_mode(number_op(4).m, OpKind::generic, {16, 4}, 1).m;
  CHECK((bs.m * n_tot - n_tot * bs.m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("balanced beam splitter shows two-photon interference") {
  FockOperator bs = beam_splitter(
      BeamSplitterSpec::from_t(std::sqrt(0.5), {0, 1}), {4, 4});
  FockKet in = tensor(basis_ket(1, 4), basis_ket(1, 4));
  FockKet out = apply(bs, in);
  cxd a20 = out.amps[2 * 4 + 0];
  cxd a02 = out.amps[0 * 4 + 2];
  cxd a11 = out.amps[1 * 4 + 1];
  CHECK(std::abs(a11) < 1e-12);                       // coincidences vanish
  CHECK(std::abs(a20) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(std::abs(a02) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  // opposite relative sign of the two-photon branches
  CHECK(std::abs(a20 + a02) < 1e-12);
}

TEST_CASE("beam splitter maps coherent inputs to coherent products") {
  int d = 20;
  double a0 = 0.8, t = std::sqrt(0.3), r = std::sqrt(0.7);
  FockOperator bs = beam_splitter(BeamSplitterSpec::from_t(t, {0, 1}), {d, d});
  FockKet out = apply(bs, tensor(coherent(a0, d), coherent(0.0, d)));
  FockKet expected = tensor(coherent(t * a0, d), coherent(r * a0, d));
  double f = std::norm(expected.amps.dot(out.amps));
  CHECK(f == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("beam splitter embeds into larger joint spaces") {
  std::vector<int> dims{2, 3, 3, 2};
  FockOperator bs = beam_splitter(BeamSplitterSpec::from_t(0.6, {1, 2}), dims);
  CHECK(bs.dims == dims);
  FockKet in = tensor(tensor(basis_ket(1, 2), basis_ket(1, 3)),
                      tensor(basis_ket(0, 3), basis_ket(1, 2)));
  FockKet out = apply(bs, in);
  // spectator modes untouched: amplitude pattern lives at n0=1, n3=1
  double total = 0.0;
  for (int n1 = 0; n1 < 3; ++n1)
    for (int n2 = 0; n2 < 3; ++n2)
      total += std::norm(out.amps[((1 * 3 + n1) * 3 + n2) * 2 + 1]);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("subtraction operator combines the tapped modes linearly") {
  std::vector<int> dims{4, 4};
  double t = 0.7, r = std::sqrt(1.0 - 0.49);
  FockOperator sub = subtraction_operator(t, r, {0, 1}, dims);
  // acting on |1,0>: r a_0 |1,0> = r |0,0>
  FockKet out1 = apply(sub, tensor(basis_ket(1, 4), basis_ket(0, 4)));
  CHECK(out1.amps[0].real() == doctest::Approx(r).epsilon(1e-12));
  // acting on |0,1>: t b_1 |0,1> = t |0,0>
  FockKet out2 = apply(sub, tensor(basis_ket(0, 4), basis_ket(1, 4)));
  CHECK(out2.amps[0].real() == doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("anti-hermitian exponentials are unitary and reject bad input") {
  MatXc g = MatXc::Zero(2, 2);
  g(0, 1) = cxd(0.3, 0.0);
  g(1, 0) = cxd(-0.3, 0.0);
  MatXc u = exp_anti_hermitian(g);
  CHECK((u * u.adjoint() - MatXc::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(u(0, 0).real() == doctest::Approx(std::cos(0.3)).epsilon(1e-12));
  CHECK(u(0, 1).real() == doctest::Approx(std::sin(0.3)).epsilon(1e-12));

  MatXc bad = MatXc::Zero(2, 2);
  bad(0, 1) = cxd(0.3, 0.0);
  bad(1, 0) = cxd(-0.2, 0.0);
  CHECK_THROWS_AS(exp_anti_hermitian(bad), dimension_error);
}
