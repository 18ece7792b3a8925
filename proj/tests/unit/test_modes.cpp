#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "cavspec/errors.hpp"
#include "cavspec/modes.hpp"
#include "oracles.hpp"

using namespace cavspec;

namespace {

ModeMatrix fig2a_matrix(double g = 4.3, double dc = 0.0) {
  return mode_matrix(build_from_splittings(5.0, 10.0, {1, 1, 1}),
                     CollectiveCoupling::uniform(g, 3), dc);
}

}  // namespace

TEST_CASE("mode_matrix lays out the arrowhead in the probe convention") {
  const auto m = fig2a_matrix();
  CHECK(m.diagonal == std::vector<double>{-15.0, -10.0, 0.0, 0.0});
  CHECK(m.border == std::vector<double>{4.3, 4.3, 4.3});

  CollectiveCoupling wrong;
  wrong.strengths = {1.0};
  CHECK_THROWS_AS(mode_matrix(build_from_splittings(5, 10, {1, 1, 1}), wrong, 0.0),
                  ValidationError);
}

TEST_CASE("two-level reduction has the textbook pair of modes") {
  TransitionLadder ladder;
  ladder.offsets = {0.0};
  ladder.decays = {1.0};
  ladder.labels = {"|4>"};
  CollectiveCoupling coupling;
  coupling.strengths = {3.0};
  const auto modes = eigenmodes(mode_matrix(ladder, coupling, 0.0));
  REQUIRE(modes.size() == 2);
  CHECK(std::abs(modes.eigenvalues[0] + 3.0) < 1e-12);
  CHECK(std::abs(modes.eigenvalues[1] - 3.0) < 1e-12);
  CHECK(std::abs(modes.photonic_fraction[0] - 0.5) < 1e-12);
  CHECK(std::abs(modes.photonic_fraction[1] - 0.5) < 1e-12);
}

TEST_CASE("demonstration matrix eigenvalues match the frozen secular values") {
  // Frozen from an independent high-precision bisection of the secular
  // equation for diag [-15,-10,0,0], border 4.3; sum is the trace, -25.
  const std::vector<double> frozen = {-16.478855443946074921, -11.268035853557710036,
                                      -2.7281385183910765288, 5.4750298158948614856};
  const auto modes = eigenmodes(fig2a_matrix());
  REQUIRE(modes.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(modes.eigenvalues[i] - frozen[i]) < 1e-10);
  }
  const double sum = modes.eigenvalues[0] + modes.eigenvalues[1] + modes.eigenvalues[2] +
                     modes.eigenvalues[3];
  CHECK(std::abs(sum + 25.0) < 1e-10);
}

TEST_CASE("decoupled matrix returns its diagonal, sorted") {
  ModeMatrix m;
  m.diagonal = {-15.0, -10.0, 0.0, -5.0};
  m.border = {0.0, 0.0, 0.0};
  const auto modes = eigenmodes(m);
  CHECK(modes.eigenvalues == std::vector<double>{-15.0, -10.0, -5.0, 0.0});
  CHECK(modes.photonic_fraction[2] == 1.0);  // the hub entry at -5
}

TEST_CASE("secular solver agrees with the dense reference on random draws") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 1000; ++i) {
    const auto m = oracles::random_arrowhead(rng);
    const auto modes = eigenmodes(m);
    const auto ref = oracles::dense_eigenvalues(m);
    double scale = 1.0;
    for (double d : m.diagonal) scale = std::max(scale, std::abs(d));
    for (double w : m.border) scale = std::max(scale, std::abs(w));
    REQUIRE(modes.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) {
      CHECK(std::abs(modes.eigenvalues[k] - ref[k]) <= 1e-10 * scale);
    }

    // weight rows are normalized and the photonic column is complete
    double photon = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      double rsum = 0.0;
      for (double w : modes.weights[k]) rsum += w;
      CHECK(std::abs(rsum - 1.0) <= 1e-10);
      photon += modes.photonic_fraction[k];
    }
    CHECK(std::abs(photon - 1.0) <= 1e-10);

    // Cauchy interlacing against the sorted atomic diagonal
    std::vector<double> leaves(m.diagonal.begin(), m.diagonal.end() - 1);
    std::sort(leaves.begin(), leaves.end());
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      CHECK(modes.eigenvalues[k] <= leaves[k] + 1e-10 * scale);
      CHECK(leaves[k] <= modes.eigenvalues[k + 1] + 1e-10 * scale);
    }

    // trace and determinant identities
    double trace = 0.0;
    for (double d : m.diagonal) trace += d;
    double esum = 0.0, eprod = 1.0;
    for (double v : modes.eigenvalues) {
      esum += v;
      eprod *= v;
    }
    CHECK(std::abs(esum - trace) <= 1e-10 * std::max(1.0, std::abs(trace)));
    const double det = oracles::dense(m).partialPivLu().determinant();
    const double dscale = std::pow(scale, static_cast<double>(m.dim()));
    CHECK(std::abs(eprod - det) <= 1e-10 * std::max(std::abs(det), dscale));
  }
}

TEST_CASE("strict interlacing for nonzero couplings and distinct leaves") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> wd(0.5, 8.0);
  for (int i = 0; i < 200; ++i) {
    auto m = oracles::random_arrowhead(rng);
    for (auto& w : m.border) w = wd(rng);
    const auto modes = eigenmodes(m);
    std::vector<double> leaves(m.diagonal.begin(), m.diagonal.end() - 1);
    std::sort(leaves.begin(), leaves.end());
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      CHECK(modes.eigenvalues[k] < leaves[k]);
      CHECK(leaves[k] < modes.eigenvalues[k + 1]);
    }
  }
}

TEST_CASE("degenerate leaves are deflated against the border vector") {
  ModeMatrix m;
  m.diagonal = {2.0, 2.0, 5.0, 0.0};
  m.border = {3.0, 4.0, 1.0};
  const auto modes = eigenmodes(m);
  const auto ref = oracles::dense_eigenvalues(m);
  for (std::size_t k = 0; k < ref.size(); ++k) {
    CHECK(std::abs(modes.eigenvalues[k] - ref[k]) <= 1e-10 * 5.0);
  }
  // one eigenvalue sits exactly on the degenerate leaf value
  CHECK(std::count(modes.eigenvalues.begin(), modes.eigenvalues.end(), 2.0) == 1);
  // and its mode has no photonic admixture
  const auto it = std::find(modes.eigenvalues.begin(), modes.eigenvalues.end(), 2.0);
  const auto idx = static_cast<std::size_t>(it - modes.eigenvalues.begin());
  CHECK(modes.photonic_fraction[idx] == 0.0);
  CHECK(modes.weights[idx][2] == 0.0);  // nor any weight on the distinct leaf
}

TEST_CASE("characteristic polynomial: closed forms") {
  TransitionLadder one;
  one.offsets = {0.0};
  one.decays = {1.0};
  one.labels = {"x"};
  CollectiveCoupling g;
  g.strengths = {3.0};
  const auto p2 = characteristic_polynomial(mode_matrix(one, g, 7.0));
  REQUIRE(p2.size() == 3);  // lambda^2 - dc lambda - G^2
  CHECK(std::abs(p2[0] + 9.0) < 1e-12);
  CHECK(std::abs(p2[1] + 7.0) < 1e-12);
  CHECK(p2[2] == 1.0);

  ModeMatrix diag;
  diag.diagonal = {1.0, 2.0, 3.0, 4.0};
  diag.border = {0.0, 0.0, 0.0};
  const auto p4 = characteristic_polynomial(diag);
  // (lambda-1)(lambda-2)(lambda-3)(lambda-4) = lambda^4 -10 l^3 +35 l^2 -50 l + 24
  const std::vector<double> expected = {24.0, -50.0, 35.0, -10.0, 1.0};
  for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(p4[k] - expected[k]) < 1e-12);
}

TEST_CASE("characteristic polynomial matches the symbolic probe-convention quartic") {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> gd(0.0, 12.0), dd(0.2, 4.0), dcd(-15.0, 15.0);
  for (int i = 0; i < 100; ++i) {
    const double G = gd(rng), d = dd(rng), dc = dcd(rng);
    const auto ladder = build_from_splittings(2.0 * d, 4.0 * d, {1, 1, 1});
    const auto p = characteristic_polynomial(
        mode_matrix(ladder, CollectiveCoupling::uniform(G, 3), dc));
    // Hand expansion for leaves (-6d, -4d, 0), hub dc, equal couplings G.
    const double g2 = G * G;
    const std::vector<double> expected = {
        -24.0 * d * d * g2,
        -(24.0 * d * d * dc + 20.0 * d * g2),
        24.0 * d * d - 10.0 * d * dc - 3.0 * g2,
        10.0 * d - dc,
        1.0,
    };
    double scale = 1.0;
    for (double c : expected) scale = std::max(scale, std::abs(c));
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(std::abs(p[k] - expected[k]) <= 1e-11 * scale);
    }
  }
}

TEST_CASE("characteristic polynomial equals det(lambda I - A) numerically") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> lam(-40.0, 40.0);
  for (int i = 0; i < 20; ++i) {
    const auto m = oracles::random_arrowhead(rng);
    const auto p = characteristic_polynomial(m);
    const Eigen::MatrixXd a = oracles::dense(m);
    for (int s = 0; s < 5; ++s) {
      const double x = lam(rng);
      double value = 0.0;
      for (std::size_t k = p.size(); k-- > 0;) value = value * x + p[k];
      const double det =
          (x * Eigen::MatrixXd::Identity(a.rows(), a.cols()) - a).partialPivLu().determinant();
      CHECK(std::abs(value - det) <= 1e-8 * std::max(1.0, std::abs(det)));
    }
  }
}

TEST_CASE("tabulated quartic coefficients at the documented point") {
  const auto c = reference_quartic_coefficients(10.0, 2.5, 0.0);
  CHECK(c == std::vector<double>{15000.0, 5000.0, -150.0, 25.0, 1.0});

  const auto zero = reference_quartic_coefficients(0.0, 0.0, 3.0);
  CHECK(zero == std::vector<double>{0.0, 0.0, 0.0, 3.0, 1.0});

  const auto nod = reference_quartic_coefficients(4.0, 0.0, 3.0);
  CHECK(nod == std::vector<double>{0.0, 0.0, -48.0, 3.0, 1.0});
}

TEST_CASE("poly_roots: closed forms and validation") {
  const auto pm1 = poly_roots({-1.0, 0.0, 1.0});
  REQUIRE(pm1.size() == 2);
  CHECK(std::abs(pm1[0] - std::complex<double>(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(pm1[1] - std::complex<double>(1.0, 0.0)) < 1e-12);

  const auto rabi = poly_roots({-9.0, 0.0, 1.0});  // lambda^2 - G^2, G=3
  CHECK(std::abs(rabi[0].real() + 3.0) < 1e-12);
  CHECK(std::abs(rabi[1].real() - 3.0) < 1e-12);

  CHECK_THROWS_AS(poly_roots({1.0, 2.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(poly_roots({1.0}), ValidationError);
}

TEST_CASE("roots of the expansion reproduce the eigenvalues") {
  std::mt19937_64 rng(505);
  for (int i = 0; i < 100; ++i) {
    // odd and even dimensions both exercise the monic sign convention
    const auto m = oracles::random_arrowhead(rng, 2 + static_cast<std::size_t>(i % 4));
    const auto roots = poly_roots(characteristic_polynomial(m));
    const auto eigs = eigenmodes(m).eigenvalues;
    double scale = 1.0;
    for (double d : m.diagonal) scale = std::max(scale, std::abs(d));
    REQUIRE(roots.size() == eigs.size());
    for (std::size_t k = 0; k < eigs.size(); ++k) {
      CHECK(std::abs(roots[k].imag()) <= 1e-9 * scale);
      CHECK(std::abs(roots[k].real() - eigs[k]) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("quartic audit: generic parameters disagree in the odd and constant terms") {
  const auto audit = quartic_audit(10.0, 2.5, -7.0);
  REQUIRE(audit.matches_energy.size() == 5);
  CHECK(audit.matches_energy[0] == false);  // constant term
  CHECK(audit.matches_energy[1] == true);
  CHECK(audit.matches_energy[2] == true);
  CHECK(audit.matches_energy[3] == false);  // lambda^3 term
  CHECK(audit.matches_energy[4] == true);
  CHECK(audit.reference_matches_energy == false);
  // the probe-convention expansion differs in all odd terms and the constant
  CHECK(audit.matches_probe[0] == false);
  CHECK(audit.matches_probe[1] == false);
  CHECK(audit.matches_probe[3] == false);
}

TEST_CASE("quartic audit: reductions where the forms coincide") {
  const auto both_zero = quartic_audit(0.0, 0.0, 5.0);
  CHECK(both_zero.reference_matches_energy == true);

  const auto delta_zero = quartic_audit(7.0, 0.0, 5.0);
  CHECK(delta_zero.reference_matches_energy == true);

  const auto g_zero = quartic_audit(0.0, 2.0, 5.0);
  CHECK(g_zero.matches_energy[0] == true);   // constant 0 on both sides
  CHECK(g_zero.matches_energy[3] == false);  // lambda^3 still disagrees
}

TEST_CASE("the two matrix conventions are sign mirrors of each other") {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> gd(0.5, 12.0), dd(0.2, 4.0), dcd(-15.0, 15.0);
  for (int i = 0; i < 50; ++i) {
    const auto audit = quartic_audit(gd(rng), dd(rng), dcd(rng));
    ModeMatrix energy;
    energy.diagonal = {0.0, 4.0 * audit.delta, 6.0 * audit.delta, -audit.delta_c};
    energy.border = {audit.g_sqrt_n, audit.g_sqrt_n, audit.g_sqrt_n};
    const auto energy_eigs = oracles::dense_eigenvalues(energy);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(audit.probe_eigenvalues[k] + energy_eigs[3 - k]) <= 1e-9 * 50.0);
    }
  }
}

TEST_CASE("branch scan follows straight lines through crossings when decoupled") {
  const auto ladder = build_from_splittings(5.0, 10.0, {1, 1, 1});
  const auto coupling = CollectiveCoupling::uniform(0.0, 3);
  std::vector<double> dc;
  for (int k = 0; k <= 80; ++k) dc.push_back(-20.0 + 0.5 * k);
  const auto scan = branch_scan(ladder, coupling, dc);

  // Collect per-branch trajectories.
  std::vector<std::vector<double>> by_branch(4, std::vector<double>(dc.size()));
  for (std::size_t k = 0; k < dc.size(); ++k) {
    for (std::size_t j = 0; j < 4; ++j) {
      by_branch[static_cast<std::size_t>(scan.branch[k][j])][k] = scan.modes[k].eigenvalues[j];
    }
  }
  int constant_branches = 0, cavity_branches = 0;
  for (const auto& traj : by_branch) {
    bool constant = true, cavity = true;
    for (std::size_t k = 0; k < dc.size(); ++k) {
      if (std::abs(traj[k] - traj[0]) > 1e-9) constant = false;
      if (std::abs(traj[k] - dc[k]) > 1e-9) cavity = false;
    }
    if (constant) ++constant_branches;
    if (cavity) ++cavity_branches;
  }
  CHECK(constant_branches == 3);
  CHECK(cavity_branches == 1);
}

TEST_CASE("labels stay on the eigenvalue curves through tight avoided crossings") {
  // weak coupling, coarse sampling: the gap at each avoided crossing (~2G) is
  // far below the step, so the walk must refine to keep labels adiabatic
  const auto ladder = build_from_splittings(5.0, 10.0, {1, 1, 1});
  const auto coupling = CollectiveCoupling::uniform(0.05, 3);
  std::vector<double> dc;
  for (int k = 0; k <= 8; ++k) dc.push_back(-20.0 + 5.0 * k);
  const auto scan = branch_scan(ladder, coupling, dc);
  for (std::size_t k = 0; k < dc.size(); ++k) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(scan.branch[k][j] == static_cast<int>(j));
    }
  }
}

TEST_CASE("coupled branches never cross and decouple at large detuning") {
  const auto ladder = build_from_splittings(5.0, 10.0, {1, 1, 1});
  const auto coupling = CollectiveCoupling::uniform(10.0, 3);
  std::vector<double> dc;
  for (int k = 0; k <= 120; ++k) dc.push_back(-40.0 + 0.5 * k);
  const auto scan = branch_scan(ladder, coupling, dc);
  double min_gap = 1e300;
  for (const auto& modes : scan.modes) {
    for (std::size_t j = 0; j + 1 < modes.size(); ++j) {
      min_gap = std::min(min_gap, modes.eigenvalues[j + 1] - modes.eigenvalues[j]);
    }
  }
  CHECK(min_gap > 0.0);

  const auto far = eigenmodes(mode_matrix(ladder, coupling, -1000.0));
  CHECK(std::abs(far.eigenvalues[0] + 1000.0) < 1.0);
  CHECK(std::abs(far.eigenvalues[1] + 15.0) < 0.5);
  CHECK(std::abs(far.eigenvalues[2] + 10.0) < 0.5);
  CHECK(std::abs(far.eigenvalues[3] - 0.0) < 0.5);
}

TEST_CASE("asymmetric splittings give asymmetric mode gaps") {
  const auto modes = eigenmodes(fig2a_matrix(10.0, 0.0));
  const double g1 = modes.eigenvalues[1] - modes.eigenvalues[0];
  const double g2 = modes.eigenvalues[2] - modes.eigenvalues[1];
  const double g3 = modes.eigenvalues[3] - modes.eigenvalues[2];
  CHECK(std::abs(g1 - g3) > 0.1);
  CHECK(std::abs(g1 - g2) > 0.1);
  CHECK(std::abs(g2 - g3) > 0.1);
}

TEST_CASE("branch scan validates its sampling") {
  const auto ladder = build_from_splittings(5.0, 10.0, {1, 1, 1});
  const auto coupling = CollectiveCoupling::uniform(1.0, 3);
  CHECK_THROWS_AS(branch_scan(ladder, coupling, {}), ValidationError);
  CHECK_THROWS_AS(branch_scan(ladder, coupling, {0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(branch_scan(ladder, coupling, {1.0, -1.0}), ValidationError);
}
