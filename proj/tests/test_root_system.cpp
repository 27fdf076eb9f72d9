#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "rbw/errors.hpp"
#include "rbw/root_system.hpp"
#include "rbw/rng.hpp"
#include "rbw/weyl_group.hpp"

using namespace rbw;

namespace {
const char* kAllTypes[] = {"A1", "A2", "A3", "B2", "B3", "C3", "D4", "F4", "G2", "E6"};

void check_invariants(const RootSystemSpec& spec) {
  const int d = spec.rank;
  // spans R^d
  Mat all(d, static_cast<int>(spec.roots.size()));
  for (size_t i = 0; i < spec.roots.size(); ++i) all.col(static_cast<int>(i)) = spec.roots[i];
  CHECK(Eigen::FullPivLU<Mat>(all).rank() == d);

  // -alpha present, no other multiple
  for (const Vec& a : spec.roots) {
    int multiples = 0;
    bool has_neg = false;
    for (const Vec& b : spec.roots) {
      double c = a.dot(b) / a.squaredNorm();
      if ((b - c * a).norm() < 1e-9) {
        ++multiples;
        if ((b + a).norm() < 1e-9) has_neg = true;
      }
    }
    CHECK(multiples == 2);
    CHECK(has_neg);
  }

  // reflection closure and Cartan integrality
  for (const Vec& a : spec.roots) {
    Mat r = reflection_matrix(a);
    for (const Vec& b : spec.roots) {
      Vec rb = r * b;
      bool found = false;
      for (const Vec& c : spec.roots)
        if ((c - rb).cwiseAbs().maxCoeff() < 1e-10) found = true;
      CHECK(found);
      double cart = b.dot(spec.coroot_of(a));
      CHECK(std::abs(cart - std::round(cart)) < 1e-9);
    }
  }

  // coroot definition and invertible coroot basis
  for (size_t i = 0; i < spec.roots.size(); ++i)
    CHECK((spec.coroots[i] - 2.0 * spec.roots[i] / spec.roots[i].squaredNorm()).norm() < 1e-12);
  CHECK(std::abs(spec.coroot_basis.determinant()) > 1e-9);
}
}  // namespace

TEST_CASE("build_root_system: A1 mirrors at integer points") {
  auto spec = build_root_system("A1");
  CHECK(spec.roots.size() == 2);
  CHECK(spec.simple_roots[0].size() == 1);
  CHECK(spec.simple_roots[0][0] == doctest::Approx(1.0));
  CHECK(spec.coroot_basis(0, 0) == doctest::Approx(2.0));
  CHECK(spec.highest_root[0] == doctest::Approx(1.0));
}

TEST_CASE("build_root_system: closure oracle confirms root counts") {
  // Frozen from the closure oracle: |Phi(A2)| = 6, |Phi(G2)| = 12.
  auto a2 = build_root_system("A2");
  auto a2_oracle = oracle::root_closure(a2.simple_roots);
  CHECK(a2.roots.size() == 6);
  CHECK(a2_oracle.size() == 6);

  auto g2 = build_root_system("G2");
  auto g2_oracle = oracle::root_closure(g2.simple_roots);
  CHECK(g2.roots.size() == 12);
  CHECK(g2_oracle.size() == 12);

  // two root lengths with ratio sqrt(3)
  std::set<long> lengths;
  for (const Vec& r : g2.roots) lengths.insert(std::lround(r.squaredNorm() * 1e6));
  CHECK(lengths.size() == 2);
  CHECK(*lengths.rbegin() == doctest::Approx(3 * *lengths.begin()));

  // every type: builder's root set equals the closure of its simple roots
  for (const char* t : kAllTypes) {
    auto spec = build_root_system(t);
    auto closure = oracle::root_closure(spec.simple_roots);
    CHECK(closure.size() == spec.roots.size());
  }
}

TEST_CASE("build_root_system: invariants hold for all enumerable types") {
  for (const char* t : kAllTypes) {
    CAPTURE(t);
    check_invariants(build_root_system(t));
  }
}

TEST_CASE("build_root_system: rejects invalid types") {
  CHECK_THROWS_AS(build_root_system("C2"), InvalidType);
  CHECK_THROWS_AS(build_root_system("D3"), InvalidType);
  CHECK_THROWS_AS(build_root_system("E5"), InvalidType);
  CHECK_THROWS_AS(build_root_system("G3"), InvalidType);
  CHECK_THROWS_AS(build_root_system("H3"), InvalidType);
  CHECK_THROWS_AS(build_root_system("A0"), InvalidType);
  CHECK_THROWS_AS(parse_type("A"), InvalidType);
  CHECK_THROWS_AS(parse_type("A2x"), InvalidType);
}

TEST_CASE("reflection_matrix: defining properties") {
  Vec e1(2);
  e1 << 1, 0;
  Mat r = reflection_matrix(e1);
  CHECK(r(0, 0) == doctest::Approx(-1));
  CHECK(r(1, 1) == doctest::Approx(1));
  CHECK(std::abs(r(0, 1)) < 1e-15);

  RngStream rng{2024, 0, 0};
  for (int trial = 0; trial < 100; ++trial) {
    int d = 2 + int(rng.next_u64() % 5);
    Vec a(d);
    for (int i = 0; i < d; ++i) a[i] = 2.0 * rng.next_unit() - 1.0;
    if (a.norm() < 1e-3) continue;
    Mat m = reflection_matrix(a);
    CHECK((m * a + a).cwiseAbs().maxCoeff() < 1e-12);        // r a = -a
    CHECK((m * m - Mat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);  // involution
    CHECK((m.transpose() * m - Mat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
  }

  Vec zero = Vec::Zero(3);
  CHECK_THROWS_AS(reflection_matrix(zero), ZeroVector);
}

TEST_CASE("enumerate_weyl_group: orders and group structure") {
  auto a1 = build_root_system("A1");
  auto w1 = FiniteWeylGroup::enumerate(a1);
  CHECK(w1.size() == 2);
  CHECK(w1.matrix(w1.identity_index())(0, 0) == doctest::Approx(1.0));
  // the non-identity element is -1
  CHECK(w1.matrix(1 - w1.identity_index())(0, 0) == doctest::Approx(-1.0));

  auto a2 = build_root_system("A2");
  auto w2 = FiniteWeylGroup::enumerate(a2);
  CHECK(w2.size() == 6);

  auto b2 = build_root_system("B2");
  CHECK(FiniteWeylGroup::enumerate(b2).size() == 8);

  CHECK(weyl_order(Family::E, 7) == 2903040ULL);
  CHECK_THROWS_AS(FiniteWeylGroup::enumerate(build_root_system("E7")), GroupTooLarge);
}

TEST_CASE("enumerate_weyl_group: invariants") {
  for (const char* t : {"A2", "B2", "G2", "A3"}) {
    CAPTURE(t);
    auto spec = build_root_system(t);
    auto g = FiniteWeylGroup::enumerate(spec);
    const int d = spec.rank;

    // orthogonality and root permutation
    for (int w = 0; w < g.size(); ++w) {
      CHECK((g.matrix(w).transpose() * g.matrix(w) - Mat::Identity(d, d)).cwiseAbs().maxCoeff() <
            1e-10);
      for (const Vec& a : spec.roots) {
        Vec wa = g.matrix(w) * a;
        bool found = false;
        for (const Vec& c : spec.roots)
          if ((c - wa).cwiseAbs().maxCoeff() < 1e-10) found = true;
        CHECK(found);
      }
    }

    // generators are involutions in the table
    for (int i = 0; i < g.num_generators(); ++i)
      CHECK(g.mult(g.generator(i), g.generator(i)) == g.identity_index());

    // table consistent with matrix products
    CHECK(g.has_dense_mult_table());
    for (int a = 0; a < g.size(); ++a)
      for (int b = 0; b < g.size(); ++b)
        CHECK(approx_eq(g.matrix(g.mult(a, b)), g.matrix(a) * g.matrix(b), 1e-10));

    // closed under inverse
    for (int a = 0; a < g.size(); ++a)
      CHECK(g.mult(a, g.inverse(a)) == g.identity_index());
  }
}
