#include "doctest.h"

#include "corpus.hpp"
#include "indicial/extensions.hpp"

using namespace indicial;
using testing::scalar;

namespace {

PencilSpec lin() { return scalar({I, 1.0}, 2); }
PencilSpec sq() { return scalar({-1.0, 2.0 * I, 1.0}, 2); }
PencilSpec strip() { return testing::scalar_from_roots({-0.5 * I, -1.5 * I}, 2); }

QuotientModel model(const PencilSpec& p) { return build_quotient(p, Tolerances{}); }

Mat unit(int d, int k) { return Mat::Identity(d, d).col(k); }

}  // namespace

TEST_CASE("quotient of the worked examples") {
  QuotientModel a = model(lin());
  REQUIRE(a.dim() == 1);
  CHECK(std::abs(a.generator(0, 0) + I) < 1e-12);
  CHECK(std::abs(a.gram(0, 0) - 1.0) < 1e-12);

  QuotientModel b = model(strip());
  REQUIRE(b.dim() == 2);
  // blocks are ordered by Im: the lower root -3i/2 first
  CHECK(std::abs(b.blocks[0].root.sigma0 + 1.5 * I) < 1e-12);
  Mat G(2, 2);
  G << 0.0, -I, I, 0.0;
  CHECK((b.gram - G).norm() < 1e-12);
  CHECK(b.cross_block_max < 1e-12);

  CHECK(model(testing::scalar_from_roots({0.5 * I, -2.5 * I}, 2)).dim() == 0);
  CHECK(model(scalar({2.0}, 2)).dim() == 0);
}

TEST_CASE("adjoint subspace, selfadjointness and invariance") {
  QuotientModel b = model(strip());
  CHECK(adjoint_subspace(b, {Mat(2, 0)}).dim() == 2);
  CHECK(adjoint_subspace(b, {Mat::Identity(2, 2)}).dim() == 0);
  ExtensionSubspace up{unit(2, 1)};
  CHECK(subspace_equal(adjoint_subspace(b, up).basis, up.basis));
  CHECK(is_selfadjoint(b, up));
  CHECK(is_invariant(b, up));
  ExtensionSubspace mix{unit(2, 0) + unit(2, 1)};
  CHECK(is_selfadjoint(b, mix));
  CHECK_FALSE(is_invariant(b, mix));
  CHECK_FALSE(is_selfadjoint(b, {Mat(2, 0)}));
}

TEST_CASE("deficiency indices") {
  CHECK(deficiency_indices(model(lin())) == Inertia{0, 0, 1});
  CHECK(deficiency_indices(model(strip())) == Inertia{1, 0, 1});
  CHECK(deficiency_indices(model(scalar({2.0}, 2))) == Inertia{0, 0, 0});
}

TEST_CASE("canonical chain basis") {
  auto a = canonical_chain_basis(model(lin()), 0);
  REQUIRE(a.size() == 1);
  CHECK(a[0].size == 1);
  CHECK(a[0].sign == 1);
  auto b = canonical_chain_basis(model(sq()), 0);
  REQUIRE(b.size() == 1);
  CHECK(b[0].size == 2);
  CHECK(b[0].sign == 1);
  auto c = canonical_chain_basis(model(testing::diag_pencil({lin(), testing::negated(lin())})), 0);
  REQUIRE(c.size() == 2);
  std::vector<int> signs{c[0].sign, c[1].sign};
  std::sort(signs.begin(), signs.end());
  CHECK(signs == std::vector<int>{-1, 1});
  CHECK(c[0].size == 1);
  CHECK(c[1].size == 1);
}

TEST_CASE("canonical chains realize signed reversal Gram matrices for any seed") {
  for (unsigned seed = 1; seed <= 25; ++seed) {
    auto pl = testing::planted_critical(seed);
    QuotientModel Q = model(pl.p);
    for (size_t b = 0; b < Q.blocks.size(); ++b) {
      if (Q.blocks[b].root.band != Band::Critical) continue;
      for (unsigned s : {0u, seed, seed + 77u}) {
        auto cbs = canonical_chain_basis(Q, static_cast<int>(b), s ? std::optional<unsigned>(s) : std::nullopt);
        NormalFormBlocks got;
        for (const auto& cb : cbs) {
          got.push_back({cb.size, cb.sign > 0 ? 1 : 0, cb.sign < 0 ? 1 : 0});
          Mat G = cb.chain.adjoint() * Q.form * cb.chain;
          Mat target = Mat::Zero(cb.size, cb.size);
          for (int i = 0; i < cb.size; ++i) target(i, cb.size - 1 - i) = cb.sign;
          CHECK((G - target).cwiseAbs().maxCoeff() < 1e-8);
        }
        for (const auto& pr : pl.critical)
          if (std::abs(pr.sigma0 - Q.blocks[b].root.sigma0) < 1e-6) CHECK(testing::canonical(got) == pr.blocks);
      }
    }
  }
}

TEST_CASE("sign condition") {
  CHECK(sign_condition(model(sq())));
  CHECK_FALSE(sign_condition(model(lin())));
  CHECK(sign_condition(model(strip())));
}

TEST_CASE("Friedrichs and Krein subspaces") {
  QuotientModel q = model(sq());
  ExtensionSubspace F = friedrichs_subspace(q);
  REQUIRE(F.dim() == 1);
  // the pole-order-one germ: second coordinate of the chain basis vanishes
  CHECK(subspace_equal(F.basis, unit(2, 0)));
  ExtensionSubspace K = krein_subspace(q);
  CHECK(subspace_equal(F.basis, K.basis));

  QuotientModel b = model(strip());
  CHECK(subspace_equal(friedrichs_subspace(b).basis, unit(2, 0)));
  CHECK(subspace_equal(krein_subspace(b).basis, unit(2, 1)));

  QuotientModel e = model(scalar({2.0}, 2));
  CHECK(friedrichs_subspace(e).dim() == 0);
  CHECK(krein_subspace(e).dim() == 0);

  CHECK_THROWS_AS(friedrichs_subspace(model(lin())), Error);
  // semibounded fails for -(sigma+i)^2 although the sign condition holds
  try {
    friedrichs_subspace(model(testing::negated(sq())));
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotSemibounded);
  }
}

TEST_CASE("invariant selfadjoint construction") {
  QuotientModel d = model(testing::diag_pencil({lin(), testing::negated(lin())}));
  ExtensionSubspace D = construct_invariant_selfadjoint(d);
  REQUIRE(D.dim() == 1);
  CHECK(is_selfadjoint(d, D));
  CHECK(is_invariant(d, D));
  try {
    construct_invariant_selfadjoint(model(lin()));
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NoInvariantSelfadjointExtension);
  }
  QuotientModel q = model(sq());
  CHECK(subspace_equal(construct_invariant_selfadjoint(q).basis, friedrichs_subspace(q).basis));
}

TEST_CASE("order relation") {
  QuotientModel b = model(strip());
  ExtensionSubspace F = friedrichs_subspace(b), K = krein_subspace(b);
  CHECK(order_leq(b, K, F));
  CHECK_FALSE(order_leq(b, F, K));
  CHECK(order_leq(b, F, F));
  CHECK(order_leq(b, K, K));
  CHECK_THROWS_AS(order_leq(b, {unit(2, 0) + unit(2, 1)}, F), Error);
}

TEST_CASE("semibounded check") {
  Tolerances tol;
  CHECK(semibounded_check(sq(), tol));
  CHECK_FALSE(semibounded_check(lin(), tol));
  for (unsigned seed = 1; seed <= 20; ++seed) CHECK(semibounded_check(testing::planted_semibounded(seed).p, tol));
}

TEST_CASE("invariant extensions from lower invariant subspaces") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    QuotientModel Q = model(testing::planted_semibounded(seed).p);
    ExtensionSubspace F = friedrichs_subspace(Q), K = krein_subspace(Q);
    for (size_t b = 0; b < Q.blocks.size(); ++b) {
      if (Q.blocks[b].root.band != Band::StripLower) continue;
      ExtensionSubspace D = invariant_extension_from(Q, root_space(Q, static_cast<int>(b)));
      CHECK(is_selfadjoint(Q, D));
      CHECK(is_invariant(Q, D));
      CHECK(order_leq(Q, K, D));
      CHECK(order_leq(Q, D, F));
    }
    ExtensionSubspace D0 = invariant_extension_from(Q, {Mat(Q.dim(), 0)});
    CHECK(subspace_equal(D0.basis, K.basis));
    ExtensionSubspace D1 = invariant_extension_from(Q, lower_space(Q));
    CHECK(subspace_equal(D1.basis, F.basis));
  }
}

TEST_CASE("Gram structure on the planted corpus") {
  for (unsigned seed = 1; seed <= 30; ++seed) {
    QuotientModel Q = model(testing::planted_critical(seed).p);
    CHECK(Q.cross_block_max <= 1e-9);
    CHECK(selfadjoint_defect(Q) <= 1e-9);
    Inertia d = deficiency_indices(Q);
    CHECK(d.n_zero == 0);
    CHECK(d.n_plus + d.n_minus == Q.dim());
    int sig = 0;
    for (const auto& inv : critical_invariants(Q)) sig += inv.signature_contribution;
    CHECK(d.n_plus - d.n_minus == sig);
  }
}
