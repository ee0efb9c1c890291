#include "doctest.h"

#include "pairq/error.hpp"
#include "pairq/linalg.hpp"
#include "pairq/synthetic.hpp"
#include "test_util.hpp"

using namespace pairq;

TEST_CASE("isotropic samples have identity covariance up to sampling noise") {
    SyntheticSpec spec;
    spec.n = 8;
    spec.nx = 20000;
    spec.nq_train = 10;
    spec.nq_eval = 10;
    const SyntheticData d = gen_synthetic(spec, 1);
    const DenseMatrix cov = sample_covariance(d.database);
    // E||S - I||_F^2 = (n^2 + n) / N for Gaussian data; allow five standard errors.
    const double tol = 5.0 * std::sqrt(static_cast<double>(spec.n * spec.n + spec.n) / spec.nx);
    CHECK(frobenius_norm(cov - DenseMatrix::identity(8)) < tol);
}

TEST_CASE("requested eigenvalues are reproduced") {
    CovarianceSpec c;
    c.decay = 0.0;
    c.scale = 2.5;
    for (double v : covariance_eigenvalues(c, 5)) CHECK(v == 2.5);
    c.decay = 1.0;
    const auto l = covariance_eigenvalues(c, 4);
    CHECK(l[3] == doctest::Approx(2.5 / 4.0));

    SyntheticSpec spec;
    spec.n = 6;
    spec.nx = 40000;
    spec.nq_train = 10;
    spec.nq_eval = 1;
    spec.database.eigenvalues = {9, 4, 1, 1, 0.25, 0.01};
    const SyntheticData d = gen_synthetic(spec, 2);
    const SymEig e = sym_eig(sample_covariance(d.database));
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(e.eigenvalues[i] == doctest::Approx(spec.database.eigenvalues[i]).epsilon(0.05));
    }
}

TEST_CASE("query condition number follows the decay") {
    SyntheticSpec spec;
    spec.n = 16;
    spec.nx = 10;
    spec.nq_train = 20000;
    spec.queries.decay = 1.5;
    const SyntheticData d = gen_synthetic(spec, 3);
    CHECK(d.query_g_condition == doctest::Approx(64.0).epsilon(0.15));
}

TEST_CASE("generation is deterministic and shapes follow the request") {
    SyntheticSpec spec;
    spec.n = 5;
    spec.nx = 100;
    spec.nq_train = 30;
    spec.nq_eval = 7;
    spec.queries.mean_offset = 2.0;
    const SyntheticData a = gen_synthetic(spec, 9);
    const SyntheticData b = gen_synthetic(spec, 9);
    CHECK(a.database == b.database);
    CHECK(a.train_queries == b.train_queries);
    CHECK(a.eval_queries == b.eval_queries);
    CHECK(a.database.rows() == 100);
    CHECK(a.train_queries.rows() == 30);
    CHECK(a.eval_queries.rows() == 7);
    CHECK_FALSE(gen_synthetic(spec, 10).database == a.database);
}

TEST_CASE("invalid synthetic specs are rejected") {
    SyntheticSpec spec;
    spec.n = 1;
    CHECK_THROWS_AS(gen_synthetic(spec, 0), Error);
    spec.n = 3;
    spec.database.eigenvalues = {1.0, -0.5, 1.0};
    try {
        gen_synthetic(spec, 0);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPositiveSemidefinite);
    }
    spec.database.eigenvalues = {1.0, 1.0};
    CHECK_THROWS_AS(gen_synthetic(spec, 0), Error);
}

TEST_CASE("random orthogonal matrices are orthogonal") {
    for (std::size_t n : {2u, 10u, 50u}) CHECK(orthogonality_error(random_orthogonal(n, n)) < 1e-12);
}
