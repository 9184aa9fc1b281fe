#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qnesn/dimreduce.hpp"

using namespace qnesn;

namespace {

std::vector<Eigen::MatrixXd> random_stack(std::size_t count, Eigen::Index rows,
                                          Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Eigen::MatrixXd> stack;
    for (std::size_t s = 0; s < count; ++s) {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
        stack.push_back(std::move(m));
    }
    return stack;
}

// Brute-force covariance accumulation + Jacobi eigendecomposition.
void brute_force_2dpca(const std::vector<Eigen::MatrixXd>& samples,
                       std::vector<std::vector<double>>& gt, std::vector<double>& vals,
                       std::vector<std::vector<double>>& vects) {
    const auto rows = samples[0].rows();
    const auto cols = samples[0].cols();
    std::vector<std::vector<double>> mean(rows, std::vector<double>(cols, 0.0));
    for (const auto& s : samples)
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) mean[i][j] += s(i, j) / samples.size();
    gt.assign(cols, std::vector<double>(cols, 0.0));
    for (const auto& s : samples)
        for (Eigen::Index p = 0; p < cols; ++p)
            for (Eigen::Index q = 0; q < cols; ++q) {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < rows; ++i)
                    acc += (s(i, p) - mean[i][p]) * (s(i, q) - mean[i][q]);
                gt[p][q] += acc / samples.size();
            }
    oracle::jacobi_eigen_sym(gt, vals, vects);
}

}  // namespace

TEST_CASE("fit_2dpca: identical samples give a zero Gt and zero eigenvalues") {
    Eigen::MatrixXd one(4, 3);
    one << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12;
    std::vector<Eigen::MatrixXd> stack(5, one);
    auto basis = fit_2dpca(stack, 3);
    for (Eigen::Index i = 0; i < basis.eigvals.size(); ++i)
        CHECK(std::abs(basis.eigvals(i)) < 1e-10);
    // columns still orthonormal
    Eigen::MatrixXd gram = basis.eigvects.transpose() * basis.eigvects;
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("fit_2dpca: full dimension preserves total variance and norms") {
    auto stack = random_stack(12, 4, 5, 42);
    auto basis = fit_2dpca(stack, 5);
    CHECK(basis.captured_variance() == doctest::Approx(basis.total_variance).epsilon(1e-8));
    for (const auto& s : stack) {
        Eigen::MatrixXd projected = project(basis, s);
        CHECK(projected.norm() == doctest::Approx(s.norm()).epsilon(1e-8));
    }
}

TEST_CASE("fit_2dpca matches the brute-force oracle on hand stacks") {
    SUBCASE("three 2x2 samples") {
        std::vector<Eigen::MatrixXd> stack;
        Eigen::MatrixXd s1(2, 2), s2(2, 2), s3(2, 2);
        s1 << 1, 0, 0, 1;
        s2 << 2, 1, -1, 0;
        s3 << 0, -1, 1, 2;
        stack = {s1, s2, s3};

        std::vector<std::vector<double>> gt, vects;
        std::vector<double> vals;
        brute_force_2dpca(stack, gt, vals, vects);

        auto basis = fit_2dpca(stack, 2);
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(basis.eigvals(static_cast<Eigen::Index>(i)) ==
                  doctest::Approx(vals[i]).epsilon(1e-8));
        // leading eigenvector matches up to sign
        double dot = 0.0;
        for (std::size_t i = 0; i < 2; ++i) dot += basis.eigvects(static_cast<Eigen::Index>(i), 0) * vects[i][0];
        CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("random 4x3 stack") {
        auto stack = random_stack(6, 4, 3, 7);
        std::vector<std::vector<double>> gt, vects;
        std::vector<double> vals;
        brute_force_2dpca(stack, gt, vals, vects);
        auto basis = fit_2dpca(stack, 3);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(basis.eigvals(static_cast<Eigen::Index>(i)) ==
                  doctest::Approx(vals[i]).epsilon(1e-8));
        for (std::size_t col = 0; col < 3; ++col) {
            double dot = 0.0;
            for (std::size_t i = 0; i < 3; ++i)
                dot += basis.eigvects(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(col)) *
                       vects[i][col];
            CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("fit_2dpca: dim larger than the width is rejected") {
    auto stack = random_stack(3, 4, 3, 9);
    CHECK_THROWS_AS(fit_2dpca(stack, 4), std::invalid_argument);
}

TEST_CASE("project") {
    auto stack = random_stack(8, 4, 6, 11);
    auto basis = fit_2dpca(stack, 4);
    SUBCASE("zero sample projects to zero") {
        Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 6);
        CHECK(project(basis, zero).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("random sample matches the direct product") {
        Eigen::MatrixXd want = stack[0] * basis.eigvects;
        CHECK((project(basis, stack[0]) - want).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("shape mismatch rejected") {
        Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 5);
        CHECK_THROWS_AS(project(basis, bad), std::invalid_argument);
    }
}

TEST_CASE("fit_pca") {
    SUBCASE("data on a line: one component captures everything") {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        Eigen::VectorXd direction(3);
        direction << 1.0, -2.0, 0.5;
        direction.normalize();
        Eigen::MatrixXd samples(40, 3);
        for (int i = 0; i < 40; ++i) samples.row(i) = (u(rng) * direction).transpose();
        auto basis = fit_pca(samples, 1);
        CHECK(basis.captured_variance() / basis.total_variance ==
              doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("isotropic data: k components capture about k/M") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g(0.0, 1.0);
        const int m = 8;
        Eigen::MatrixXd samples(4000, m);
        for (int i = 0; i < samples.rows(); ++i)
            for (int j = 0; j < m; ++j) samples(i, j) = g(rng);
        auto basis = fit_pca(samples, 2);
        const double ratio = basis.captured_variance() / basis.total_variance;
        CHECK(ratio > 1.8 / m);
        CHECK(ratio < 3.2 / m);
    }
    SUBCASE("full dimension reconstructs exactly") {
        auto samples = random_stack(1, 20, 5, 21)[0];
        auto basis = fit_pca(samples, 5);
        for (int i = 0; i < samples.rows(); ++i) {
            Eigen::VectorXd x = samples.row(i).transpose();
            Eigen::VectorXd rec = basis.eigvects * project_vector(basis, x);
            CHECK((rec - x).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
    SUBCASE("dim 0 or > M rejected") {
        auto samples = random_stack(1, 10, 4, 22)[0];
        CHECK_THROWS_AS(fit_pca(samples, 5), std::invalid_argument);
        CHECK_THROWS_AS(fit_pca(samples, 0), std::invalid_argument);
    }
}

TEST_CASE("projected variances are nonincreasing; captured variance monotone in dim") {
    auto stack = random_stack(30, 4, 6, 31);
    auto basis = fit_2dpca(stack, 6);
    for (Eigen::Index i = 0; i + 1 < basis.eigvals.size(); ++i)
        CHECK(basis.eigvals(i) >= basis.eigvals(i + 1) - 1e-12);

    // per-column variance of the projected samples follows the eigenvalues
    std::vector<Eigen::MatrixXd> projected;
    for (const auto& s : stack) projected.push_back(project(basis, s));
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(4, 6);
    for (const auto& p : projected) mean += p;
    mean /= static_cast<double>(projected.size());
    Eigen::VectorXd col_var = Eigen::VectorXd::Zero(6);
    for (const auto& p : projected)
        col_var += (p - mean).colwise().squaredNorm().transpose() /
                   static_cast<double>(projected.size());
    for (Eigen::Index i = 0; i + 1 < col_var.size(); ++i)
        CHECK(col_var(i) >= col_var(i + 1) - 1e-9);

    double prev = 0.0;
    for (std::size_t dim = 1; dim <= 6; ++dim) {
        auto b = fit_2dpca(stack, dim);
        CHECK(b.captured_variance() >= prev - 1e-12);
        prev = b.captured_variance();
    }
}

TEST_CASE("2dPCA on 1xM rows shares Gt with vector PCA") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int s = 25, m = 5;
    Eigen::MatrixXd rows(s, m);
    std::vector<Eigen::MatrixXd> stack;
    for (int i = 0; i < s; ++i) {
        Eigen::MatrixXd sample(1, m);
        for (int j = 0; j < m; ++j) {
            sample(0, j) = u(rng);
            rows(i, j) = sample(0, j);
        }
        stack.push_back(sample);
    }
    auto from_stack = fit_2dpca(stack, m);
    auto from_rows = fit_pca(rows, m);
    CHECK((from_stack.eigvals - from_rows.eigvals).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((from_stack.eigvects - from_rows.eigvects).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("quaternion component round trip") {
    std::vector<Quaternion> v{{1, 2, 3, 4}, {-1, 0.5, 0, 2}};
    auto m = components_matrix(v);
    CHECK(m.rows() == 4);
    CHECK(m.cols() == 2);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(3, 1) == 2.0);
    auto back = quaternions_from_components(m);
    CHECK(back == v);
}
