#include "oracles.hpp"

#include "ki/core/errors.hpp"
#include "ki/harness/experiment.hpp"
#include "ki/harness/problem.hpp"
#include "ki/models/expsin.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <memory>

using namespace ki;

namespace {

ConvergenceRecord completed(std::vector<double> costs) {
    ConvergenceRecord r;
    r.log_cost = std::move(costs);
    return r;
}

ProblemSetup small_exp_sin() {
    ExpSinOptions o;
    o.quadrature_points = 256;
    return make_exp_sin_setup(o);
}

}  // namespace

TEST_CASE("generate_data: vanishing noise returns G(u*)") {
    const ExpSinModel m;
    const Vector truth = (Vector(2) << 1.0, 0.8).finished();
    SeededRng rng(1);
    const Vector y = generate_data(m, truth, SpdMatrix::scaled_identity(2, 1e-30), rng);
    CHECK((y - m.evaluate(truth)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("generate_data: reproducible and correctly scaled") {
    const LinearModel m(Matrix::Identity(3, 3));
    const Vector truth = Vector::Zero(3);
    Matrix l(3, 3);
    l << 1.0, 0.0, 0.0, 0.5, 2.0, 0.0, -0.3, 0.4, 0.7;
    const SpdMatrix gamma(l * l.transpose());
    SeededRng a(7, kDataStream), b(7, kDataStream);
    CHECK(generate_data(m, truth, gamma, a) == generate_data(m, truth, gamma, b));

    SeededRng rng(8);
    const int n = 20000;
    Matrix acc = Matrix::Zero(3, 3);
    for (int i = 0; i < n; ++i) {
        const Vector y = generate_data(m, truth, gamma, rng);
        acc += y * y.transpose();
    }
    acc /= n;
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(acc(i, i) == doctest::Approx(gamma.matrix()(i, i)).epsilon(0.05));
    }
    CHECK(std::abs(acc(1, 0) - gamma.matrix()(1, 0)) < 0.1);
}

TEST_CASE("misfit_cost examples") {
    CHECK(misfit_cost(Vector::Ones(2), Vector::Ones(2), SpdMatrix::identity(2)) == 0.0);
    CHECK(misfit_cost((Vector(2) << 3.0, 0.0).finished(), Vector::Zero(2), SpdMatrix::identity(2)) ==
          doctest::Approx(4.5));
    CHECK(misfit_cost((Vector(1) << 2.0).finished(), Vector::Zero(1), SpdMatrix(Matrix::Constant(1, 1, 4.0))) ==
          doctest::Approx(0.5));
    Matrix b(3, 3);
    b << 2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 0.9;
    const Vector y = (Vector(3) << 0.4, -1.2, 2.0).finished();
    const Vector g = (Vector(3) << 0.1, 0.3, -0.5).finished();
    const Vector r = y - g;
    const double ref = 0.5 * r.dot(oracle::gauss_jordan_inverse(b) * r);
    CHECK(misfit_cost(y, g, SpdMatrix(b)) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("log_cost floors a zero misfit") {
    CHECK(log_cost(0.0) == kLogCostFloor);
    CHECK(log_cost(1.0) == 0.0);
    CHECK(log_cost(std::exp(2.0)) == doctest::Approx(2.0));
}

TEST_CASE("problem setups have consistent shapes") {
    const auto es = small_exp_sin();
    CHECK(es.truth(0) == 1.0);
    CHECK(es.truth(1) == 0.8);
    SeededRng rng(1, kDataStream);
    CHECK_NOTHROW(es.realize(rng).validate());

    Lorenz96Options lo;
    lo.spinup_time = 10.0;
    const auto l96 = make_lorenz96_setup(lo);
    CHECK(l96.truth.size() == 20);
    CHECK(l96.gamma.matrix()(0, 0) == doctest::Approx(0.25));

    DarcyOptions d;
    d.model.grid_n = 10;
    d.model.kl_dim = 4;
    const auto ds = make_darcy_setup(d);
    CHECK((ds.truth.array() == -1.5).all());
    const double gmax = ds.model->evaluate(ds.truth).cwiseAbs().maxCoeff();
    CHECK(std::sqrt(ds.gamma.matrix()(0, 0)) == doctest::Approx(0.01 * gmax));

    LinearOptions li;
    li.input_dim = 3;
    li.output_dim = 5;
    const auto ls = make_linear_setup(li);
    CHECK(ls.model->output_dim() == 5);
}

TEST_CASE("run_trial with zero iterations records one cost") {
    const auto setup = small_exp_sin();
    SeededRng rng(3, kDataStream);
    const auto problem = setup.realize(rng);
    TrialConfig cfg;
    cfg.seed = 3;
    cfg.iterations = 0;
    for (const auto alg : {Algorithm::Eki, Algorithm::Etki, Algorithm::Uki}) {
        cfg.algorithm = alg;
        const auto rec = run_trial(problem, cfg);
        CHECK(rec.completed());
        CHECK(rec.log_cost.size() == 1);
    }
}

TEST_CASE("run_trial is deterministic and pairs accelerated and plain arms") {
    const auto setup = small_exp_sin();
    SeededRng rng(5, kDataStream);
    const auto problem = setup.realize(rng);
    TrialConfig cfg;
    cfg.seed = 5;
    cfg.iterations = 10;
    const auto a = run_trial(problem, cfg);
    const auto b = run_trial(problem, cfg);
    CHECK(a.log_cost == b.log_cost);
    CHECK(a.log_cost.size() == 11);
    cfg.schedule = RecursiveSchedule{};
    const auto c = run_trial(problem, cfg);
    // Same seed, same initial ensemble: the first iteration is un-nudged in both arms.
    CHECK(c.log_cost[0] == a.log_cost[0]);
    CHECK(c.log_cost[1] == a.log_cost[1]);
    CHECK(c.log_cost[5] != a.log_cost[5]);
}

TEST_CASE("run_trial records divergence instead of throwing") {
    auto setup = small_exp_sin();
    setup.gamma = SpdMatrix::scaled_identity(2, 1e-24);
    SeededRng rng(2, kDataStream);
    const auto problem = setup.realize(rng);
    TrialConfig cfg;
    cfg.seed = 2;
    cfg.iterations = 60;
    cfg.schedule = ConstantSchedule{0.99};
    const auto rec = run_trial(problem, cfg);
    REQUIRE_FALSE(rec.completed());
    CHECK(rec.log_cost.size() == rec.diverged_at);
    CHECK(rec.diverged_at < 60);
    CHECK(!rec.message.empty());
}

TEST_CASE("summarize_series examples") {
    const auto s = summarize_series({completed({0.0, 4.0}), completed({2.0, 4.0})});
    CHECK(s.mean_log_cost[0] == doctest::Approx(1.0));
    CHECK(s.stderr_log_cost[0] == doctest::Approx(1.0));
    CHECK(s.stderr_log_cost[1] == 0.0);
    CHECK(s.trial_count == 2);
    CHECK(s.completed_count == 2);

    const auto one = summarize_series({completed({3.0})});
    CHECK(one.mean_log_cost[0] == 3.0);
    CHECK(one.stderr_log_cost[0] == 0.0);

    ConvergenceRecord bad = completed({99.0});
    bad.status = TrialStatus::Diverged;
    const auto mixed = summarize_series({completed({1.0}), bad, completed({3.0})});
    CHECK(mixed.mean_log_cost[0] == doctest::Approx(2.0));
    CHECK(mixed.trial_count == 3);
    CHECK(mixed.completed_count == 2);

    CHECK_THROWS(summarize_series({bad}));
    CHECK_THROWS(summarize_series({completed({1.0}), completed({1.0, 2.0})}));
}

TEST_CASE("summarize_series standard error shrinks like 1/sqrt(n)") {
    SeededRng rng(9);
    std::vector<ConvergenceRecord> recs;
    for (int i = 0; i < 1000; ++i) recs.push_back(completed({rng.standard_normal()}));
    const auto s = summarize_series(recs);
    CHECK(std::abs(s.mean_log_cost[0]) < 4.0 / std::sqrt(1000.0));
    CHECK(s.stderr_log_cost[0] == doctest::Approx(1.0 / std::sqrt(1000.0)).epsilon(0.1));
}

TEST_CASE("run_experiment pairs trials across cells and ignores the worker count") {
    const auto setup = small_exp_sin();
    std::vector<CellSpec> grid;
    for (const MomentumSchedule s : {MomentumSchedule{NoAcceleration{}}, MomentumSchedule{RecursiveSchedule{}}}) {
        CellSpec c;
        c.schedule = s;
        c.iterations = 6;
        grid.push_back(c);
    }
    CellSpec uki;
    uki.algorithm = Algorithm::Uki;
    uki.iterations = 6;
    grid.push_back(uki);

    ExperimentOptions opts;
    opts.n_trials = 4;
    opts.base_seed = 100;
    opts.workers = 1;
    const auto serial = run_experiment(setup, grid, opts);
    opts.workers = 3;
    const auto parallel = run_experiment(setup, grid, opts);
    REQUIRE(serial.size() == 3);
    for (std::size_t c = 0; c < serial.size(); ++c) {
        CHECK(serial[c].cell_id == c);
        REQUIRE(serial[c].records.size() == 4);
        for (std::size_t t = 0; t < 4; ++t) {
            CHECK(serial[c].records[t].config.seed == 100 + t);
            CHECK(serial[c].records[t].log_cost == parallel[c].records[t].log_cost);
        }
        CHECK(serial[c].summary->mean_log_cost == parallel[c].summary->mean_log_cost);
    }
    for (std::size_t t = 0; t < 4; ++t) {
        CHECK(serial[0].records[t].log_cost[0] == serial[1].records[t].log_cost[0]);
    }

    // Trial t reproduces in isolation.
    SeededRng rng(102, kDataStream);
    const auto problem = setup.realize(rng);
    CHECK(run_trial(problem, grid[1].trial(102)).log_cost == serial[1].records[2].log_cost);
}

TEST_CASE("run_experiment evaluates the forward model N(J+1) times per trial") {
    auto setup = small_exp_sin();
    auto counted = std::make_shared<CountingModel>(setup.model);
    setup.model = counted;
    CellSpec c;
    c.ensemble_size = 7;
    c.iterations = 9;
    c.schedule = RecursiveSchedule{};
    ExperimentOptions opts;
    opts.n_trials = 3;
    // Data generation adds one evaluation per trial.
    run_experiment(setup, {c}, opts);
    CHECK(counted->calls() == 3 * (7 * 10 + 1));
}

TEST_CASE("KI_THREADS controls the default worker count") {
    ::setenv("KI_THREADS", "3", 1);
    CHECK(workers_from_env() == 3);
    ::setenv("KI_THREADS", "0", 1);
    CHECK(workers_from_env() >= 1);
    ::unsetenv("KI_THREADS");
    CHECK(workers_from_env() >= 1);
}
