#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tasbm/error.hpp"
#include "tasbm/fit.hpp"
#include "tasbm/generator.hpp"

using namespace tasbm;

namespace {

GeneratorSpec two_group_spec(std::uint64_t seed, double scale = 1.0) {
  GeneratorSpec spec;
  spec.seed = seed;
  spec.out_groups = {20, 30};
  spec.in_groups = {10, 40};
  RateMatrix theta(2, 2);
  theta << 2e-6, 5e-7, 4e-5, 1e-5;
  spec.intervals.push_back({{0, 1000000}, theta * scale});
  return spec;
}

}  // namespace

TEST_SUITE("fit") {
  TEST_CASE("bucket config") {
    const BucketConfig b{{1.0, 10.0}};
    CHECK(b.bucket_count() == 3);
    CHECK(b.bucket_of(0) == 0);
    CHECK(b.bucket_of(1.0) == 1);
    CHECK(b.bucket_of(9.99) == 1);
    CHECK(b.bucket_of(1e9) == 2);
    CHECK_THROWS_AS((BucketConfig{{2.0, 1.0}}.validate()), ArgumentError);
    CHECK_THROWS_AS((BucketConfig{{0.0}}.validate()), ArgumentError);

    const auto log = BucketConfig::log_spaced(1e-3, 1.0);
    REQUIRE(log.boundaries.size() == 4);
    CHECK(log.boundaries[3] == doctest::Approx(1.0));

    const std::vector<double> rates{0, 0.1, 0.11, 0.12, 5, 5.5, 300};
    const auto gaps = BucketConfig::largest_gaps(rates, 3);
    REQUIRE(gaps.boundaries.size() == 2);
    CHECK(gaps.bucket_of(0.12) == 0);
    CHECK(gaps.bucket_of(5) == 1);
    CHECK(gaps.bucket_of(300) == 2);
  }

  TEST_CASE("uniform rates collapse to one state") {
    // Complete directed graph on 4 nodes, 2 edges per pair.
    std::vector<TemporalEdge> edges;
    Timestamp t = 0;
    for (int rep = 0; rep < 2; ++rep) {
      for (NodeId u = 0; u < 4; ++u) {
        for (NodeId v = 0; v < 4; ++v) {
          if (u != v) edges.push_back({u, v, t++});
        }
      }
    }
    const TemporalGraph g(4, edges);
    const auto w = WindowView::of(g, {0, 100});
    const auto model = fit_window_approx(w, BucketPolicy::fixed(BucketConfig::single()));
    REQUIRE(model.theta.size() == 1);
    CHECK(model.theta(0, 0) == doctest::Approx(24.0 / (4 * 4 * 100)));
    // The exact pass excludes self-pairs.
    CHECK(fit_window_exact(w, model)(0, 0) == doctest::Approx(24.0 / (12 * 100)));
  }

  TEST_CASE("zero-edge window gives one zero state") {
    const TemporalGraph g(5, {});
    const auto w = WindowView::of(g, {0, 10});
    const auto model = fit_window(w, BucketPolicy::automatic(), true);
    CHECK(model.out_state_count() == 1);
    CHECK(model.in_state_count() == 1);
    CHECK(model.node_count() == 5);
    CHECK(model.theta(0, 0) == 0);
  }

  TEST_CASE("approximate theta splits by out-state degree totals") {
    // Out-group A (nodes 0,1) sends 90 edges, B (nodes 2,3) 10; every node
    // receives 25, so there is one in-state.
    std::vector<TemporalEdge> edges;
    Timestamp t = 0;
    const auto send = [&](NodeId u, int count) {
      for (int i = 0; i < count; ++i) edges.push_back({u, static_cast<NodeId>((u + 1 + i % 3) % 4), t++});
    };
    send(0, 45);
    send(1, 45);
    send(2, 5);
    send(3, 5);
    const TemporalGraph g(4, edges);
    const auto w = WindowView::of(g, {0, 1000});
    const auto model = fit_window_approx(w, BucketPolicy::fixed({{0.01}}));
    REQUIRE(model.out_state_count() == 2);
    REQUIRE(model.in_state_count() == 1);
    const double col_ratio = model.theta(1, 0) / model.theta(0, 0);
    CHECK(col_ratio == doctest::Approx(9.0));
    CHECK(model.out_state_bucket == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("exact theta formula") {
    // Out-state {0,1}, in-state {2,3,4}; 6 edges in T = 1.
    std::vector<TemporalEdge> edges{{0, 2, 0}, {0, 3, 0}, {0, 4, 0},
                                    {1, 2, 0}, {1, 3, 0}, {1, 4, 0}};
    const TemporalGraph g(5, edges);
    const auto w = WindowView::of(g, {0, 1});
    TasbmModel model;
    model.window = {0, 1};
    model.out_state_of = {1, 1, 0, 0, 0};
    model.in_state_of = {0, 0, 1, 1, 1};
    model.joint_counts = CountMatrix::Zero(2, 2);
    model.joint_counts(1, 0) = 2;
    model.joint_counts(0, 1) = 3;
    model.theta = RateMatrix::Zero(2, 2);
    const auto theta = fit_window_exact(w, model);
    CHECK(theta(1, 1) == doctest::Approx(1.0));
    CHECK(theta(0, 0) == 0);

    model.out_state_of.pop_back();
    CHECK_THROWS_AS(fit_window_exact(w, model), ArgumentError);
  }

  TEST_CASE("exact fit conserves degrees and makes at most two edge passes") {
    const auto g = sample_network(two_group_spec(21));
    const auto w = WindowView::of(g, {0, 1000000});
    FitCounters counters;
    const auto model = fit_window(w, BucketPolicy::automatic(), true, &counters);
    CHECK(counters.edge_passes == 2);
    CHECK(counters.node_passes == 1);
    // Reconstruct m_rs from theta and check both margins against degrees.
    const auto n_out = model.out_counts();
    const auto n_in = model.in_counts();
    std::vector<double> out_total(model.out_state_count(), 0), in_total(model.in_state_count(), 0);
    for (const auto& e : w.edges()) {
      out_total[model.out_state_of[e.src]] += 1;
      in_total[model.in_state_of[e.dst]] += 1;
    }
    for (std::size_t r = 0; r < model.out_state_count(); ++r) {
      double row = 0;
      for (std::size_t s = 0; s < model.in_state_count(); ++s) {
        row += model.theta(r, s) * static_cast<double>(n_out[r] * n_in[s] - model.joint_counts(r, s)) * 1000000;
      }
      CHECK(row == doctest::Approx(out_total[r]));
    }
    for (std::size_t s = 0; s < model.in_state_count(); ++s) {
      double col = 0;
      for (std::size_t r = 0; r < model.out_state_count(); ++r) {
        col += model.theta(r, s) * static_cast<double>(n_out[r] * n_in[s] - model.joint_counts(r, s)) * 1000000;
      }
      CHECK(col == doctest::Approx(in_total[s]));
    }

    FitCounters approx;
    fit_window_approx(w, BucketPolicy::gaps(3), &approx);
    CHECK(approx.edge_passes == 1);
  }

  TEST_CASE("pi vectors and membership invariants") {
    const auto g = sample_network(two_group_spec(22));
    const auto model = fit_window(WindowView::of(g, {0, 1000000}), BucketPolicy::gaps(2), false);
    CHECK(model.pi_out().sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.pi_in().sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.out_counts().sum() == 50);
    CHECK(model.in_counts().sum() == 50);
    CHECK_NOTHROW(model.validate());
  }

  TEST_CASE("true buckets recover memberships exactly") {
    auto spec = two_group_spec(23, 5.0);
    const auto g = sample_network(spec);
    const auto w = WindowView::of(g, {0, 1000000});
    // Node out-rates are about 0.0002 and 0.004, in-rates 0.0062 and 0.00155.
    const auto out_rate_model = fit_window(w, BucketPolicy::fixed({{0.0008, 0.003}}), true);
    for (NodeId u = 0; u < 50; ++u) {
      CHECK(out_rate_model.out_state_of[u] == (u < 20 ? 0u : 1u));
      CHECK(out_rate_model.in_state_of[u] == (u < 10 ? 1u : 0u));
    }
  }

  TEST_CASE("exact theta within five standard errors of the truth") {
    auto spec = two_group_spec(24, 4.0);
    spec.intervals[0].span = {0, 1000000};
    const auto g = sample_network(spec);
    const auto w = WindowView::of(g, {0, 1000000});
    const auto truth = model_from_spec(spec, 0);
    TasbmModel memberships = truth;
    const auto theta = fit_window_exact(w, memberships);
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < 2; ++s) {
        const double pairs = static_cast<double>(truth.out_counts()[r] * truth.in_counts()[s] -
                                                 truth.joint_counts(r, s));
        const double mean_edges = truth.theta(r, s) * pairs * 1000000;
        const double se = std::sqrt(mean_edges) / (pairs * 1000000);
        CHECK(std::abs(theta(r, s) - truth.theta(r, s)) < 5 * se);
      }
    }
  }

  TEST_CASE("series: doubled rate in the second window") {
    GeneratorSpec spec = two_group_spec(25, 3.0);
    spec.intervals.push_back({{1000000, 2000000}, spec.intervals[0].theta * 2.0});
    const auto g = sample_network(spec);
    const auto models = fit_series(g, 1000000, BucketPolicy::fixed(BucketConfig::single()), true);
    REQUIRE(models.size() == 2);
    CHECK(models[1].theta(0, 0) / models[0].theta(0, 0) == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("series on an empty graph") {
    const TemporalGraph g(3, {});
    SliceOptions options;
    options.end = 30;
    const auto models = fit_series(g, 10, BucketPolicy::automatic(), true, options);
    REQUIRE(models.size() == 3);
    for (const auto& m : models) CHECK(m.theta.isZero());
  }

  TEST_CASE("model text round trip") {
    const auto g = sample_network(two_group_spec(26));
    const auto models = fit_series(g, 500000, BucketPolicy::automatic(), true);
    std::stringstream buffer;
    write_models(buffer, models);
    const auto back = read_models(buffer);
    REQUIRE(back.size() == models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
      CHECK(back[i].window == models[i].window);
      CHECK(back[i].theta == models[i].theta);
      CHECK(back[i].joint_counts == models[i].joint_counts);
      CHECK(back[i].out_state_of == models[i].out_state_of);
      CHECK(back[i].out_buckets == models[i].out_buckets);
    }
    std::stringstream again;
    write_models(again, back);
    std::stringstream first;
    write_models(first, models);
    CHECK(again.str() == first.str());

    std::stringstream bad("[model]\nwindow 0 10\n");
    CHECK_THROWS_AS(read_models(bad), ParseError);
  }
}
