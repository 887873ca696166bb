#include <doctest.h>

#include <map>
#include <random>
#include <tuple>

#include "eventwarp/dtw.hpp"
#include "support/test_helpers.hpp"

using namespace eventwarp;
using eventwarp::testing::random_times;
using eventwarp::testing::to_vector;

namespace {

// Independent recursive count of admissible paths, memoized on
// (position, last move). Used only to cross-check enumerate_alignments.
std::uint64_t count_paths(Eigen::Index i, Eigen::Index j, Move last, Eigen::Index l,
                          Eigen::Index m,
                          std::map<std::tuple<Eigen::Index, Eigen::Index, Move>, std::uint64_t>& memo) {
  if (i == l && j == m) return 1;
  const auto key = std::make_tuple(i, j, last);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::uint64_t total = 0;
  if (i < l && j < m) total += count_paths(i + 1, j + 1, Move::both, l, m, memo);
  if (i < l && last != Move::target) total += count_paths(i + 1, j, Move::source, l, m, memo);
  if (j < m && last != Move::source) total += count_paths(i, j + 1, Move::target, l, m, memo);
  memo[key] = total;
  return total;
}

std::uint64_t count_paths(Eigen::Index l, Eigen::Index m) {
  std::map<std::tuple<Eigen::Index, Eigen::Index, Move>, std::uint64_t> memo;
  return count_paths(1, 1, Move::both, l, m, memo);
}

struct Sequences {
  Eigen::VectorXd t, a, s, b;
};

Sequences figure_fixture() {
  Sequences f;
  f.t = to_vector({0.0, 1.0, 2.0, 3.0, 4.0});
  f.a = to_vector({0.1, 0.1, 0.1, 0.5, 0.9});
  f.s = to_vector({0.0, 1.5, 3.0, 4.5});
  f.b = to_vector({0.1, 0.5, 0.9, 0.9});
  return f;
}

const std::vector<Move> kFigurePath{Move::both, Move::source, Move::source,
                                    Move::both, Move::both,   Move::target};

Sequences random_instance(std::mt19937_64& rng, int max_len = 6) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  Sequences q;
  q.t = to_vector(random_times(rng, len(rng), 0.0, 10.0));
  q.s = to_vector(random_times(rng, len(rng), 0.0, 10.0));
  q.a.resize(q.t.size());
  q.b.resize(q.s.size());
  for (Eigen::Index k = 0; k < q.a.size(); ++k) q.a(k) = value(rng);
  for (Eigen::Index k = 0; k < q.b.size(); ++k) q.b(k) = value(rng);
  return q;
}

}  // namespace

TEST_CASE("aligning a curve with itself gives the zero-cost diagonal") {
  const Domain domain(0.0, 10.0);
  const EventCurve c = anchor_curve(build_curve("1", {2.0, 4.0, 7.0}, domain), domain);
  const AlignResult r = align(c, c);
  CHECK(r.cost == 0.0);
  CHECK(r.alignment.length() == c.size());
  for (Move mv : r.alignment.steps) CHECK(mv == Move::both);
}

TEST_CASE("alignment_cost reproduces the hand-computed two-point case") {
  const Eigen::VectorXd t = to_vector({0.0, 10.0});
  const Eigen::VectorXd a = to_vector({0.0, 1.0});
  const Eigen::VectorXd b = to_vector({0.0, 0.5});
  const Alignment diagonal{2, 2, {Move::both, Move::both}};
  CHECK(alignment_cost(diagonal, t, a, t, b) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("enumerate_alignments handles the smallest shapes") {
  const auto one = enumerate_alignments(1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].steps == std::vector<Move>{Move::both});

  // Without the adjacency exclusion there would be 3 paths on a 2x2 lattice;
  // the exclusion leaves only the double diagonal.
  const auto two = enumerate_alignments(2, 2);
  REQUIRE(two.size() == 1);
  CHECK(two[0].steps == std::vector<Move>{Move::both, Move::both});
}

TEST_CASE("enumerate_alignments matches an independent recursive count") {
  for (Eigen::Index l = 1; l <= 5; ++l)
    for (Eigen::Index m = 1; m <= 5; ++m) {
      const auto paths = enumerate_alignments(l, m);
      CHECK(paths.size() == count_paths(l, m));
      for (const Alignment& p : paths) {
        CHECK_FALSE(violates_adjacency_rule(p));
        CHECK_NOTHROW(validate_alignment(p));
      }
    }
  CHECK_THROWS_AS(enumerate_alignments(9, 2), Error);
}

TEST_CASE("the figure fixture has a unique optimum that the DP returns") {
  const Sequences f = figure_fixture();

  // oracle: exactly one zero-cost alignment exists, and it is the fixture path
  int zero_cost = 0;
  for (const Alignment& p : enumerate_alignments(5, 4)) {
    const double c = alignment_cost(p, f.t, f.a, f.s, f.b);
    if (c < 1e-15) {
      ++zero_cost;
      CHECK(p.steps == kFigurePath);
    } else {
      CHECK(c > 1e-3);
    }
  }
  CHECK(zero_cost == 1);

  const AlignResult r = align_sequences(f.t, f.a, f.s, f.b);
  CHECK(r.alignment.steps == kFigurePath);
  CHECK(r.cost == 0.0);

  // swapping the roles transposes the unique optimal path
  const AlignResult rt = align_sequences(f.s, f.b, f.t, f.a);
  CHECK(rt.cost == doctest::Approx(r.cost).epsilon(1e-14));
  REQUIRE(rt.alignment.length() == r.alignment.length());
  for (Eigen::Index k = 0; k < r.alignment.length(); ++k) {
    const Move mv = r.alignment.steps[static_cast<std::size_t>(k)];
    const Move tr = mv == Move::source ? Move::target : mv == Move::target ? Move::source : mv;
    CHECK(rt.alignment.steps[static_cast<std::size_t>(k)] == tr);
  }
}

TEST_CASE("DP cost equals the exhaustive minimum on random instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    const Sequences q = random_instance(rng);
    const AlignResult r = align_sequences(q.t, q.a, q.s, q.b);

    double best = std::numeric_limits<double>::infinity();
    for (const Alignment& p : enumerate_alignments(q.a.size(), q.b.size()))
      best = std::min(best, alignment_cost(p, q.t, q.a, q.s, q.b));
    CHECK(r.cost == doctest::Approx(best).epsilon(1e-12));

    // the reported cost is consistent with re-evaluating the returned path
    CHECK(alignment_cost(r.alignment, q.t, q.a, q.s, q.b) ==
          doctest::Approx(r.cost).epsilon(1e-12));
    CHECK_FALSE(violates_adjacency_rule(r.alignment));

    const auto path = lattice_path(r.alignment);
    CHECK(path.front() == std::make_pair<Eigen::Index, Eigen::Index>(1, 1));
    CHECK(path.back() == std::make_pair(q.a.size(), q.b.size()));

    // symmetry of the optimal cost under swapping the roles
    const AlignResult rs = align_sequences(q.s, q.b, q.t, q.a);
    CHECK(rs.cost == doctest::Approx(r.cost).epsilon(1e-12));

    // determinism
    const AlignResult r2 = align_sequences(q.t, q.a, q.s, q.b);
    CHECK(r2.alignment.steps == r.alignment.steps);
  }
}

TEST_CASE("cost scales linearly under a common rescaling of both time axes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Sequences q = random_instance(rng);
    const double scale = 3.5;
    const AlignResult r = align_sequences(q.t, q.a, q.s, q.b);
    const AlignResult rs = align_sequences(scale * q.t, q.a, scale * q.s, q.b);
    CHECK(rs.alignment.steps == r.alignment.steps);
    CHECK(rs.cost == doctest::Approx(scale * r.cost).epsilon(1e-12));
  }
}

TEST_CASE("forced pairs route the path through the requested cells") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Sequences q = random_instance(rng);
    const Eigen::Index l = q.a.size(), m = q.b.size();
    if (l < 2 || m < 2) continue;
    std::uniform_int_distribution<Eigen::Index> pick_i(1, l), pick_j(1, m);
    const Eigen::Index fi = pick_i(rng), fj = pick_j(rng);
    // a pair on the first row/column with the whole remainder in the other
    // direction cannot be reached without a source<->target adjacency
    if ((fi == 1 && fj == m && l > 1) || (fj == 1 && fi == l && m > 1)) continue;

    AlignOptions options;
    options.forced_pairs = {{fi, fj}};
    const AlignResult r = align_sequences(q.t, q.a, q.s, q.b, options);
    const auto path = lattice_path(r.alignment);
    CHECK(std::find(path.begin(), path.end(), std::make_pair(fi, fj)) != path.end());
    CHECK_FALSE(violates_adjacency_rule(r.alignment));
    CHECK(path.back() == std::make_pair(l, m));

    // forcing a pair can only cost more than the unconstrained optimum
    const AlignResult free = align_sequences(q.t, q.a, q.s, q.b);
    CHECK(r.cost >= free.cost - 1e-12);
  }
}

TEST_CASE("invalid forced pairs are rejected") {
  const Sequences f = figure_fixture();
  AlignOptions options;
  options.forced_pairs = {{0, 2}};
  CHECK_THROWS_AS(align_sequences(f.t, f.a, f.s, f.b, options), Error);
  options.forced_pairs = {{6, 2}};
  CHECK_THROWS_AS(align_sequences(f.t, f.a, f.s, f.b, options), Error);
  options.forced_pairs = {{2, 3}, {3, 1}};  // second pair is behind the first
  CHECK_THROWS_AS(align_sequences(f.t, f.a, f.s, f.b, options), Error);
  try {
    options.forced_pairs = {{2, 3}, {3, 1}};
    align_sequences(f.t, f.a, f.s, f.b, options);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_forced_pair);
  }

  // forcing the corner of the first row leaves only excluded continuations
  options.forced_pairs = {{1, 4}};
  CHECK_THROWS_AS(align_sequences(f.t, f.a, f.s, f.b, options), Error);
}

TEST_CASE("align requires anchored curves on one domain") {
  const Domain domain(0.0, 10.0);
  const EventCurve raw = build_curve("1", {2.0, 4.0}, domain);
  const EventCurve anchored = anchor_curve(raw, domain);
  CHECK_THROWS_AS(align(raw, anchored), Error);

  const Domain other(0.0, 20.0);
  const EventCurve other_curve = anchor_curve(build_curve("2", {2.0, 4.0}, other), other);
  CHECK_THROWS_AS(align(anchored, other_curve), Error);
}

TEST_CASE("alignment run counter tracks DP executions") {
  reset_alignment_run_count();
  const Sequences f = figure_fixture();
  (void)align_sequences(f.t, f.a, f.s, f.b);
  (void)align_sequences(f.t, f.a, f.s, f.b);
  CHECK(alignment_run_count() == 2);
}
